"""Asymptotic covariances of the estimator and their Monte Carlo verification.

The scaled quantile errors converge jointly to a Gaussian whose covariance
depends only on the grid quantile levels.  Pushing that law through the
field's derivative (delta method) and the linear coefficient transform gives
the limiting second moments of the coefficient estimate; a complex linear
map of a real Gaussian needs both the Hermitian covariance E[S S^H] and the
pseudo-covariance E[S S^T] to pin down the limit.  This module computes all
of those in closed form, provides the exact finite-n Beta moments of uniform
order statistics as an oracle, and runs seeded Monte Carlo pipelines to
compare empirical second moments against the formulas.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numpy as np

from .estimator import estimate_coeffs, reconstruct
from .fields import FourierCoefficients, build_dft_matrix, eval_derivative, eval_field, _freeze
from .parallel import trial_map
from .sampling import SampleSet, deploy, quantile_indices, sorted_locations

DERIVATIVE_IMAG_TOL = 1e-8


def quantile_covariance(b: int) -> np.ndarray:
    """Limiting covariance of the scaled quantile errors on the grid levels.

    Entry (i, j) is ``p_i (1 - p_j)`` for ``i <= j`` with levels
    ``p_l = l/(2b+1)``; symmetric, and identically zero in the first row and
    column because the lowest level is zero.
    """
    if b < 0:
        raise ValueError(f"bandwidth index must be >= 0, got {b}")
    p = np.arange(2 * b + 1) / (2 * b + 1)
    return np.minimum.outer(p, p) * (1.0 - np.maximum.outer(p, p))


def field_sample_covariance(c: FourierCoefficients, b: int) -> np.ndarray:
    """Delta-method covariance of the scaled grid-sample errors.

    Conjugates the quantile covariance by the diagonal matrix of field
    derivatives at the grid points.  The derivative must be real (up to
    rounding) for the delta method on a real Gaussian to apply; a residual
    imaginary part above tolerance is an error.
    """
    if b != c.b:
        raise ValueError(f"bandwidth mismatch: field b={c.b}, requested b={b}")
    grid = np.arange(2 * b + 1) / (2 * b + 1)
    d = eval_derivative(c, grid)
    imag_resid = float(np.max(np.abs(d.imag))) if d.size else 0.0
    if imag_resid > DERIVATIVE_IMAG_TOL:
        raise ValueError(
            f"field derivative has imaginary residual {imag_resid:.3e}; "
            "sample covariance requires a real-valued field"
        )
    dr = d.real
    return np.outer(dr, dr) * quantile_covariance(b)


def coeff_covariance(k_samples: np.ndarray, b: int) -> tuple[np.ndarray, np.ndarray]:
    """Hermitian and pseudo covariance of the limiting coefficient errors.

    With S the image of the real Gaussian sample-error limit X under the
    scaled conjugate-transpose grid transform, returns
    ``E[S S^H] = Phi^H K Phi / (2b+1)^2`` and
    ``E[S S^T] = Phi^H K conj(Phi) / (2b+1)^2``.
    """
    m = 2 * b + 1
    k = np.asarray(k_samples, dtype=np.float64)
    if k.shape != (m, m):
        raise ValueError(f"expected covariance of shape {(m, m)}, got {k.shape}")
    phi = build_dft_matrix(b).entries
    scale = float(m) ** 2
    herm = phi.conj().T @ k @ phi / scale
    pseudo = phi.conj().T @ k @ phi.conj() / scale
    return herm, pseudo


@dataclass(frozen=True, eq=False)
class CovarianceBundle:
    """All limiting covariances of the estimation pipeline for one field."""

    b: int
    quantile_cov: np.ndarray
    sample_cov: np.ndarray
    coeff_cov_herm: np.ndarray
    coeff_cov_pseudo: np.ndarray

    def __post_init__(self):
        m = 2 * self.b + 1
        for name in ("quantile_cov", "sample_cov", "coeff_cov_herm", "coeff_cov_pseudo"):
            a = np.asarray(getattr(self, name)).copy()
            if a.shape != (m, m):
                raise ValueError(f"{name} must have shape {(m, m)}, got {a.shape}")
            object.__setattr__(self, name, _freeze(a))


def covariance_bundle(c: FourierCoefficients) -> CovarianceBundle:
    """Compute the full covariance bundle for a field."""
    quant = quantile_covariance(c.b)
    samp = field_sample_covariance(c, c.b)
    herm, pseudo = coeff_covariance(samp, c.b)
    return CovarianceBundle(
        b=c.b, quantile_cov=quant, sample_cov=samp, coeff_cov_herm=herm, coeff_cov_pseudo=pseudo
    )


def pointwise_variance(bundle: CovarianceBundle, t: float) -> tuple[complex, float]:
    """Limiting second moments of the scaled reconstruction error at ``t``.

    Returns ``(E[E(t)^2], E[|E(t)|^2])`` for the complex Gaussian limit E(t)
    of the scaled pointwise error: the plain second moment is the quadratic
    form of the pseudo-covariance in the evaluation vector, the absolute one
    the Hermitian form, which is real and non-negative.
    """
    k = np.arange(-bundle.b, bundle.b + 1)
    phi_t = np.exp(2j * np.pi * k * float(t))
    second = complex(phi_t @ bundle.coeff_cov_pseudo @ phi_t)
    abs_second = phi_t @ bundle.coeff_cov_herm @ np.conj(phi_t)
    if abs(abs_second.imag) > 1e-9:
        raise ValueError(f"Hermitian form produced imaginary residual {abs_second.imag:.3e}")
    return second, max(float(abs_second.real), 0.0)


def beta_moments(r: int, n: int) -> tuple[float, float]:
    """Exact mean and variance of the r-th of n uniform order statistics.

    The r-th order statistic of n i.i.d. Uniform[0,1] draws is
    Beta(r, n-r+1), so the mean is ``r/(n+1)`` and the variance
    ``r (n-r+1) / ((n+1)^2 (n+2))``.
    """
    if not 1 <= r <= n:
        raise ValueError(f"rank must satisfy 1 <= r <= n, got r={r}, n={n}")
    mean = r / (n + 1)
    variance = r * (n - r + 1) / ((n + 1) ** 2 * (n + 2))
    return mean, variance


def _rel_frobenius(empirical: np.ndarray, analytic: np.ndarray) -> float:
    """Relative Frobenius distance; absolute when the reference is zero."""
    ref = float(np.linalg.norm(analytic))
    err = float(np.linalg.norm(empirical - analytic))
    return err if ref == 0.0 else err / ref


@dataclass(frozen=True, eq=False)
class QuantileMoments:
    level_index: int
    rank: int
    level: float
    mean: float
    variance: float
    beta_mean: float
    beta_variance: float


@dataclass(frozen=True, eq=False)
class PointwiseCheck:
    t: float
    analytic_second_moment: complex
    analytic_abs_second_moment: float
    empirical_second_moment: complex
    empirical_abs_second_moment: float


@dataclass(frozen=True, eq=False)
class CltReport:
    """Empirical versus analytic second moments from repeated pipelines."""

    b: int
    n: int
    trials: int
    empirical_coeff_cov: np.ndarray
    analytic_coeff_cov: np.ndarray
    coeff_cov_rel_err: float
    empirical_coeff_pseudo: np.ndarray
    analytic_coeff_pseudo: np.ndarray
    coeff_pseudo_rel_err: float
    empirical_quantile_cov: np.ndarray
    analytic_quantile_cov: np.ndarray
    quantile_cov_rel_err: float
    per_quantile_moments: tuple = ()
    pointwise_checks: tuple = ()

    def to_json_dict(self) -> dict:
        return {
            "b": int(self.b),
            "n": int(self.n),
            "trials": int(self.trials),
            "empirical_coeff_cov": matrix_to_json(self.empirical_coeff_cov),
            "analytic_coeff_cov": matrix_to_json(self.analytic_coeff_cov),
            "coeff_cov_rel_err": float(self.coeff_cov_rel_err),
            "empirical_coeff_pseudo": matrix_to_json(self.empirical_coeff_pseudo),
            "analytic_coeff_pseudo": matrix_to_json(self.analytic_coeff_pseudo),
            "coeff_pseudo_rel_err": float(self.coeff_pseudo_rel_err),
            "empirical_quantile_cov": matrix_to_json(self.empirical_quantile_cov),
            "analytic_quantile_cov": matrix_to_json(self.analytic_quantile_cov),
            "quantile_cov_rel_err": float(self.quantile_cov_rel_err),
            "per_quantile_moments": [
                {
                    "level_index": int(q.level_index),
                    "rank": int(q.rank),
                    "level": float(q.level),
                    "mean": float(q.mean),
                    "variance": float(q.variance),
                    "beta_mean": float(q.beta_mean),
                    "beta_variance": float(q.beta_variance),
                }
                for q in self.per_quantile_moments
            ],
            "pointwise_checks": [
                {
                    "t": float(p.t),
                    "analytic_second_moment": [
                        p.analytic_second_moment.real,
                        p.analytic_second_moment.imag,
                    ],
                    "analytic_abs_second_moment": float(p.analytic_abs_second_moment),
                    "empirical_second_moment": [
                        p.empirical_second_moment.real,
                        p.empirical_second_moment.imag,
                    ],
                    "empirical_abs_second_moment": float(p.empirical_abs_second_moment),
                }
                for p in self.pointwise_checks
            ],
        }


def matrix_to_json(m: np.ndarray) -> dict:
    """Encode a real or complex matrix as row-major [re, im] pairs."""
    a = np.asarray(m, dtype=np.complex128)
    return {
        "shape": [int(a.shape[0]), int(a.shape[1])],
        "data": [[float(z.real), float(z.imag)] for z in a.ravel(order="C")],
    }


def matrix_from_json(doc: dict) -> np.ndarray:
    rows, cols = (int(x) for x in doc["shape"])
    flat = np.array([complex(re, im) for re, im in doc["data"]], dtype=np.complex128)
    if flat.size != rows * cols:
        raise ValueError(f"matrix data length {flat.size} does not match shape {(rows, cols)}")
    return flat.reshape(rows, cols)


def clt_empirical_check(
    field: FourierCoefficients,
    b: int,
    n: int,
    trials: int,
    rng: np.random.Generator,
    eval_points=None,
) -> CltReport:
    """Run independent deploy/observe/estimate pipelines and compare moments.

    Each trial owns a generator spawned from ``rng``, draws a fresh
    deployment, estimates the coefficients from the ordered values, and
    contributes the scaled errors.  Second moments are taken about the
    analytic limits (which are zero-mean), and the quantile comparison drops
    the degenerate zero-level coordinate that the limit law excludes.
    """
    if b != field.b:
        raise ValueError(f"bandwidth mismatch: field b={field.b}, requested b={b}")
    if trials < 2:
        raise ValueError(f"need at least 2 trials, got {trials}")
    ranks = quantile_indices(n, b)
    levels = np.arange(2 * b + 1) / (2 * b + 1)
    m = 2 * b + 1
    sqrt_n = np.sqrt(n)
    truth = field.coeffs
    bundle = covariance_bundle(field)
    points = np.asarray(eval_points, dtype=np.float64) if eval_points is not None else None
    truth_at_points = eval_field(field, points) if points is not None else None

    child_rngs = rng.spawn(trials)

    def one_trial(i: int):
        draw = deploy(n, child_rngs[i])
        locs = sorted_locations(draw)
        values = eval_field(field, locs)
        sample = SampleSet(n=n, values=values, b_source=field.b)
        est = estimate_coeffs(sample, b)
        coeff_err = sqrt_n * (est.coeffs - truth)
        quant = locs[ranks - 1]
        quant_err = sqrt_n * (quant - levels)
        point_err = (
            sqrt_n * (reconstruct(est, points) - truth_at_points) if points is not None else None
        )
        return coeff_err, quant_err, quant, point_err

    results = trial_map(one_trial, trials)

    coeff_errs = np.stack([r[0] for r in results])
    quant_errs = np.stack([r[1] for r in results])
    quants = np.stack([r[2] for r in results])

    emp_coeff = coeff_errs.T @ coeff_errs.conj() / trials
    ana_coeff = np.asarray(bundle.coeff_cov_herm)
    coeff_rel = _rel_frobenius(emp_coeff, ana_coeff)

    emp_pseudo = coeff_errs.T @ coeff_errs / trials
    ana_pseudo = np.asarray(bundle.coeff_cov_pseudo)
    pseudo_rel = _rel_frobenius(emp_pseudo, ana_pseudo)

    # Degenerate zero-level coordinate excluded: its scaled error collapses
    # to zero and the limit law is stated for strictly interior levels.
    emp_quant = quant_errs[:, 1:].T @ quant_errs[:, 1:] / trials if b > 0 else np.zeros((0, 0))
    ana_quant = np.asarray(bundle.quantile_cov[1:, 1:]) if b > 0 else np.zeros((0, 0))
    quant_rel = _rel_frobenius(emp_quant, ana_quant) if b > 0 else 0.0

    moments = []
    for l in range(m):
        beta_mean, beta_var = beta_moments(int(ranks[l]), n)
        moments.append(
            QuantileMoments(
                level_index=l,
                rank=int(ranks[l]),
                level=float(levels[l]),
                mean=float(np.mean(quants[:, l])),
                variance=float(np.var(quants[:, l], ddof=1)),
                beta_mean=beta_mean,
                beta_variance=beta_var,
            )
        )

    checks = []
    if points is not None:
        point_errs = np.stack([r[3] for r in results])
        for j, t in enumerate(points):
            sec, abs_sec = pointwise_variance(bundle, float(t))
            col = point_errs[:, j]
            checks.append(
                PointwiseCheck(
                    t=float(t),
                    analytic_second_moment=sec,
                    analytic_abs_second_moment=abs_sec,
                    empirical_second_moment=complex(np.mean(col**2)),
                    empirical_abs_second_moment=float(np.mean(np.abs(col) ** 2)),
                )
            )

    return CltReport(
        b=b,
        n=n,
        trials=trials,
        empirical_coeff_cov=emp_coeff,
        analytic_coeff_cov=ana_coeff,
        coeff_cov_rel_err=coeff_rel,
        empirical_coeff_pseudo=emp_pseudo,
        analytic_coeff_pseudo=ana_pseudo,
        coeff_pseudo_rel_err=pseudo_rel,
        empirical_quantile_cov=emp_quant,
        analytic_quantile_cov=ana_quant,
        quantile_cov_rel_err=quant_rel,
        per_quantile_moments=tuple(moments),
        pointwise_checks=tuple(checks),
    )
