"""Why unordered samples cannot identify the field.

The empirical distribution of the bare values converges to the measure of
the sublevel sets of the field, and every cyclic shift of the field has the
same sublevel-set measures.  Shifted fields are genuinely different (their
squared L2 distance is an explicit coefficient-space sum) yet produce
identical value laws, so order information is essential.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import FourierCoefficients, eval_field, _freeze

VALUE_IMAG_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ValueCdf:
    """Cumulative distribution of field values on an ascending threshold grid."""

    grid: np.ndarray
    cdf: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.grid, dtype=np.float64).copy()
        c = np.asarray(self.cdf, dtype=np.float64).copy()
        if g.ndim != 1 or g.shape != c.shape:
            raise ValueError("grid and cdf must be matching one-dimensional arrays")
        if g.size >= 2 and np.any(np.diff(g) <= 0):
            raise ValueError("grid must be strictly ascending")
        if np.any(np.diff(c) < 0) or (c.size and (c[0] < 0.0 or c[-1] > 1.0)):
            raise ValueError("cdf values must be non-decreasing within [0, 1]")
        object.__setattr__(self, "grid", _freeze(g))
        object.__setattr__(self, "cdf", _freeze(c))


def _real_values(values: np.ndarray, what: str) -> np.ndarray:
    v = np.asarray(values)
    if np.iscomplexobj(v):
        resid = float(np.max(np.abs(v.imag))) if v.size else 0.0
        if resid > VALUE_IMAG_TOL:
            raise ValueError(f"{what} must be real; imaginary residual {resid:.3e}")
        v = v.real
    return np.asarray(v, dtype=np.float64)


def empirical_value_cdf(values: np.ndarray, grid: np.ndarray) -> ValueCdf:
    """Fraction of values at or below each grid threshold."""
    g = np.asarray(grid, dtype=np.float64)
    if g.ndim != 1 or g.size == 0:
        raise ValueError("grid must be a non-empty one-dimensional array")
    if g.size >= 2 and np.any(np.diff(g) <= 0):
        raise ValueError("grid must be strictly ascending")
    v = np.sort(_real_values(values, "field values"))
    if v.size == 0:
        raise ValueError("need at least one value")
    cdf = np.searchsorted(v, g, side="right") / v.size
    return ValueCdf(grid=g, cdf=cdf)


def level_measure(c: FourierCoefficients, x: float, grid_points: int) -> float:
    """Approximate measure of the set where the field lies at or below ``x``.

    Counts field values on a uniform grid of ``grid_points`` locations; the
    error versus the true sublevel-set measure is at most the number of
    level crossings over the grid size, i.e. ``2b/grid_points`` per field.
    """
    return float(level_measure_curve(c, np.array([float(x)]), grid_points)[0])


def level_measure_curve(c: FourierCoefficients, xs: np.ndarray, grid_points: int) -> np.ndarray:
    """`level_measure` over an ascending array of thresholds, sharing one grid."""
    if grid_points < 2 * c.b + 1:
        raise ValueError(
            f"grid must have at least {2 * c.b + 1} points for b={c.b}, got {grid_points}"
        )
    t = np.arange(grid_points) / grid_points
    vals = np.sort(_real_values(eval_field(c, t), "field values"))
    xs = np.asarray(xs, dtype=np.float64)
    return np.searchsorted(vals, xs, side="right") / grid_points


def shift_field(c: FourierCoefficients, theta: float) -> FourierCoefficients:
    """Cyclically shift the field by ``theta``: coefficient k picks up phase
    ``exp(-2j*pi*k*theta)``.  Real-valuedness and boundedness survive."""
    k = np.arange(-c.b, c.b + 1)
    shifted = c.coeffs * np.exp(-2j * np.pi * k * float(theta))
    return FourierCoefficients(
        b=c.b, coeffs=shifted, real_valued=c.real_valued, bounded=c.bounded
    )


def shift_distortion(c: FourierCoefficients, theta: float) -> float:
    """Squared L2 distance between the field and its shift, in closed form."""
    k = np.arange(-c.b, c.b + 1)
    return float(
        np.sum(np.abs(c.coeffs) ** 2 * np.abs(1.0 - np.exp(-2j * np.pi * k * float(theta))) ** 2)
    )


@dataclass(frozen=True, eq=False)
class AmbiguityReport:
    """Evidence that a shift changes the field but not its value law."""

    b: int
    theta: float
    n: int
    grid_points: int
    sup_cdf_diff_theory: float
    sup_cdf_diff_empirical: float
    distortion_between_fields: float
    thresholds: np.ndarray
    level_curve_original: np.ndarray
    level_curve_shifted: np.ndarray
    empirical_cdf_original: np.ndarray
    empirical_cdf_shifted: np.ndarray

    def __post_init__(self):
        for name in (
            "thresholds",
            "level_curve_original",
            "level_curve_shifted",
            "empirical_cdf_original",
            "empirical_cdf_shifted",
        ):
            a = np.asarray(getattr(self, name), dtype=np.float64).copy()
            object.__setattr__(self, name, _freeze(a))

    def to_json_dict(self) -> dict:
        return {
            "b": int(self.b),
            "theta": float(self.theta),
            "n": int(self.n),
            "grid_points": int(self.grid_points),
            "sup_cdf_diff_theory": float(self.sup_cdf_diff_theory),
            "sup_cdf_diff_empirical": float(self.sup_cdf_diff_empirical),
            "distortion_between_fields": float(self.distortion_between_fields),
        }


THRESHOLD_GRID_SIZE = 512


def default_threshold_grid() -> np.ndarray:
    """Ascending thresholds covering the full amplitude range of bounded fields."""
    return np.linspace(-1.0, 1.0, THRESHOLD_GRID_SIZE)


def ambiguity_demo(
    c: FourierCoefficients,
    theta: float,
    n: int,
    grid_points: int,
    rng: np.random.Generator,
) -> AmbiguityReport:
    """Compare the value laws of a field and its shift.

    The sublevel-measure curves of both fields are computed on a common
    threshold grid (their sup difference is the theory check), n independent
    uniform samples of each field feed the empirical value distributions
    (sup difference again), and the exact squared L2 distance between the
    two fields shows they differ as functions.
    """
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    shifted = shift_field(c, theta)
    xs = default_threshold_grid()

    curve_o = level_measure_curve(c, xs, grid_points)
    curve_s = level_measure_curve(shifted, xs, grid_points)
    sup_theory = float(np.max(np.abs(curve_o - curve_s)))

    values_o = eval_field(c, rng.random(n))
    values_s = eval_field(shifted, rng.random(n))
    cdf_o = empirical_value_cdf(values_o, xs)
    cdf_s = empirical_value_cdf(values_s, xs)
    sup_emp = float(np.max(np.abs(cdf_o.cdf - cdf_s.cdf)))

    return AmbiguityReport(
        b=c.b,
        theta=float(theta),
        n=n,
        grid_points=grid_points,
        sup_cdf_diff_theory=sup_theory,
        sup_cdf_diff_empirical=sup_emp,
        distortion_between_fields=shift_distortion(c, theta),
        thresholds=xs,
        level_curve_original=curve_o,
        level_curve_shifted=curve_s,
        empirical_cdf_original=cdf_o.cdf,
        empirical_cdf_shifted=cdf_s.cdf,
    )
