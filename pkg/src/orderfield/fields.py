"""Periodic bandlimited fields represented by their Fourier coefficients.

A field with bandwidth index ``b`` is a trigonometric polynomial on the unit
period with 2b+1 complex coefficients, stored in frequency order
``-b, ..., -1, 0, 1, ..., b``.  All evaluation, differentiation and the
coefficient/sample transforms are exact linear algebra on that vector.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

CONJ_SYMMETRY_TOL = 1e-12
BOUNDED_SUM_TOL = 1e-12


def _freeze(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class FourierCoefficients:
    """Complex Fourier coefficients of a periodic bandlimited field.

    ``coeffs[i]`` is the coefficient of ``exp(2j*pi*k*t)`` with
    ``k = i - b``.  ``real_valued`` declares conjugate symmetry
    (``coeffs[b+k] == conj(coeffs[b-k])``) and ``bounded`` declares that the
    coefficient magnitudes sum to at most one, which forces the field
    amplitude to stay within [-1, 1].  Both declarations are verified at
    construction time.
    """

    b: int
    coeffs: np.ndarray
    real_valued: bool = False
    bounded: bool = False

    def __post_init__(self):
        if self.b < 0:
            raise ValueError(f"bandwidth index must be >= 0, got {self.b}")
        c = np.asarray(self.coeffs, dtype=np.complex128).copy()
        if c.ndim != 1 or c.size != 2 * self.b + 1:
            raise ValueError(
                f"expected {2 * self.b + 1} coefficients for b={self.b}, got shape {c.shape}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if self.real_valued:
            asym = np.max(np.abs(c - np.conj(c[::-1])))
            if asym > CONJ_SYMMETRY_TOL:
                raise ValueError(
                    f"real_valued flag requires conjugate symmetry; residual {asym:.3e}"
                )
        if self.bounded:
            total = float(np.sum(np.abs(c)))
            if total > 1.0 + BOUNDED_SUM_TOL:
                raise ValueError(
                    f"bounded flag requires coefficient magnitudes to sum to <= 1, got {total!r}"
                )
        object.__setattr__(self, "coeffs", _freeze(c))

    @property
    def k_values(self) -> np.ndarray:
        """Frequency indices matching the coefficient order."""
        return np.arange(-self.b, self.b + 1)

    def to_json_dict(self) -> dict:
        return {
            "b": int(self.b),
            "real_valued": bool(self.real_valued),
            "coeffs": [[float(z.real), float(z.imag)] for z in self.coeffs],
        }

    @classmethod
    def from_json_dict(cls, doc: dict) -> "FourierCoefficients":
        try:
            b = int(doc["b"])
            real_valued = bool(doc["real_valued"])
            c = np.array(
                [complex(re, im) for re, im in doc["coeffs"]], dtype=np.complex128
            )
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed field document: {exc}") from exc
        bounded = bool(np.sum(np.abs(c)) <= 1.0 + BOUNDED_SUM_TOL)
        return cls(b=b, coeffs=c, real_valued=real_valued, bounded=bounded)


@dataclass(frozen=True, eq=False)
class DftMatrix:
    """Square matrix mapping coefficients to field samples on the uniform grid.

    Row ``l``, column ``k`` (k counted from -b) holds ``exp(2j*pi*k*l*s)``
    with grid spacing ``s = 1/(2b+1)``.  Columns are orthogonal with squared
    norm 2b+1, so the inverse is the scaled conjugate transpose.
    """

    b: int
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        m = 2 * self.b + 1
        e = np.asarray(self.entries, dtype=np.complex128).copy()
        if e.shape != (m, m):
            raise ValueError(f"expected shape {(m, m)}, got {e.shape}")
        object.__setattr__(self, "entries", _freeze(e))

    @property
    def conj_t(self) -> np.ndarray:
        """Conjugate transpose of the entries."""
        return self.entries.conj().T


def build_dft_matrix(b: int) -> DftMatrix:
    """Construct the coefficient-to-sample matrix for bandwidth index ``b``."""
    if b < 0:
        raise ValueError(f"bandwidth index must be >= 0, got {b}")
    spacing = 1.0 / (2 * b + 1)
    l = np.arange(2 * b + 1)
    k = np.arange(-b, b + 1)
    entries = np.exp(2j * np.pi * spacing * np.outer(l, k))
    return DftMatrix(b=b, entries=entries)


def _horner_eval(coeffs: np.ndarray, b: int, t):
    """Evaluate sum_k coeffs[b+k] * exp(2j*pi*k*t) for scalar or array t."""
    t = np.mod(np.asarray(t, dtype=np.float64), 1.0)
    z = np.exp(2j * np.pi * t)
    acc = np.full_like(z, coeffs[-1])
    for m in range(2 * b - 1, -1, -1):
        acc = acc * z + coeffs[m]
    if b > 0:
        acc = acc * np.exp(-2j * np.pi * b * t)
    return acc


def eval_field(c: FourierCoefficients, t):
    """Field value at time ``t`` (scalar or array), periodic with period one.

    Returns complex values; for a conjugate-symmetric field the imaginary
    part is rounding noise and stays below 1e-10.
    """
    return _horner_eval(c.coeffs, c.b, t)


def eval_derivative(c: FourierCoefficients, t):
    """Time derivative of the field at ``t`` (scalar or array).

    Differentiation multiplies each coefficient by ``2j*pi*k``; for a field
    whose coefficient magnitudes sum to at most one the result magnitude is
    bounded by ``2*pi*b`` (the classical derivative bound for trigonometric
    polynomials of unit sup norm).
    """
    k = np.arange(-c.b, c.b + 1)
    return _horner_eval(c.coeffs * (2j * np.pi * k), c.b, t)


def samples_from_coeffs(c: FourierCoefficients) -> np.ndarray:
    """Field values on the uniform grid ``t = l/(2b+1)``, ``l = 0..2b``."""
    return build_dft_matrix(c.b).entries @ c.coeffs


def coeffs_from_samples(g_vec: np.ndarray) -> FourierCoefficients:
    """Recover coefficients from the 2b+1 uniform grid samples.

    The inverse transform is the scaled conjugate transpose of the grid
    matrix; round-tripping through `samples_from_coeffs` is the identity to
    within 1e-10 per entry.
    """
    g = np.asarray(g_vec, dtype=np.complex128)
    if g.ndim != 1 or g.size % 2 != 1:
        raise ValueError(f"expected an odd-length sample vector, got shape {g.shape}")
    b = (g.size - 1) // 2
    phi = build_dft_matrix(b)
    coeffs = phi.conj_t @ g / (2 * b + 1)
    return FourierCoefficients(b=b, coeffs=coeffs)


def random_field(b: int, rng: np.random.Generator, real_valued: bool = True) -> FourierCoefficients:
    """Draw a random bounded field with coefficient magnitudes summing to one.

    Magnitudes and phases are drawn independently and uniformly, conjugate
    symmetry is imposed when ``real_valued`` is set, and the whole vector is
    rescaled so the magnitudes sum to exactly one.  The triangle inequality
    then keeps the field amplitude within [-1, 1] everywhere.
    """
    if b < 0:
        raise ValueError(f"bandwidth index must be >= 0, got {b}")
    m = 2 * b + 1
    if real_valued:
        mags = rng.uniform(0.0, 1.0, size=b + 1)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=b)
        sign = 1.0 if rng.random() < 0.5 else -1.0
        c = np.zeros(m, dtype=np.complex128)
        c[b] = sign * mags[0]
        for k in range(1, b + 1):
            c[b + k] = mags[k] * np.exp(1j * phases[k - 1])
            c[b - k] = np.conj(c[b + k])
    else:
        mags = rng.uniform(0.0, 1.0, size=m)
        phases = rng.uniform(0.0, 2.0 * np.pi, size=m)
        c = mags * np.exp(1j * phases)
    total = float(np.sum(np.abs(c)))
    if total == 0.0:
        c = np.zeros(m, dtype=np.complex128)
        c[b] = 1.0
    else:
        c = c / total
    return FourierCoefficients(b=b, coeffs=c, real_valued=real_valued, bounded=True)


def save_field(c: FourierCoefficients, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(c.to_json_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_field(path) -> FourierCoefficients:
    with open(path, "r", encoding="utf-8") as fh:
        return FourierCoefficients.from_json_dict(json.load(fh))
