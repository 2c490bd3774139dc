"""Sensor deployment simulation and the ordered, location-free sample view.

Deployment draws independent uniform locations on the unit interval.  The
estimator is only ever handed a `SampleSet`: the field values listed in
increasing order of their locations, with the locations themselves dropped.
Simulation-side code that needs the hidden locations (covariance checks,
order-statistic diagnostics) reads them from the `DeploymentDraw` via
`sorted_locations`; nothing on the estimation path accepts a draw.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np

from .fields import FourierCoefficients, eval_field, _freeze


@dataclass(frozen=True, eq=False)
class DeploymentDraw:
    """Unordered i.i.d. uniform sensor locations from one deployment."""

    n: int
    locations: np.ndarray
    seed: str = ""

    def __post_init__(self):
        loc = np.asarray(self.locations, dtype=np.float64).copy()
        if loc.ndim != 1 or loc.size != self.n:
            raise ValueError(f"expected {self.n} locations, got shape {loc.shape}")
        if loc.size and (loc.min() < 0.0 or loc.max() > 1.0):
            raise ValueError("locations must lie in [0, 1]")
        object.__setattr__(self, "locations", _freeze(loc))


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Field values in increasing order of their hidden sampling locations.

    This is the estimator's entire input: ``n`` and the ordered values.
    ``b_source`` and ``seed`` are provenance metadata for serialization only.
    """

    n: int
    values: np.ndarray
    b_source: int = -1
    seed: str = ""

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.complex128).copy()
        if v.ndim != 1 or v.size != self.n:
            raise ValueError(f"expected {self.n} values, got shape {v.shape}")
        object.__setattr__(self, "values", _freeze(v))


def deploy(n: int, rng: np.random.Generator, seed_label: str = "") -> DeploymentDraw:
    """Scatter ``n`` sensors at independent Uniform[0, 1] locations."""
    if n < 1:
        raise ValueError(f"sample count must be >= 1, got {n}")
    return DeploymentDraw(n=n, locations=rng.random(n), seed=seed_label)


def sorted_locations(d: DeploymentDraw) -> np.ndarray:
    """Hidden locations in increasing order.

    Simulation-side only; ties (equal floats) keep draw order, which is
    unobservable in the values but fixes the convention.
    """
    return np.sort(d.locations, kind="stable")


def observe(field: FourierCoefficients, d: DeploymentDraw) -> SampleSet:
    """Evaluate the field at the sorted locations and drop the locations."""
    values = eval_field(field, sorted_locations(d))
    return SampleSet(n=d.n, values=values, b_source=field.b, seed=d.seed)


def quantile_indices(n: int, b: int) -> np.ndarray:
    """One-based order-statistic ranks targeting the uniform grid quantiles.

    Rank ``floor(n*l/(2b+1)) + 1`` for ``l = 0..2b``; integer arithmetic, so
    no float rounding can shift a rank.  Requires ``n >= 2b+1``, which makes
    the ranks strictly increasing.
    """
    if b < 0:
        raise ValueError(f"bandwidth index must be >= 0, got {b}")
    m = 2 * b + 1
    if n < m:
        raise ValueError(f"need at least {m} samples for bandwidth index {b}, got {n}")
    return np.array([(n * l) // m + 1 for l in range(m)], dtype=np.int64)


def extract_quantile_samples(s: SampleSet, ranks: np.ndarray) -> np.ndarray:
    """Values of the ordered sample at the given one-based ranks."""
    r = np.asarray(ranks, dtype=np.int64)
    if r.size and (r.min() < 1 or r.max() > s.n):
        raise ValueError(f"ranks must lie in [1, {s.n}], got range [{r.min()}, {r.max()}]")
    return s.values[r - 1]


def save_samples(s: SampleSet, csv_path, sidecar_path) -> None:
    """Write the ordered values as CSV plus a JSON sidecar with provenance."""
    with open(csv_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["value_re", "value_im"])
        for z in s.values:
            writer.writerow([f"{z.real:.17g}", f"{z.imag:.17g}"])
    with open(sidecar_path, "w", encoding="utf-8") as fh:
        json.dump(
            {"n": int(s.n), "b_source": int(s.b_source), "seed": s.seed},
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")


def load_samples(csv_path, sidecar_path) -> SampleSet:
    with open(sidecar_path, "r", encoding="utf-8") as fh:
        meta = json.load(fh)
    with open(csv_path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["value_re", "value_im"]:
            raise ValueError(f"unexpected sample CSV header: {header}")
        values = np.array([complex(float(re), float(im)) for re, im in reader])
    return SampleSet(
        n=int(meta["n"]), values=values, b_source=int(meta["b_source"]), seed=str(meta["seed"])
    )
