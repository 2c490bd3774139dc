"""Experiment orchestration: seeded Monte Carlo sweeps and report files.

Every trial derives its generator from ``SeedSequence((base_seed, b, n, i))``,
so any cell of any sweep can be reproduced in isolation and the outputs are
byte-identical at every worker count: workers only compute, and results are
merged in trial order before any reduction.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace

import numpy as np

from .ambiguity import AmbiguityReport, ambiguity_demo
from .asymptotics import CltReport, clt_empirical_check
from .estimator import distortion, distortion_bound, estimate_coeffs
from .fields import FourierCoefficients, load_field, random_field
from .parallel import trial_map
from .sampling import deploy, observe

MAX_SEED = 2**64

_CONFIG_REQUIRED = ("b_list", "n_list", "trials", "base_seed")
_CONFIG_OPTIONAL = ("field_source", "output_dir")

SWEEP_CSV_HEADER = "b,n,trials,mean_distortion,stderr,n_times_mse,bound"


def _int_list(values, name):
    out = []
    for v in values:
        if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
            raise ValueError(f"{name} entries must be integers, got {v!r}")
        out.append(int(v))
    return tuple(out)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated description of a Monte Carlo run.

    field_source is either the literal "random" (a fresh field per trial for
    sweeps, one fixed field per bandwidth for distribution checks) or a path
    to a saved coefficient file, which fixes the field for every trial.
    """

    b_list: tuple
    n_list: tuple
    trials: int
    base_seed: int
    field_source: str = "random"
    output_dir: str = ""

    def __post_init__(self):
        b_list = _int_list(self.b_list, "b_list")
        n_list = _int_list(self.n_list, "n_list")
        if not b_list:
            raise ValueError("b_list must be non-empty")
        if not n_list:
            raise ValueError("n_list must be non-empty")
        if len(set(b_list)) != len(b_list):
            raise ValueError("b_list entries must be unique")
        if len(set(n_list)) != len(n_list):
            raise ValueError("n_list entries must be unique")
        if min(b_list) < 0:
            raise ValueError("bandwidth indices must be >= 0")
        needed = 2 * max(b_list) + 1
        if min(n_list) < needed:
            raise ValueError(
                f"every n must be >= {needed} (= 2*max(b)+1), got n={min(n_list)}"
            )
        if isinstance(self.trials, bool) or not isinstance(self.trials, (int, np.integer)):
            raise ValueError(f"trials must be an integer, got {self.trials!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if isinstance(self.base_seed, bool) or not isinstance(self.base_seed, (int, np.integer)):
            raise ValueError(f"base_seed must be an integer, got {self.base_seed!r}")
        if not 0 <= self.base_seed < MAX_SEED:
            raise ValueError(f"base_seed must lie in [0, 2^64), got {self.base_seed}")
        if not isinstance(self.field_source, str) or not self.field_source:
            raise ValueError("field_source must be 'random' or a coefficient file path")
        if not isinstance(self.output_dir, str):
            raise ValueError("output_dir must be a string path")
        object.__setattr__(self, "b_list", b_list)
        object.__setattr__(self, "n_list", n_list)
        object.__setattr__(self, "trials", int(self.trials))
        object.__setattr__(self, "base_seed", int(self.base_seed))

    def to_json_dict(self):
        return {
            "b_list": list(self.b_list),
            "n_list": list(self.n_list),
            "trials": self.trials,
            "base_seed": self.base_seed,
            "field_source": self.field_source,
            "output_dir": self.output_dir,
        }

    @classmethod
    def from_json_dict(cls, d):
        if not isinstance(d, dict):
            raise ValueError("config must be a JSON object")
        unknown = sorted(set(d) - set(_CONFIG_REQUIRED) - set(_CONFIG_OPTIONAL))
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(unknown)}")
        missing = sorted(set(_CONFIG_REQUIRED) - set(d))
        if missing:
            raise ValueError(f"missing config keys: {', '.join(missing)}")
        kwargs = {k: d[k] for k in d}
        return cls(**kwargs)


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return ExperimentConfig.from_json_dict(json.load(fh))


@dataclass(frozen=True)
class SweepRow:
    """Monte Carlo distortion statistics for one (b, n) cell."""

    b: int
    n: int
    trials: int
    mean_distortion: float
    stderr_distortion: float
    n_times_mse: float
    bound: float

    def to_json_dict(self):
        return {
            "b": self.b,
            "n": self.n,
            "trials": self.trials,
            "mean_distortion": self.mean_distortion,
            "stderr": self.stderr_distortion,
            "n_times_mse": self.n_times_mse,
            "bound": self.bound,
        }


def _json_float(x):
    return float(x) if math.isfinite(x) else None


@dataclass(frozen=True)
class ExperimentReport:
    """All sweep rows plus the per-bandwidth log-log rate estimates."""

    rows: tuple
    slopes: dict

    def to_json_dict(self):
        return {
            "rows": [r.to_json_dict() for r in self.rows],
            "slopes": {str(b): _json_float(s) for b, s in self.slopes.items()},
        }


def _resolve_field(cfg: ExperimentConfig):
    """Load the fixed field named by the config, or None for random mode."""
    if cfg.field_source == "random":
        return None
    field = load_field(cfg.field_source)
    bad = [b for b in cfg.b_list if b != field.b]
    if bad:
        raise ValueError(
            f"fixed field has bandwidth {field.b} but config requests b={bad[0]}"
        )
    return field


def _cell_distortions(cfg: ExperimentConfig, b: int, n: int, fixed) -> np.ndarray:
    def one_trial(i):
        rng = np.random.default_rng(np.random.SeedSequence((cfg.base_seed, b, n, i)))
        field = fixed if fixed is not None else random_field(b, rng)
        draw = deploy(n, rng)
        samples = observe(field, draw)
        est = estimate_coeffs(samples, b)
        return distortion(est, field)

    return np.asarray(trial_map(one_trial, cfg.trials), dtype=np.float64)


def loglog_slope(n_values, means) -> float:
    """Least-squares slope of log(mean) against log(n); nan if degenerate."""
    ns = np.asarray(n_values, dtype=np.float64)
    ms = np.asarray(means, dtype=np.float64)
    if ns.size < 2 or np.any(ms <= 0.0):
        return float("nan")
    return float(np.polyfit(np.log(ns), np.log(ms), 1)[0])


def run_mse_sweep(cfg: ExperimentConfig) -> ExperimentReport:
    """Monte Carlo distortion over every (b, n) cell of the config.

    When output_dir is set, writes sweep.csv and sweep.json there; all
    validation (including loading a fixed field) happens before any file is
    touched, so a bad config never leaves partial output behind.
    """
    fixed = _resolve_field(cfg)
    rows = []
    slopes = {}
    for b in cfg.b_list:
        cell_means = []
        for n in cfg.n_list:
            dists = _cell_distortions(cfg, b, n, fixed)
            mean = float(np.mean(dists))
            if cfg.trials > 1:
                stderr = float(np.std(dists, ddof=1) / math.sqrt(cfg.trials))
            else:
                stderr = 0.0
            rows.append(
                SweepRow(
                    b=b,
                    n=n,
                    trials=cfg.trials,
                    mean_distortion=mean,
                    stderr_distortion=stderr,
                    n_times_mse=float(n * mean),
                    bound=distortion_bound(b),
                )
            )
            cell_means.append(mean)
        slopes[b] = loglog_slope(cfg.n_list, cell_means)
    report = ExperimentReport(rows=tuple(rows), slopes=slopes)
    if cfg.output_dir:
        os.makedirs(cfg.output_dir, exist_ok=True)
        write_sweep_csv(report, os.path.join(cfg.output_dir, "sweep.csv"))
        _write_json(os.path.join(cfg.output_dir, "sweep.json"), report.to_json_dict())
    return report


def write_sweep_csv(report: ExperimentReport, path):
    lines = [SWEEP_CSV_HEADER]
    for r in report.rows:
        lines.append(
            f"{r.b},{r.n},{r.trials},{r.mean_distortion:.17g},"
            f"{r.stderr_distortion:.17g},{r.n_times_mse:.17g},{r.bound:.17g}"
        )
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _write_json(path, obj):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def run_clt_check(cfg: ExperimentConfig, eval_points=None):
    """Distribution checks per (b, n) cell; returns the list of reports.

    Random mode fixes one field per bandwidth (drawn from the base seed)
    because the limit covariances depend on the field; a coefficient-file
    field_source pins the field explicitly.  Writes clt.json when
    output_dir is set.
    """
    fixed = _resolve_field(cfg)
    reports = []
    for b in cfg.b_list:
        if fixed is not None:
            field = fixed
        else:
            field_rng = np.random.default_rng(np.random.SeedSequence((cfg.base_seed, b)))
            field = random_field(b, field_rng)
        for n in cfg.n_list:
            rng = np.random.default_rng(np.random.SeedSequence((cfg.base_seed, b, n)))
            reports.append(
                clt_empirical_check(field, b, n, cfg.trials, rng, eval_points=eval_points)
            )
    if cfg.output_dir:
        os.makedirs(cfg.output_dir, exist_ok=True)
        payload = {"checks": [r.to_json_dict() for r in reports]}
        _write_json(os.path.join(cfg.output_dir, "clt.json"), payload)
    return reports


def _write_curve_csv(path, xs, ys):
    lines = ["x,cdf"]
    for x, y in zip(xs, ys):
        lines.append(f"{x:.17g},{y:.17g}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def run_ambiguity_demo(
    field: FourierCoefficients,
    theta: float,
    n: int,
    grid_points: int,
    seed: int,
    output_dir: str = "",
) -> AmbiguityReport:
    """Shift-indistinguishability demo; writes JSON plus curve CSVs.

    Output files: ambiguity.json with the scalar report, and four
    two-column (x, cdf) curves — the sublevel-measure curves of the field
    and its shift, and the empirical value distributions of each.
    """
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < MAX_SEED:
        raise ValueError(f"seed must lie in [0, 2^64), got {seed}")
    rng = np.random.default_rng(np.random.SeedSequence(int(seed)))
    report = ambiguity_demo(field, theta, n, grid_points, rng)
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        _write_json(os.path.join(output_dir, "ambiguity.json"), report.to_json_dict())
        xs = report.thresholds
        _write_curve_csv(
            os.path.join(output_dir, "ambiguity_level_original.csv"),
            xs, report.level_curve_original,
        )
        _write_curve_csv(
            os.path.join(output_dir, "ambiguity_level_shifted.csv"),
            xs, report.level_curve_shifted,
        )
        _write_curve_csv(
            os.path.join(output_dir, "ambiguity_empirical_original.csv"),
            xs, report.empirical_cdf_original,
        )
        _write_curve_csv(
            os.path.join(output_dir, "ambiguity_empirical_shifted.csv"),
            xs, report.empirical_cdf_shifted,
        )
    return report


def with_overrides(cfg: ExperimentConfig, trials=None, output_dir=None) -> ExperimentConfig:
    """Copy of the config with command-line overrides applied."""
    out = cfg
    if trials is not None:
        out = replace(out, trials=trials)
    if output_dir is not None:
        out = replace(out, output_dir=output_dir)
    return out
