"""
Error metrics and the seeded multi-trial experiment runner.
"""
from __future__ import annotations

import csv
import io
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .errors import ConfigError, DegenerateSignal, InvalidArgument, ShapeError
from .hankel import make_plan
from .signals import add_noise, gen_dirac_fourier, gen_spectral, random_dirac_params, \
    sample_mask, samples_to_fourier
from .solvers import VARIANTS, SolverOptions, run

__all__ = [
    "mse",
    "componentwise_mse",
    "positive_test",
    "ExperimentConfig",
    "TrialRow",
    "TrialTable",
    "PRESETS",
    "preset",
    "make_instance",
    "run_trials",
]


def mse(z, x) -> float:
    """Relative error ``||z - x|| / ||x||``."""
    z = np.asarray(z)
    x = np.asarray(x)
    if z.shape != x.shape:
        raise ShapeError(f"shape mismatch {z.shape} vs {x.shape}")
    nx = np.linalg.norm(x)
    if nx == 0:
        raise DegenerateSignal("reference signal is zero")
    return float(np.linalg.norm(z - x) / nx)


def componentwise_mse(z, x) -> np.ndarray:
    """Entrywise ``|z_i - x_i| / |x_i|``; NaN where ``x_i == 0``.

    Use :func:`numpy.nanmean` to average, which drops the undefined entries.
    """
    z = np.asarray(z)
    x = np.asarray(x)
    if z.shape != x.shape:
        raise ShapeError(f"shape mismatch {z.shape} vs {x.shape}")
    ax = np.abs(x)
    out = np.full(x.shape, np.nan)
    np.divide(np.abs(z - x), ax, out=out, where=ax > 0)
    return out


def positive_test(run_result) -> bool:
    """True iff the MSE after the last iteration is below that after the first."""
    trace = getattr(run_result, "trace", run_result)
    if not trace or any(rec.mse is None for rec in (trace[0], trace[-1])):
        raise InvalidArgument("trace has no MSE values; pass truth= to run()")
    return trace[-1].mse < trace[0].mse


@dataclass
class ExperimentConfig:
    """One batch of seeded trials.

    ``generator`` is ``"spectral"`` (``dims``, ``rank``, ``eps``,
    ``fraction``) or ``"dirac"`` (``rank`` Diracs, ``dims`` is the single
    bandwidth B = N, noise added to the time samples). ``alpha`` defaults
    to 1 for noiseless recovery and 0.8 otherwise.
    """

    generator: str = "spectral"
    dims: tuple = (256,)
    rank: int = 5
    eps: float = 0.5
    fraction: float = 1.0
    variants: tuple = ("cadzow", "fast_cadzow")
    trials: int = 10
    tol: float = 1e-6
    max_iter: int = 500
    fixed_iter: bool = False
    alpha: Optional[float] = None
    svd_method: str = "full"
    seed: int = 0
    name: str = ""

    def __post_init__(self):
        if self.generator not in ("spectral", "dirac"):
            raise ConfigError(f"unknown generator {self.generator!r}")
        self.dims = (int(self.dims),) if np.isscalar(self.dims) else tuple(int(n) for n in self.dims)
        if isinstance(self.variants, str):
            self.variants = (self.variants,)
        self.variants = tuple(self.variants)
        for v in self.variants:
            if v not in VARIANTS:
                raise ConfigError(f"unknown variant {v!r}")
        if self.trials < 0:
            raise ConfigError("trials must be nonnegative")

    def solver_options(self, variant) -> SolverOptions:
        alpha = self.alpha
        if alpha is None:
            alpha = 1.0 if self.eps == 0 else 0.8
        return SolverOptions(variant=variant, rank=self.rank, tol=self.tol, max_iter=self.max_iter,
                             alpha=alpha, fixed_iter=self.fixed_iter, svd_method=self.svd_method)


PRESETS = {
    "table1-small": ExperimentConfig(dims=(1024,), rank=5, eps=0.5, trials=10, tol=1e-6),
    "table2-small": ExperimentConfig(dims=(512,), rank=5, eps=0.0, fraction=0.5, trials=10,
                                     tol=1e-10, alpha=1.0),
    "table3-small": ExperimentConfig(dims=(1024,), rank=5, eps=0.5, fraction=0.5, trials=10,
                                     tol=1e-6, alpha=0.8),
    "table4-small": ExperimentConfig(generator="dirac", dims=(71,), rank=7, eps=0.1, trials=200,
                                     tol=1e-6),
    "table5-small": ExperimentConfig(dims=(256,), rank=5, eps=0.5, trials=100, max_iter=15,
                                     fixed_iter=True, variants=VARIANTS),
}


def preset(name: str, /, **overrides) -> ExperimentConfig:
    try:
        base = PRESETS[name]
    except KeyError:
        raise ConfigError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}") from None
    return replace(base, name=overrides.pop("name", name), **overrides)


@dataclass
class TrialRow:
    variant: str
    dims: tuple
    r: int
    eps: float
    fraction: float
    seed: int
    mse: float
    iterations: int
    wall_time_seconds: float
    first_mse: float = float("nan")
    error: str = ""

    @property
    def positive(self) -> bool:
        return self.mse < self.first_mse


@dataclass
class TrialTable:
    rows: list = field(default_factory=list)

    COLUMNS = tuple(f.name for f in fields(TrialRow))

    def __len__(self):
        return len(self.rows)

    def select(self, variant=None, r=None) -> list:
        return [row for row in self.rows if not row.error
                and (variant is None or row.variant == variant)
                and (r is None or row.r == r)]

    def mean(self, column: str, variant=None, r=None) -> float:
        vals = [getattr(row, column) for row in self.select(variant, r)]
        return float(np.mean(vals)) if vals else float("nan")

    def positive_portion(self, variant=None, r=None) -> float:
        rows = self.select(variant, r)
        return float(np.mean([row.positive for row in rows])) if rows else float("nan")

    def summary(self) -> list:
        """Mean MSE, iterations and time per ``(variant, r)`` group."""
        groups = []
        for row in self.rows:
            key = (row.variant, row.r)
            if key not in groups:
                groups.append(key)
        return [dict(variant=v, r=r, trials=len(self.select(v, r)),
                     mse=self.mean("mse", v, r), iterations=self.mean("iterations", v, r),
                     wall_time_seconds=self.mean("wall_time_seconds", v, r),
                     positive=self.positive_portion(v, r)) for v, r in groups]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.COLUMNS)
        for row in self.rows:
            rec = asdict(row)
            rec["dims"] = "x".join(str(n) for n in row.dims)
            writer.writerow([rec[c] for c in self.COLUMNS])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text

    def to_json(self, path=None) -> str:
        text = json.dumps([asdict(row) for row in self.rows], indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def make_instance(config: ExperimentConfig, rng):
    """Draw one problem: ``(y, truth, mask)``; ``mask`` may be ``None``."""
    rng = np.random.default_rng(rng)
    if config.generator == "dirac":
        B = config.dims[0]
        params = random_dirac_params(config.rank, B, rng=rng)
        truth, samples = gen_dirac_fourier(params)
        y = samples_to_fourier(add_noise(samples, config.eps, rng), B)
        return y, truth, None
    truth, _ = gen_spectral(config.dims, config.rank, rng)
    y = add_noise(truth, config.eps, rng)
    mask = None
    if config.fraction < 1:
        mask = sample_mask(config.dims, config.fraction, rng)
        y = np.where(mask.to_bool(), y, 0)
    return y, truth, mask


def _trial(config: ExperimentConfig, seed: int) -> list:
    y, truth, mask = make_instance(config, seed)
    plan = make_plan(y.shape)
    rows = []
    for variant in config.variants:
        base = dict(variant=variant, dims=config.dims, r=config.rank, eps=config.eps,
                    fraction=config.fraction, seed=seed)
        try:
            t0 = time.perf_counter()
            res = run(y, plan, config.solver_options(variant), mask=mask, truth=truth)
            elapsed = time.perf_counter() - t0
            rows.append(TrialRow(mse=res.trace[-1].mse, iterations=res.iterations,
                                 wall_time_seconds=elapsed, first_mse=res.trace[0].mse, **base))
        except Exception as exc:  # recorded, the batch goes on
            rows.append(TrialRow(mse=float("nan"), iterations=0, wall_time_seconds=0.0,
                                 error=f"{type(exc).__name__}: {exc}", **base))
    return rows


def trial_seeds(config: ExperimentConfig) -> list:
    """Per-trial seeds derived from the master seed."""
    ss = np.random.SeedSequence(config.seed)
    return [int(s.generate_state(1)[0]) for s in ss.spawn(config.trials)]


def run_trials(config: ExperimentConfig, jobs: int = 1) -> TrialTable:
    """Run every variant on ``config.trials`` seeded instances.

    Each instance is shared by all variants. Rows are ordered by trial
    index then variant, independent of ``jobs``. Wall time covers the
    solver only.
    """
    seeds = trial_seeds(config)
    if jobs > 1 and len(seeds) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_trial, [config] * len(seeds), seeds))
    else:
        batches = [_trial(config, s) for s in seeds]
    return TrialTable([row for batch in batches for row in batch])
