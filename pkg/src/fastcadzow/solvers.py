"""
Cadzow-type iterations for denoising and completing signals whose
(block) Hankel matrix is low rank.

Four update rules are provided:

``cadzow``
    ``z <- H^+ T_r H z``
``fast_cadzow``
    ``z <- H^+ T_r P_T H z`` where ``P_T`` projects onto the tangent space
    at the previous rank-r iterate; the first step uses the whole space.
``gradient``, ``fast_gradient``
    The same updates applied to ``z + (y - z) / w``, where ``w`` are the
    skew-diagonal weights. Denoising only.

:func:`run` drives any of them with an optional sampling mask, a relative
change stopping rule and a per-iteration trace.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InvalidArgument, NumericalError, RankError, ShapeError, UnsupportedCombination
from .hankel import HankelPlan, dehankelize_lowrank, hankelize_dense, make_plan
from .lowrank import FactorTriple, projected_truncated_svd, tangent_components, truncated_svd

__all__ = [
    "VARIANTS",
    "SolverOptions",
    "IterationRecord",
    "SolverRun",
    "cadzow_step",
    "fast_cadzow_step",
    "gradient_step",
    "fast_gradient_step",
    "reweighted_point",
    "run",
    "FxResult",
    "run_fx",
]

VARIANTS = ("cadzow", "fast_cadzow", "gradient", "fast_gradient")


@dataclass
class SolverOptions:
    """Configuration of :func:`run`.

    Attributes
    ----------
    variant : str
        One of :data:`VARIANTS`.
    rank : int
    tol : float
        Stop once ``||z_{k+1} - z_k|| / ||z_k|| <= tol``.
    max_iter : int
    alpha : float
        Weight of the observations on sampled entries when a mask is given.
        ``1`` pins the observed entries.
    fixed_iter : bool
        Run exactly ``max_iter`` iterations and ignore ``tol``.
    svd_method : {"full", "gram"}
        Backend of the dense truncated SVD (see :func:`truncated_svd`).
    """

    variant: str = "cadzow"
    rank: int = 1
    tol: float = 1e-6
    max_iter: int = 500
    alpha: float = 0.8
    fixed_iter: bool = False
    svd_method: str = "full"

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise InvalidArgument(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        if self.rank < 1:
            raise RankError(f"rank must be positive, got {self.rank}")
        if not self.tol > 0:
            raise InvalidArgument(f"tol must be positive, got {self.tol}")
        if not 0 <= self.alpha <= 1:
            raise InvalidArgument(f"alpha must lie in [0, 1], got {self.alpha}")
        if self.max_iter < 1:
            raise InvalidArgument(f"max_iter must be positive, got {self.max_iter}")
        if self.svd_method not in ("full", "gram"):
            raise InvalidArgument(f"unknown svd_method {self.svd_method!r}")


@dataclass
class IterationRecord:
    iteration: int
    rel_change: float
    mse: Optional[float]
    seconds: float


@dataclass
class SolverRun:
    """Outcome of :func:`run`. ``trace[k]`` describes iterate ``z_{k+1}``."""

    final: np.ndarray
    iterations: int
    converged: bool
    trace: list = field(default_factory=list)
    factors: Optional[FactorTriple] = None

    @property
    def wall_time(self) -> float:
        return sum(rec.seconds for rec in self.trace)

    @property
    def mse_history(self) -> np.ndarray:
        return np.array([np.nan if rec.mse is None else rec.mse for rec in self.trace])


def _cadzow_factors(z, r, plan, svd_method="full"):
    f = truncated_svd(hankelize_dense(z, plan), r, method=svd_method)
    return dehankelize_lowrank(f, plan), f


def cadzow_step(z, r: int, plan: HankelPlan, svd_method: str = "full") -> np.ndarray:
    """One rank reduction followed by skew-diagonal averaging."""
    return _cadzow_factors(z, r, plan, svd_method)[0]


def fast_cadzow_step(z, anchor: Optional[FactorTriple], r: int, plan: HankelPlan,
                     svd_method: str = "full"):
    """One Fast Cadzow update.

    Parameters
    ----------
    z : ndarray
    anchor : FactorTriple or None
        Rank-r factors returned by the previous call. ``None`` selects the
        whole matrix space, which makes the step an ordinary Cadzow step.
    r : int
    plan : HankelPlan

    Returns
    -------
    z_next : ndarray
    factors : FactorTriple
        The truncated factors, to be passed as the next anchor.
    """
    if anchor is None:
        return _cadzow_factors(z, r, plan, svd_method)
    f = projected_truncated_svd(tangent_components(anchor, z, plan), anchor, r)
    return dehankelize_lowrank(f, plan), f


def reweighted_point(z, y, plan: HankelPlan) -> np.ndarray:
    """``z + (y - z) / w`` with the skew-diagonal weights ``w``."""
    return z + (y - z) / plan.weights


def gradient_step(z, y, r: int, plan: HankelPlan, svd_method: str = "full") -> np.ndarray:
    return cadzow_step(reweighted_point(z, y, plan), r, plan, svd_method)


def fast_gradient_step(z, y, anchor: Optional[FactorTriple], r: int, plan: HankelPlan,
                       svd_method: str = "full"):
    return fast_cadzow_step(reweighted_point(z, y, plan), anchor, r, plan, svd_method)


def _observed(mask, dims):
    if mask is None:
        return None
    if hasattr(mask, "to_bool"):
        mask = mask.to_bool()
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != dims:
        raise ShapeError(f"mask shape {mask.shape} does not match signal shape {dims}")
    return mask


def run(y, plan: Optional[HankelPlan] = None, opts: Optional[SolverOptions] = None,
        mask=None, truth=None) -> SolverRun:
    """Iterate a solver from ``z_0 = y`` (or ``P_Omega(y)`` with a mask).

    With a mask the update is
    ``z <- alpha P_Omega(y) + (I - alpha P_Omega) step(z)``, which keeps the
    observed entries fixed when ``alpha == 1``.

    Parameters
    ----------
    y : array_like
        Noisy or partially observed signal. Entries outside the mask are
        ignored.
    plan : HankelPlan, optional
        Defaults to :func:`make_plan` on ``y.shape``.
    opts : SolverOptions, optional
    mask : SampleMask or bool array, optional
    truth : array_like, optional
        Ground truth; when given every trace record carries the MSE.

    Raises
    ------
    UnsupportedCombination
        Gradient variants with a mask.
    NumericalError
        If an iterate becomes non-finite.
    """
    opts = opts or SolverOptions()
    y = np.asarray(y, dtype=np.complex128)
    plan = plan or make_plan(y.shape)
    if y.shape != plan.dims:
        raise ShapeError(f"signal shape {y.shape} does not match plan dims {plan.dims}")
    if opts.rank > min(plan.shape):
        raise RankError(f"rank {opts.rank} exceeds min(L, K) = {min(plan.shape)}")
    observed = _observed(mask, plan.dims)
    gradient = opts.variant in ("gradient", "fast_gradient")
    fast = opts.variant in ("fast_cadzow", "fast_gradient")
    if gradient and observed is not None:
        raise UnsupportedCombination(f"variant {opts.variant!r} supports denoising only")

    if truth is not None:
        truth = np.asarray(truth, dtype=np.complex128)
        truth_norm = np.linalg.norm(truth)
    if observed is not None:
        y = np.where(observed, y, 0)
        pinned = opts.alpha * y

    z = y.copy()
    anchor = None
    trace = []
    converged = False
    for k in range(opts.max_iter):
        t0 = time.perf_counter()
        point = reweighted_point(z, y, plan) if gradient else z
        if fast:
            update, anchor = fast_cadzow_step(point, anchor, opts.rank, plan, opts.svd_method)
        else:
            update, anchor = _cadzow_factors(point, opts.rank, plan, opts.svd_method)
        if observed is not None:
            update = np.where(observed, pinned + (1 - opts.alpha) * update, update)
        if not np.all(np.isfinite(update)):
            raise NumericalError(f"non-finite iterate at iteration {k + 1}")

        step = np.linalg.norm(update - z)
        base = np.linalg.norm(z)
        if base > 0:
            rel = step / base
        else:
            rel = 0.0 if step == 0 else np.inf
        seconds = time.perf_counter() - t0
        err = None if truth is None else float(np.linalg.norm(update - truth) / truth_norm)
        trace.append(IterationRecord(k + 1, float(rel), err, seconds))
        z = update
        converged = rel <= opts.tol
        if converged and not opts.fixed_iter:
            break
    return SolverRun(final=z, iterations=len(trace), converged=converged, trace=trace,
                     factors=anchor)


@dataclass
class FxResult:
    """Output of :func:`run_fx`: the processed volume and one run per slice."""

    volume: np.ndarray
    runs: dict

    @property
    def wall_time(self) -> float:
        return sum(r.wall_time for r in self.runs.values())


def run_fx(volume, opts: SolverOptions, trace_mask=None, band=None, splits=None) -> FxResult:
    """Frequency-slice processing of a real (time, x_1, ..., x_d) volume.

    The volume is transformed along time; every frequency slice in ``band``
    is processed by :func:`run` on its d-fold Hankel structure and the
    volume is transformed back. Slices outside the band are zeroed.

    Parameters
    ----------
    volume : ndarray, shape (T, N_1, ..., N_d)
        Real data, missing traces set to zero.
    opts : SolverOptions
    trace_mask : bool array, shape (N_1, ..., N_d), optional
        Observed traces.
    band : (int, int), optional
        Half-open range of ``rfft`` bins to process; defaults to all bins.
    splits : sequence, optional
        Window splits for the spatial dimensions.
    """
    volume = np.asarray(volume, dtype=float)
    T = volume.shape[0]
    spatial = volume.shape[1:]
    plan = make_plan(spatial, splits)
    spectrum = np.fft.rfft(volume, axis=0)
    lo, hi = band if band is not None else (0, spectrum.shape[0])
    out = np.zeros_like(spectrum)
    runs = {}
    for b in range(max(lo, 0), min(hi, spectrum.shape[0])):
        if not np.any(spectrum[b]):
            continue
        res = run(spectrum[b], plan, opts, mask=trace_mask)
        out[b] = res.final
        runs[b] = res
    return FxResult(volume=np.fft.irfft(out, n=T, axis=0), runs=runs)
