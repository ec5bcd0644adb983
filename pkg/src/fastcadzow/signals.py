"""
Synthetic signals with low-rank Hankel structure, the additive noise model
and random sampling masks.

All generators take ``rng`` as a seed or :class:`numpy.random.Generator`,
so identical seeds give bit-identical output.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DegenerateSignal, InvalidArgument

__all__ = [
    "SpectralParams",
    "DiracParams",
    "LinearEvent",
    "SampleMask",
    "spectral_signal",
    "gen_spectral",
    "dirichlet_kernel",
    "random_dirac_params",
    "gen_dirac_fourier",
    "samples_to_fourier",
    "fourier_to_samples",
    "ricker_spectrum",
    "random_linear_events",
    "linear_events",
    "gen_linear_events",
    "add_noise",
    "sample_mask",
]


def _dims(dims) -> tuple:
    return (int(dims),) if np.isscalar(dims) else tuple(int(n) for n in dims)


@dataclass(frozen=True)
class SpectralParams:
    """``frequencies`` has shape (r, d) in [0, 1); ``amplitudes`` shape (r,)."""

    frequencies: np.ndarray
    amplitudes: np.ndarray


def spectral_signal(dims, params: SpectralParams) -> np.ndarray:
    """Evaluate ``sum_j d_j exp(2 pi i f_j . n)`` on the integer grid ``dims``."""
    dims = _dims(dims)
    f = np.asarray(params.frequencies, dtype=float).reshape(len(params.amplitudes), len(dims))
    grid = np.indices(dims).reshape(len(dims), -1)
    phase = np.exp(2j * np.pi * (f @ grid))
    return (np.asarray(params.amplitudes) @ phase).reshape(dims)


def gen_spectral(dims, r: int, rng=None):
    """Random undamped sum of ``r`` complex sinusoids.

    Frequencies are uniform on ``[0, 1)`` per dimension, phases uniform on
    ``[0, 2 pi)`` and magnitudes ``1 + 10**(0.5 c)`` with ``c ~ U[0, 1]``.

    Returns
    -------
    x : ndarray, complex, shape ``dims``
    params : SpectralParams
    """
    if r < 1:
        raise InvalidArgument(f"r must be positive, got {r}")
    dims = _dims(dims)
    rng = np.random.default_rng(rng)
    freqs = rng.uniform(0.0, 1.0, size=(r, len(dims)))
    phase = rng.uniform(0.0, 2 * np.pi, size=r)
    mag = 1 + 10 ** (0.5 * rng.uniform(0.0, 1.0, size=r))
    params = SpectralParams(freqs, mag * np.exp(1j * phase))
    return spectral_signal(dims, params), params


def dirichlet_kernel(t, bandwidth: int) -> np.ndarray:
    """``sin(pi B t) / (B sin(pi t))``, equal to 1 at integer ``t`` (odd B)."""
    t = np.asarray(t, dtype=float)
    den = bandwidth * np.sin(np.pi * t)
    num = np.sin(np.pi * bandwidth * t)
    at_int = np.isclose(t, np.round(t), rtol=0, atol=1e-12)
    out = np.ones_like(t)
    np.divide(num, den, out=out, where=~at_int)
    return out


@dataclass(frozen=True)
class DiracParams:
    """A 1-periodic stream of ``r`` Diracs sampled through a Dirichlet kernel.

    Attributes
    ----------
    weights : ndarray, shape (r,)
    locations : ndarray, shape (r,), values in [0, 1)
    bandwidth : int
        Odd kernel bandwidth B.
    samples : int
        Number of time samples N, at least B.
    """

    weights: np.ndarray
    locations: np.ndarray
    bandwidth: int
    samples: int

    def __post_init__(self):
        B = self.bandwidth
        if B < 1 or B % 2 == 0:
            raise InvalidArgument(f"bandwidth must be odd, got {B}")
        if self.samples < B:
            raise InvalidArgument(f"need at least B={B} samples, got {self.samples}")
        if len(self.weights) != len(self.locations):
            raise InvalidArgument("weights and locations differ in length")
        if len(self.weights) > (B - 1) // 2:
            raise InvalidArgument(f"at most {(B - 1) // 2} Diracs for bandwidth {B}")


def random_dirac_params(r: int = 7, bandwidth: int = 71, samples=None, rng=None) -> DiracParams:
    """Weights uniform on [0.5, 1.5], locations uniform on [0, 1)."""
    rng = np.random.default_rng(rng)
    weights = rng.uniform(0.5, 1.5, size=r)
    locations = rng.uniform(0.0, 1.0, size=r)
    return DiracParams(weights, locations, bandwidth, bandwidth if samples is None else samples)


def gen_dirac_fourier(p: DiracParams):
    """Fourier coefficients and kernel samples of a Dirac stream.

    Returns
    -------
    fourier : ndarray, complex, shape (B,)
        ``sum_j x_j exp(-2 pi i k t_j)`` for ``k = -(B-1)/2, ..., (B-1)/2``.
    samples : ndarray, real, shape (N,)
        ``sum_j x_j phi(n / N - t_j)`` for ``n = 0, ..., N-1``.

    The two are linked by :func:`samples_to_fourier`.
    """
    M = (p.bandwidth - 1) // 2
    k = np.arange(-M, M + 1)
    fourier = np.exp(-2j * np.pi * np.outer(k, p.locations)) @ p.weights
    n = np.arange(p.samples)
    samples = dirichlet_kernel(n[:, None] / p.samples - p.locations[None, :], p.bandwidth) @ p.weights
    return fourier, samples


def samples_to_fourier(samples, bandwidth: int) -> np.ndarray:
    """Recover the centered Fourier coefficients from kernel samples.

    Uses ``xhat_k = (B / N) sum_n y_n exp(-2 pi i k n / N)``, which is exact
    for noiseless samples since the kernel is band-limited to ``|k| <= M``.
    """
    samples = np.asarray(samples)
    N = samples.shape[-1]
    M = (bandwidth - 1) // 2
    spec = np.fft.fft(samples, axis=-1) * (bandwidth / N)
    return spec[..., np.arange(-M, M + 1) % N]


def fourier_to_samples(fourier, samples: int) -> np.ndarray:
    """Inverse of :func:`samples_to_fourier` for band-limited data."""
    fourier = np.asarray(fourier)
    B = fourier.shape[-1]
    M = (B - 1) // 2
    spec = np.zeros(fourier.shape[:-1] + (samples,), dtype=np.complex128)
    spec[..., np.arange(-M, M + 1) % samples] = fourier
    return np.fft.ifft(spec, axis=-1) * (samples / B)


def ricker_spectrum(freq, peak: float) -> np.ndarray:
    """Fourier transform of a unit Ricker wavelet with peak frequency ``peak``.

    Frequencies are in cycles per sample.
    """
    freq = np.asarray(freq, dtype=float)
    return 2 / np.sqrt(np.pi) * freq**2 / peak**3 * np.exp(-(freq / peak) ** 2)


@dataclass(frozen=True)
class LinearEvent:
    """Plane-wave event: wavelet arriving at ``intercept + slowness . x``.

    Times are in samples, slowness in samples per trace.
    """

    amplitude: float
    intercept: float
    slowness: tuple
    peak: float


def random_linear_events(spatial_dims, time_len: int, n_events: int, rng=None,
                         max_slowness: float = 2.0, peak: float = 0.05):
    """Draw ``n_events`` events with arrivals inside the time window."""
    if n_events < 1:
        raise InvalidArgument(f"n_events must be positive, got {n_events}")
    spatial_dims = _dims(spatial_dims)
    rng = np.random.default_rng(rng)
    events = []
    for _ in range(n_events):
        amp = rng.uniform(0.5, 1.5) * rng.choice([-1.0, 1.0])
        slow = tuple(rng.uniform(-max_slowness, max_slowness, size=len(spatial_dims)))
        intercept = rng.uniform(0.25, 0.75) * time_len
        events.append(LinearEvent(float(amp), float(intercept), slow, peak))
    return events


def linear_events(spatial_dims, time_len: int, events: Sequence[LinearEvent]) -> np.ndarray:
    """Superpose plane-wave events into a real (time, x_1, ..., x_d) volume.

    Delays are applied as phase shifts of the wavelet spectrum, so each
    temporal frequency slice is an exact sum of d-dimensional exponentials
    (time is treated as periodic).
    """
    spatial_dims = _dims(spatial_dims)
    freq = np.fft.rfftfreq(time_len)
    grid = np.indices(spatial_dims).reshape(len(spatial_dims), -1)
    spec = np.zeros((freq.size, grid.shape[1]), dtype=np.complex128)
    for ev in events:
        delay = ev.intercept + np.asarray(ev.slowness) @ grid
        spec += ev.amplitude * ricker_spectrum(freq, ev.peak)[:, None] * np.exp(
            -2j * np.pi * np.outer(freq, delay))
    vol = np.fft.irfft(spec, n=time_len, axis=0)
    return vol.reshape((time_len,) + spatial_dims)


def gen_linear_events(spatial_dims, time_len: int, n_events: int, rng=None, **kwargs) -> np.ndarray:
    """Random linear-event volume of shape ``(time_len, *spatial_dims)``."""
    events = random_linear_events(spatial_dims, time_len, n_events, rng, **kwargs)
    return linear_events(spatial_dims, time_len, events)


def add_noise(x, eps: float, rng=None) -> np.ndarray:
    """Return ``x + e`` with ``||e|| = eps ||x||`` and Gaussian direction.

    Complex inputs get circularly symmetric complex noise, real inputs real
    noise.
    """
    if eps < 0:
        raise InvalidArgument(f"eps must be nonnegative, got {eps}")
    x = np.asarray(x)
    if eps == 0:
        return x.copy()
    nx = np.linalg.norm(x)
    if nx == 0:
        raise DegenerateSignal("cannot scale noise to a zero signal")
    rng = np.random.default_rng(rng)
    w = rng.standard_normal(x.shape)
    if np.iscomplexobj(x):
        w = w + 1j * rng.standard_normal(x.shape)
    return x + eps * nx * w / np.linalg.norm(w)


@dataclass(frozen=True)
class SampleMask:
    """Observed entries of a signal, stored as sorted flat indices."""

    dims: tuple
    indices: np.ndarray

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        n = int(np.prod(self.dims))
        if idx.size and (idx.min() < 0 or idx.max() >= n):
            raise InvalidArgument("mask index out of bounds")
        if np.any(np.diff(idx) <= 0):
            raise InvalidArgument("mask indices must be sorted and unique")

    @classmethod
    def from_bool(cls, observed) -> "SampleMask":
        observed = np.asarray(observed, dtype=bool)
        return cls(observed.shape, np.flatnonzero(observed))

    @property
    def multi_indices(self) -> tuple:
        return np.unravel_index(self.indices, self.dims)

    def to_bool(self) -> np.ndarray:
        out = np.zeros(int(np.prod(self.dims)), dtype=bool)
        out[self.indices] = True
        return out.reshape(self.dims)

    def __len__(self):
        return len(self.indices)


def sample_mask(dims, fraction: float, rng=None) -> SampleMask:
    """Draw ``floor(fraction * N)`` entries uniformly without replacement."""
    if not 0 < fraction <= 1:
        raise InvalidArgument(f"fraction must lie in (0, 1], got {fraction}")
    dims = _dims(dims)
    n = int(np.prod(dims))
    rng = np.random.default_rng(rng)
    idx = np.sort(rng.choice(n, size=int(np.floor(fraction * n + 1e-9)), replace=False))
    return SampleMask(dims, idx)
