"""
Hankelization of 1D and multi-dimensional signals.

A length-N signal ``z`` is mapped to the L x K matrix with entries
``z[i + j]``. For a d-dimensional array the map is applied recursively,
giving a block Hankel matrix whose row index is the row-major flattening
of ``(i_1, ..., i_d)`` and whose column index flattens ``(j_1, ..., j_d)``;
entry ``(i, j)`` is ``z[i_1 + j_1, ..., i_d + j_d]``.

The dense constructors here are O(N^2) in memory and meant for small
problems and for checking the FFT-based products, which never form the
matrix.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidPlan, ShapeError

__all__ = [
    "HankelPlan",
    "HankelOperator",
    "make_plan",
    "default_split",
    "skew_weights",
    "hankelize_dense",
    "dehankelize",
    "hankel_matvec",
    "hankel_adjoint_matvec",
    "dehankelize_lowrank",
]


def default_split(n: int) -> tuple[int, int]:
    """Approximately square window split with ``L >= K``."""
    L = (n + 2) // 2  # ceil((n + 1) / 2)
    return L, n - L + 1


def skew_weights(L: int, K: int) -> np.ndarray:
    """Number of entries on each skew-diagonal of an L x K matrix."""
    n = L + K - 1
    a = np.arange(n)
    return np.minimum.reduce([a + 1, np.full(n, L), np.full(n, K), n - a])


@dataclass(frozen=True, eq=False)
class HankelPlan:
    """Window splits and skew-diagonal weights for a signal shape.

    Attributes
    ----------
    dims : tuple of int
        Signal extents ``(N_1, ..., N_d)``.
    splits : tuple of (int, int)
        Per-dimension ``(L_i, K_i)`` with ``L_i + K_i - 1 == N_i``.
    weights : ndarray of int, shape ``dims``
        Skew-diagonal multiplicities; products of the 1D weights.
    """

    dims: tuple
    splits: tuple
    weights: np.ndarray

    @property
    def ndim(self) -> int:
        return len(self.dims)

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

    @property
    def row_shape(self) -> tuple:
        return tuple(L for L, _ in self.splits)

    @property
    def col_shape(self) -> tuple:
        return tuple(K for _, K in self.splits)

    @property
    def rows(self) -> int:
        return int(np.prod(self.row_shape))

    @property
    def cols(self) -> int:
        return int(np.prod(self.col_shape))

    @property
    def shape(self) -> tuple[int, int]:
        """Shape ``(L, K)`` of the Hankel matrix."""
        return self.rows, self.cols

    @property
    def fft_shape(self) -> tuple:
        # next power of two >= N_i; enough for every product used here
        return tuple(1 << (n - 1).bit_length() for n in self.dims)

    def __repr__(self):
        return f"HankelPlan(dims={self.dims}, splits={self.splits})"


def make_plan(dims, splits: Optional[Sequence] = None) -> HankelPlan:
    """Build a :class:`HankelPlan`.

    Parameters
    ----------
    dims : int or sequence of int
        Signal extents.
    splits : sequence, optional
        One entry per dimension, either ``(L_i, K_i)`` or ``None`` for the
        default approximately square split.

    Raises
    ------
    InvalidPlan
        If an extent is not positive or a split is inconsistent.
    """
    dims = (int(dims),) if np.isscalar(dims) else tuple(int(n) for n in dims)
    if len(dims) == 0 or any(n < 1 for n in dims):
        raise InvalidPlan(f"extents must be positive, got {dims}")
    if splits is None:
        splits = [None] * len(dims)
    if len(splits) != len(dims):
        raise InvalidPlan(f"need {len(dims)} splits, got {len(splits)}")

    resolved = []
    for n, s in zip(dims, splits):
        if s is None:
            resolved.append(default_split(n))
            continue
        L, K = (int(v) for v in s)
        if L < 1 or K < 1 or L + K - 1 != n:
            raise InvalidPlan(f"split (L={L}, K={K}) does not satisfy L + K - 1 = {n}")
        resolved.append((L, K))

    w = np.ones((), dtype=np.int64)
    for L, K in resolved:
        w = np.multiply.outer(w, skew_weights(L, K))
    w.setflags(write=False)
    return HankelPlan(dims=dims, splits=tuple(resolved), weights=w)


@lru_cache(maxsize=8)
def _skew_index(dims, row_shape, col_shape) -> np.ndarray:
    """Flat signal index of every entry of the Hankel matrix, shape (L, K)."""
    rows = np.indices(row_shape).reshape(len(dims), -1)
    cols = np.indices(col_shape).reshape(len(dims), -1)
    idx = np.ravel_multi_index(
        tuple(r[:, None] + c[None, :] for r, c in zip(rows, cols)), dims)
    idx.setflags(write=False)
    return idx


def _as_signal(z, plan: HankelPlan) -> np.ndarray:
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != plan.dims:
        raise ShapeError(f"signal shape {z.shape} does not match plan dims {plan.dims}")
    return z


def hankelize_dense(z, plan: HankelPlan) -> np.ndarray:
    """Form the (block) Hankel matrix of ``z`` explicitly."""
    z = _as_signal(z, plan)
    return z.ravel()[_skew_index(plan.dims, plan.row_shape, plan.col_shape)]


def dehankelize(Z, plan: HankelPlan) -> np.ndarray:
    """Average every (block) skew-diagonal of ``Z``.

    This is the Moore-Penrose pseudoinverse of the Hankelization, and its
    exact left inverse.
    """
    Z = np.asarray(Z, dtype=np.complex128)
    if Z.shape != plan.shape:
        raise ShapeError(f"matrix shape {Z.shape} does not match plan shape {plan.shape}")
    idx = _skew_index(plan.dims, plan.row_shape, plan.col_shape).ravel()
    n = plan.size
    # shift each diagonal by one of its own entries so constant diagonals
    # average to that entry exactly
    first = np.empty(n, dtype=np.complex128)
    first[idx[::-1]] = Z.ravel()[::-1]
    D = Z.ravel() - first[idx]
    sums = (np.bincount(idx, weights=D.real, minlength=n)
            + 1j * np.bincount(idx, weights=D.imag, minlength=n))
    return (first + sums / plan.weights.ravel()).reshape(plan.dims)


class HankelOperator:
    """Implicit Hankel matrix of a signal, applied by FFT convolution.

    The spectrum of the signal is computed once, so repeated products with
    the same signal (``H V`` and ``H^* U`` in one solver iteration) share it.

    Parameters
    ----------
    z : array_like
        Signal with shape ``plan.dims``.
    plan : HankelPlan
    """

    def __init__(self, z, plan: HankelPlan):
        self.plan = plan
        self.z = _as_signal(z, plan)
        self._axes = tuple(range(1, plan.ndim + 1))
        self._z_hat = np.fft.fftn(self.z, s=plan.fft_shape, axes=tuple(range(plan.ndim)))
        self._zc_hat = np.fft.fftn(self.z.conj(), s=plan.fft_shape, axes=tuple(range(plan.ndim)))

    @property
    def shape(self):
        return self.plan.shape

    def _correlate(self, z_hat, x, in_shape, out_shape):
        # y[i] = sum_j z[i + j] x[j]: convolve with the flipped x and read the
        # window starting at in_shape - 1 (no circular wrap since P >= N)
        m = x.shape[1]
        xb = x.T.reshape((m,) + in_shape)
        xb = np.flip(xb, axis=self._axes)
        x_hat = np.fft.fftn(xb, s=self.plan.fft_shape, axes=self._axes)
        y = np.fft.ifftn(x_hat * z_hat, axes=self._axes)
        window = (slice(None),) + tuple(slice(k - 1, k - 1 + n) for k, n in zip(in_shape, out_shape))
        return y[window].reshape(m, -1).T

    def _check(self, x, n, what):
        x = np.asarray(x, dtype=np.complex128)
        vec = x.ndim == 1
        if vec:
            x = x[:, None]
        if x.ndim != 2 or x.shape[0] != n:
            raise ShapeError(f"{what} must have {n} rows, got shape {x.shape}")
        return x, vec

    def matvec(self, v) -> np.ndarray:
        """``H z @ v`` for a K-vector or K x m matrix ``v``."""
        v, vec = self._check(v, self.plan.cols, "v")
        y = self._correlate(self._z_hat, v, self.plan.col_shape, self.plan.row_shape)
        return y[:, 0] if vec else y

    def rmatvec(self, u) -> np.ndarray:
        """``(H z)^* @ u`` for an L-vector or L x m matrix ``u``."""
        u, vec = self._check(u, self.plan.rows, "u")
        # sum_i conj(z[i + k]) u[i] is a correlation against conj(z)
        y = self._correlate(self._zc_hat, u, self.plan.row_shape, self.plan.col_shape)
        return y[:, 0] if vec else y

    def to_dense(self) -> np.ndarray:
        return hankelize_dense(self.z, self.plan)

    def aslinearoperator(self):
        """Wrap as a :class:`scipy.sparse.linalg.LinearOperator`."""
        from scipy.sparse.linalg import LinearOperator

        return LinearOperator(self.shape, matvec=self.matvec, rmatvec=self.rmatvec,
                              matmat=self.matvec, rmatmat=self.rmatvec, dtype=np.complex128)


def hankel_matvec(z, v, plan: HankelPlan) -> np.ndarray:
    """Multiply the Hankel matrix of ``z`` by ``v`` without forming it."""
    return HankelOperator(z, plan).matvec(v)


def hankel_adjoint_matvec(z, u, plan: HankelPlan) -> np.ndarray:
    """Multiply the conjugate transpose of the Hankel matrix of ``z`` by ``u``."""
    return HankelOperator(z, plan).rmatvec(u)


def dehankelize_lowrank(f, plan: HankelPlan) -> np.ndarray:
    """Skew-diagonal average of ``U diag(S) V^*`` from its factors.

    Each rank-one term contributes the linear convolution of ``U[:, j]``
    with ``conj(V[:, j])``; all terms are summed in the Fourier domain so a
    single inverse transform is needed. Cost is O(N r log N).

    Parameters
    ----------
    f : FactorTriple or tuple (U, S, V)
    plan : HankelPlan
    """
    U, S, V = f
    U = np.asarray(U, dtype=np.complex128)
    V = np.asarray(V, dtype=np.complex128)
    S = np.asarray(S)
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[1] or S.shape != (U.shape[1],):
        raise ShapeError(f"inconsistent factors U{U.shape}, S{S.shape}, V{V.shape}")
    if U.shape[0] != plan.rows or V.shape[0] != plan.cols:
        raise ShapeError(f"factors U{U.shape}, V{V.shape} do not match plan shape {plan.shape}")
    r = U.shape[1]
    axes = tuple(range(1, plan.ndim + 1))
    Ub = (U * S).T.reshape((r,) + plan.row_shape)
    Vb = V.conj().T.reshape((r,) + plan.col_shape)
    spec = (np.fft.fftn(Ub, s=plan.fft_shape, axes=axes)
            * np.fft.fftn(Vb, s=plan.fft_shape, axes=axes)).sum(axis=0)
    sums = np.fft.ifftn(spec, axes=tuple(range(plan.ndim)))[tuple(slice(0, n) for n in plan.dims)]
    return sums / plan.weights
