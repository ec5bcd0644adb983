"""
Rank-r truncation: dense truncated SVD, the tangent-space projection of a
Hankel matrix at a rank-r anchor, and the reduction of its truncated SVD
to the SVD of a 2r x 2r matrix.
"""
from __future__ import annotations

from typing import NamedTuple

import numpy as np
import scipy.linalg

from .errors import NumericalError, RankError, ShapeError
from .hankel import HankelOperator, HankelPlan

__all__ = [
    "FactorTriple",
    "TangentComponents",
    "truncated_svd",
    "tangent_components",
    "projected_truncated_svd",
    "tangent_project_dense",
    "randomized_lowrank",
]


class FactorTriple(NamedTuple):
    """Rank-r factorization ``U @ diag(S) @ V^*``.

    ``U`` (L x r) and ``V`` (K x r) have orthonormal columns, ``S`` is
    nonnegative and nonincreasing.
    """

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray

    @property
    def rank(self) -> int:
        return self.S.shape[0]

    @property
    def shape(self) -> tuple[int, int]:
        return self.U.shape[0], self.V.shape[0]

    def to_dense(self) -> np.ndarray:
        return (self.U * self.S) @ self.V.conj().T


class TangentComponents(NamedTuple):
    """``W = U G V^* + U B^* + C V^*`` with ``V^* B = 0`` and ``U^* C = 0``."""

    G: np.ndarray
    B: np.ndarray
    C: np.ndarray


def _check_rank(r, L, K):
    if not (1 <= r <= min(L, K)):
        raise RankError(f"rank {r} outside [1, {min(L, K)}]")


def _svd(A):
    try:
        return np.linalg.svd(A, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc


def truncated_svd(Z, r: int, method: str = "full") -> FactorTriple:
    """Top-r singular triplets of a dense matrix.

    Parameters
    ----------
    Z : array_like, shape (L, K)
    r : int
        Target rank, ``1 <= r <= min(L, K)``.
    method : {"full", "gram"}
        ``"full"`` computes the thin SVD with LAPACK and truncates it.
        ``"gram"`` takes the top-r eigenvectors of the smaller Gram matrix
        and then an SVD of the r-column projection; it is several times
        cheaper for large matrices but loses accuracy in singular values
        below ``sqrt(eps) * sigma_1``.
    """
    Z = np.asarray(Z, dtype=np.complex128)
    if Z.ndim != 2:
        raise ShapeError(f"expected a matrix, got shape {Z.shape}")
    L, K = Z.shape
    _check_rank(r, L, K)
    if not np.all(np.isfinite(Z)):
        raise NumericalError("matrix has non-finite entries")

    if method == "full":
        U, s, Vh = _svd(Z)
        return FactorTriple(U[:, :r], s[:r], Vh[:r].conj().T)
    if method != "gram":
        raise ValueError(f"unknown method {method!r}")

    if L > K:
        f = truncated_svd(Z.conj().T, r, method)
        return FactorTriple(f.V, f.S, f.U)
    try:
        _, Q = scipy.linalg.eigh(Z @ Z.conj().T, subset_by_index=[L - r, L - 1],
                                 check_finite=False)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    # SVD of Q^* Z restores orthonormal right factors even for tiny sigma
    P, s, Wh = _svd(Q.conj().T @ Z)
    return FactorTriple(Q @ P, s, Wh.conj().T)


def tangent_project_dense(Z, anchor: FactorTriple) -> np.ndarray:
    """Orthogonal projection of ``Z`` onto the tangent space at ``anchor``.

    ``U U^* Z + Z V V^* - U U^* Z V V^*``. Dense; used to check the
    factored path.
    """
    Z = np.asarray(Z, dtype=np.complex128)
    U, _, V = anchor
    if Z.shape != (U.shape[0], V.shape[0]):
        raise ShapeError(f"matrix shape {Z.shape} does not match anchor {anchor.shape}")
    UZ = U @ (U.conj().T @ Z)
    return UZ + (Z - UZ) @ V @ V.conj().T


def tangent_components(anchor: FactorTriple, z, plan: HankelPlan) -> TangentComponents:
    """Factors of the tangent projection of the Hankel matrix of ``z``.

    Only ``H V`` and ``H^* U`` are needed, both computed with r FFT-based
    products; the Hankel matrix is never formed.
    """
    U, _, V = anchor
    if (U.shape[0], V.shape[0]) != plan.shape:
        raise ShapeError(f"anchor shape {anchor.shape} does not match plan shape {plan.shape}")
    op = HankelOperator(z, plan)
    HV = op.matvec(V)
    HtU = op.rmatvec(U)
    G = U.conj().T @ HV
    C = HV - U @ G
    B = HtU - V @ G.conj().T
    return TangentComponents(G, B, C)


def _complement_qr(X, A):
    """Orthonormal Q with ``Q ⟂ X`` and ``A = Q R``, for ``A ⟂ X``.

    Householder QR of ``[X, A]``: the first r columns of Q span X, so the
    trailing block is orthonormal and orthogonal to X even when A is rank
    deficient (a plain QR of A would then return arbitrary columns).
    """
    r = X.shape[1]
    Q, _ = np.linalg.qr(np.hstack([X, A]))
    Q = Q[:, r:]
    return Q, Q.conj().T @ A


def projected_truncated_svd(tc: TangentComponents, anchor: FactorTriple, r: int) -> FactorTriple:
    """Top-r SVD of ``W = U G V^* + U B^* + C V^*`` via a 2r x 2r SVD.

    With ``B = Q1 R1`` and ``C = Q2 R2``,
    ``W = [U, Q2] @ [[G, R1^*], [R2, 0]] @ [V, Q1]^*`` and both outer
    factors have orthonormal columns. Cost O(N r^2 + r^3).
    """
    U, _, V = anchor
    G, B, C = tc
    k = U.shape[1]
    if G.shape != (k, k) or B.shape != V.shape or C.shape != U.shape:
        raise ShapeError("tangent components do not match the anchor")
    if r != k:
        raise RankError(f"rank {r} differs from anchor rank {k}")
    if 2 * k > min(U.shape[0], V.shape[0]):
        # [U, Q2] cannot have 2r orthonormal columns; fall back to dense
        return truncated_svd((U @ G + C) @ V.conj().T + U @ B.conj().T, r)

    Q1, R1 = _complement_qr(V, B)
    Q2, R2 = _complement_qr(U, C)
    M = np.block([[G, R1.conj().T], [R2, np.zeros((k, k), dtype=np.complex128)]])
    UG, s, VGh = _svd(M)
    VG = VGh.conj().T
    return FactorTriple(U @ UG[:k, :r] + Q2 @ UG[k:, :r], s[:r],
                        V @ VG[:k, :r] + Q1 @ VG[k:, :r])


def randomized_lowrank(z, plan: HankelPlan, r: int, q: int = 1, rng=None) -> FactorTriple:
    """Randomized rank-r approximation of the Hankel matrix of ``z``.

    A K x 2r complex Gaussian test matrix is pushed through ``q`` power
    iterations of ``H H^*`` (re-orthonormalized between steps), the range
    basis Q is taken from a QR factorization, and the 2r x K matrix
    ``Q^* H`` is decomposed exactly. All products with ``H`` use FFTs.

    Parameters
    ----------
    z : array_like
    plan : HankelPlan
    r : int
        Target rank, at most ``min(L, K) / 2``.
    q : int
        Number of power iterations, 0, 1 or 2.
    rng : int or numpy.random.Generator, optional
    """
    L, K = plan.shape
    if not (1 <= r and 2 * r <= min(L, K)):
        raise RankError(f"rank {r} needs 2r <= min(L, K) = {min(L, K)}")
    if q not in (0, 1, 2):
        raise ValueError(f"q must be 0, 1 or 2, got {q}")
    rng = np.random.default_rng(rng)
    op = HankelOperator(z, plan)

    sketch = (rng.standard_normal((K, 2 * r)) + 1j * rng.standard_normal((K, 2 * r))) / np.sqrt(2)
    Y = op.matvec(sketch)
    for _ in range(q):
        Y, _ = np.linalg.qr(Y)
        Y = op.matvec(op.rmatvec(Y))
    Q, _ = np.linalg.qr(Y)
    Bh = op.rmatvec(Q)  # (Q^* H)^*, K x 2r
    UB, s, VBh = _svd(Bh.conj().T)
    return FactorTriple(Q @ UB[:, :r], s[:r], VBh[:r].conj().T)
