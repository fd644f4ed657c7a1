"""Dense complex matrix kernels.

Norms, SVD-based duality witnesses, block layout helpers and seeded random
generators. Everything operates on plain numpy complex arrays and is pure:
no function mutates its inputs. Intended scale is small (matrices up to a
few hundred rows), double precision throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import block_diag

from .errors import DegenerateInputError, InvalidInputError

__all__ = [
    "as_matrix",
    "as_block_array",
    "SvdResult",
    "svd",
    "singular_values",
    "operator_norm",
    "trace_norm",
    "dual_witness",
    "trace_pairing",
    "assemble_blocks",
    "split_blocks",
    "block_scalar_action",
    "direct_sum",
    "random_unitary",
    "random_contraction",
]


def as_matrix(a) -> np.ndarray:
    """Coerce ``a`` to a nonempty 2-D complex array with finite entries."""
    try:
        arr = np.asarray(a, dtype=complex)
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"not a complex matrix: {exc}") from exc
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InvalidInputError(f"expected a nonempty 2-D matrix, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("matrix entries must be finite")
    return arr


def as_block_array(blocks, block_size: int | None = None) -> np.ndarray:
    """Coerce ``blocks`` to an (m, m, n, n) array of square blocks."""
    try:
        arr = np.asarray(blocks, dtype=complex)
    except (ValueError, TypeError) as exc:
        raise InvalidInputError(f"ragged or non-numeric block array: {exc}") from exc
    if arr.ndim != 4:
        raise InvalidInputError(f"expected an m x m array of n x n blocks, got shape {arr.shape}")
    m1, m2, n1, n2 = arr.shape
    if m1 != m2 or n1 != n2:
        raise InvalidInputError(f"blocks must form a square array of square matrices, got shape {arr.shape}")
    if block_size is not None and n1 != block_size:
        raise InvalidInputError(f"expected {block_size} x {block_size} blocks, got {n1} x {n1}")
    if not np.isfinite(arr).all():
        raise InvalidInputError("block entries must be finite")
    return arr


@dataclass(frozen=True, eq=False)
class SvdResult:
    """Full decomposition a = left @ diag(singular_values) @ right.

    Both factors are unitary (full, not thin) and the singular values are
    nonincreasing and nonnegative.
    """

    left: np.ndarray
    singular_values: np.ndarray
    right: np.ndarray

    def reconstruct(self) -> np.ndarray:
        rows, cols = self.left.shape[0], self.right.shape[0]
        sigma = np.zeros((rows, cols))
        np.fill_diagonal(sigma, self.singular_values)
        return self.left @ sigma @ self.right


def svd(a) -> SvdResult:
    """Full SVD of a validated matrix."""
    u, s, vh = np.linalg.svd(as_matrix(a))
    return SvdResult(u, s, vh)


def singular_values(a) -> np.ndarray:
    """Singular values of ``a`` in nonincreasing order."""
    return np.linalg.svd(as_matrix(a), compute_uv=False)


def operator_norm(a) -> float:
    """Largest singular value."""
    return float(singular_values(a)[0])


def trace_norm(a) -> float:
    """Sum of singular values."""
    return float(singular_values(a).sum())


def dual_witness(a) -> np.ndarray:
    """Unitary ``w`` with ``tr(a w)`` equal to the trace norm of ``a``.

    Built from the full SVD ``a = U diag(s) V*`` as ``w = V U*``, so ``w``
    stays unitary (operator norm exactly 1) even when ``a`` is rank
    deficient.
    """
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInputError("dual witness requires a square matrix")
    if not arr.any():
        raise DegenerateInputError("zero matrix has no distinguished unit-norm witness")
    u, _, vh = np.linalg.svd(arr)
    return vh.conj().T @ u.conj().T


def trace_pairing(a, b) -> complex:
    """``tr(a b)`` for square matrices of equal size."""
    am = as_matrix(a)
    bm = as_matrix(b)
    if am.shape[0] != am.shape[1] or am.shape != bm.shape:
        raise InvalidInputError(f"trace pairing needs equal square matrices, got {am.shape} and {bm.shape}")
    return complex(np.trace(am @ bm))


def assemble_blocks(blocks) -> np.ndarray:
    """Flatten an m x m array of n x n blocks into the mn x mn matrix.

    Entry (k*n + i, l*n + j) of the result is entry (i, j) of block (k, l).
    """
    arr = as_block_array(blocks)
    m, _, n, _ = arr.shape
    return arr.transpose(0, 2, 1, 3).reshape(m * n, m * n)


def split_blocks(a, block_size: int) -> np.ndarray:
    """Inverse of :func:`assemble_blocks`; exact relayout, no arithmetic."""
    arr = as_matrix(a)
    if arr.shape[0] != arr.shape[1]:
        raise InvalidInputError("block splitting requires a square matrix")
    if block_size < 1 or arr.shape[0] % block_size:
        raise InvalidInputError(f"size {arr.shape[0]} is not a multiple of block size {block_size}")
    m = arr.shape[0] // block_size
    return arr.reshape(m, block_size, m, block_size).transpose(0, 2, 1, 3).copy()


def block_scalar_action(s, blocks, t) -> np.ndarray:
    """Scalar action (S u T) on an m x m array of blocks: out_kl = sum S_kp u_pq T_ql."""
    arr = as_block_array(blocks)
    sm = as_matrix(s)
    tm = as_matrix(t)
    m = arr.shape[0]
    if sm.shape != (m, m) or tm.shape != (m, m):
        raise InvalidInputError(f"scalar factors must be {m} x {m}, got {sm.shape} and {tm.shape}")
    return np.einsum("kp,pqab,ql->klab", sm, arr, tm)


def direct_sum(mats) -> np.ndarray:
    """Block-diagonal matrix with the given square matrices on the diagonal."""
    mats = list(mats)
    if not mats:
        raise InvalidInputError("direct sum of an empty family")
    arrs = []
    for m in mats:
        arr = as_matrix(m)
        if arr.shape[0] != arr.shape[1]:
            raise InvalidInputError(f"direct sum summands must be square, got shape {arr.shape}")
        arrs.append(arr)
    return block_diag(*arrs).astype(complex)


def _haar_unitary(rng: np.random.Generator, k: int) -> np.ndarray:
    # QR of a complex Ginibre matrix with the R diagonal phase-fixed gives
    # the Haar distribution.
    z = (rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_unitary(k: int, seed) -> np.ndarray:
    """Haar-random k x k unitary, deterministic per seed."""
    if k < 1:
        raise InvalidInputError(f"size must be positive, got {k}")
    return _haar_unitary(np.random.default_rng(seed), k)


def random_contraction(k: int, seed) -> np.ndarray:
    """Random k x k matrix with operator norm at most 1, deterministic per seed.

    Sampled as U diag(s) V with independent Haar factors and uniform
    singular values, so both the interior and the boundary of the unit
    ball are exercised.
    """
    if k < 1:
        raise InvalidInputError(f"size must be positive, got {k}")
    rng = np.random.default_rng(seed)
    u = _haar_unitary(rng, k)
    v = _haar_unitary(rng, k)
    return u @ np.diag(rng.uniform(0.0, 1.0, size=k)) @ v
