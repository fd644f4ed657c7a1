"""Linear correspondence between level-n elements and maps out of the n x n matrices.

A level-n element v = (x_ij) of a space E determines the linear map

    phi_v : a  ->  sum_ij a_ji x_ij

from the n x n matrices into E (note the transposed pairing a_ji). This map
is a bijection: the element is recovered exactly from the map's matrix. The
module also provides entrywise amplification of phi_v, the canonical flip
element whose amplified image reproduces v, and a naturality checker for
postcomposition with coordinate maps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import InvalidInputError
from .spaces import LeveledElement

__all__ = [
    "PhiMap",
    "phi_of",
    "reconstruct",
    "phi_apply",
    "phi_amplified",
    "amplified_image",
    "canonical_identity",
    "check_naturality",
]


@dataclass(frozen=True, eq=False)
class PhiMap:
    """Matrix representation of phi_v over the elementary basis.

    ``matrix`` has shape (dim, n*n); column p*n + q holds the coordinates the
    map assigns to the elementary matrix e_pq, i.e. x_qp.
    """

    source_dim: int
    space_id: str
    matrix: np.ndarray


def phi_of(v: LeveledElement) -> PhiMap:
    """The map associated to a level-n element; exact, invertible relayout."""
    n = v.level
    return PhiMap(n, v.space_id, v.coords.transpose(2, 1, 0).reshape(v.dim, n * n))


def reconstruct(phi: PhiMap) -> LeveledElement:
    """Inverse of :func:`phi_of`; bitwise round trip."""
    n = phi.source_dim
    d = phi.matrix.shape[0]
    return LeveledElement(phi.space_id, phi.matrix.reshape(d, n, n).transpose(2, 1, 0))


def phi_apply(phi: PhiMap, a) -> LeveledElement:
    """Image of an n x n matrix under the map, as a level-1 element."""
    arr = linalg.as_matrix(a)
    n = phi.source_dim
    if arr.shape != (n, n):
        raise InvalidInputError(f"expected a {n} x {n} matrix, got shape {arr.shape}")
    out = phi.matrix @ arr.reshape(n * n)
    return LeveledElement(phi.space_id, out.reshape(1, 1, -1))


def phi_amplified(phi: PhiMap, blocks) -> LeveledElement:
    """Entrywise application to an m x m array of n x n matrices."""
    n = phi.source_dim
    arr = blocks
    if not (isinstance(arr, np.ndarray) and arr.dtype == np.complex128 and arr.ndim == 4
            and arr.shape[0] == arr.shape[1] and arr.shape[2] == n and arr.shape[3] == n):
        arr = linalg.as_block_array(blocks, block_size=n)
    m = arr.shape[0]
    out = np.einsum("dx,klx->kld", phi.matrix, arr.reshape(m, m, n * n))
    return LeveledElement(phi.space_id, out)


def amplified_image(v: LeveledElement, blocks) -> LeveledElement:
    """Shorthand for ``phi_amplified(phi_of(v), blocks)``."""
    return phi_amplified(phi_of(v), blocks)


def canonical_identity(n: int) -> np.ndarray:
    """The flip element of the n x n blocks: block (p, q) is e_qp.

    Its amplified image under any phi_v is v itself, and the assembled
    n^2 x n^2 matrix is the (unitary) swap permutation.
    """
    if n < 1:
        raise InvalidInputError(f"size must be positive, got {n}")
    out = np.zeros((n, n, n, n), dtype=complex)
    for p in range(n):
        for q in range(n):
            out[p, q, q, p] = 1.0
    return out


def check_naturality(psi, v: LeveledElement, extra_matrices=()) -> float:
    """Largest deviation between mapping-then-representing and representing-then-mapping.

    ``psi`` is a coordinate matrix from the space of ``v`` into another
    space. Both composition orders are evaluated on the full elementary
    basis (plus any ``extra_matrices``) and compared coordinatewise.
    """
    psi_m = np.asarray(psi, dtype=complex)
    if psi_m.ndim != 2 or psi_m.shape[1] != v.dim:
        raise InvalidInputError(
            f"coordinate map of shape {psi_m.shape} does not act on dimension {v.dim}"
        )
    n = v.level
    phi_v = phi_of(v)
    mapped = LeveledElement("mapped", np.einsum("fd,kld->klf", psi_m, v.coords))
    phi_w = phi_of(mapped)

    tests = [np.zeros((n, n), dtype=complex) for _ in range(n * n)]
    for idx in range(n * n):
        tests[idx][idx // n, idx % n] = 1.0
    tests.extend(linalg.as_matrix(a) for a in extra_matrices)

    worst = 0.0
    for a in tests:
        via_map = phi_apply(phi_w, a).coords[0, 0]
        via_space = psi_m @ phi_apply(phi_v, a).coords[0, 0]
        worst = max(worst, float(np.abs(via_map - via_space).max()))
    return worst
