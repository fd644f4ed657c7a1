"""Concrete catalog of matrix-normed coordinate spaces and randomized checkers.

A space is a coordinate dimension together with a norm evaluator accepting
the (m, m, dim) coordinate array of a level-m element. The catalog:

* ``cmin``    scalars; level-m norm is the operator norm of the m x m matrix
* ``cmax``    scalars; level-m norm is the trace norm of the m x m matrix
* ``op:k``    k x k matrices; level-m norm is the operator norm of the
              assembled mk x mk matrix
* ``l1:[..]`` direct sums; level-m norm is the sum of the component norms

The two axioms every evaluator must satisfy, checked here on random and
structured samples:

1. padding an element with zero rows and columns leaves its norm unchanged;
2. ``|S u T| <= |S|_o |u| |T|_o`` for scalar matrices S, T.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import linalg
from .errors import InvalidInputError
from .serialize import complex_to_pairs

__all__ = [
    "LeveledElement",
    "MatricialSpace",
    "Couple",
    "c_min",
    "c_max",
    "concrete_operator_space",
    "l1_sum",
    "l1_offsets",
    "l1_component",
    "l1_embed",
    "coproduct_apply",
    "space_from_id",
    "planted_fault_space",
    "scalar_action",
    "pad",
    "element_direct_sum",
    "basis_element",
    "random_element",
    "contractive_functional",
    "functional_amplification",
    "AxiomReport",
    "check_axioms",
    "PConvexityReport",
    "check_p_convexity",
    "COUPLE_FEASIBILITY_TOL",
]

COUPLE_FEASIBILITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class LeveledElement:
    """Level-m element of a space, stored as an (m, m, dim) coordinate array."""

    space_id: str
    coords: np.ndarray

    @property
    def level(self) -> int:
        return self.coords.shape[0]

    @property
    def dim(self) -> int:
        return self.coords.shape[2]


@dataclass(frozen=True, eq=False)
class MatricialSpace:
    """Descriptor of a concrete space: coordinate dimension plus levelwise norm.

    ``norm_fn`` receives the raw (m, m, dim) coordinate array. ``kind`` is a
    dispatch tag ("cmin", "cmax", "op", "l1", or "custom"); ``block_size``
    holds k for op:k spaces, ``parts`` the summands of an l1 sum.
    """

    space_id: str
    dim: int
    description: str
    norm_fn: Callable[[np.ndarray], float]
    kind: str = "custom"
    block_size: int = 0
    parts: tuple = ()

    def element(self, coords) -> LeveledElement:
        """Wrap coordinates as an element of this space, validating shape.

        Accepts an (m, m, dim) array; for dim-1 spaces a plain (m, m) matrix
        and, for any space, a flat length-dim vector (level 1) also work.
        """
        try:
            arr = np.asarray(coords, dtype=complex)
        except (ValueError, TypeError) as exc:
            raise InvalidInputError(f"bad coordinates: {exc}") from exc
        if arr.ndim == 1 and arr.shape[0] == self.dim:
            arr = arr.reshape(1, 1, self.dim)
        elif arr.ndim == 2 and self.dim == 1 and arr.shape[0] == arr.shape[1]:
            arr = arr.reshape(arr.shape[0], arr.shape[1], 1)
        if arr.ndim != 3 or arr.shape[0] != arr.shape[1] or arr.shape[2] != self.dim:
            raise InvalidInputError(
                f"{self.space_id}: expected (m, m, {self.dim}) coordinates, got shape {arr.shape}"
            )
        if not np.isfinite(arr).all():
            raise InvalidInputError("coordinates must be finite")
        return LeveledElement(self.space_id, arr)

    def norm(self, u) -> float:
        """Levelwise norm of ``u`` (a LeveledElement or raw coordinates)."""
        if isinstance(u, LeveledElement):
            if u.space_id != self.space_id:
                raise InvalidInputError(f"element of {u.space_id} passed to {self.space_id}")
            coords = u.coords
        else:
            coords = self.element(u).coords
        return float(self.norm_fn(coords))


@dataclass(frozen=True, eq=False)
class Couple:
    """A space together with an element of the closed unit ball at its level.

    Feasibility is verified at construction by the space's own evaluator.
    """

    space: MatricialSpace
    v: LeveledElement

    def __post_init__(self):
        if self.v.space_id != self.space.space_id:
            raise InvalidInputError(f"couple mixes {self.space.space_id} with {self.v.space_id}")
        nrm = self.space.norm(self.v)
        if nrm > 1.0 + COUPLE_FEASIBILITY_TOL:
            raise InvalidInputError(f"couple element has norm {nrm:.15g} > 1")


# ---------------------------------------------------------------------------
# catalog constructors
# ---------------------------------------------------------------------------


def c_min() -> MatricialSpace:
    """Scalars with the operator norm at every level."""
    return MatricialSpace(
        "cmin", 1, "scalars, operator-norm levels",
        lambda c: float(np.linalg.svd(c[:, :, 0], compute_uv=False)[0]), kind="cmin",
    )


def c_max() -> MatricialSpace:
    """Scalars with the trace norm at every level."""
    return MatricialSpace(
        "cmax", 1, "scalars, trace-norm levels",
        lambda c: float(np.linalg.svd(c[:, :, 0], compute_uv=False).sum()), kind="cmax",
    )


def concrete_operator_space(k: int) -> MatricialSpace:
    """k x k matrices; a level-m element is normed as the assembled mk x mk matrix.

    Coordinates are over the elementary-matrix basis of the k x k matrices in
    row-major order, so the coordinate vector of an entry is just the entry
    flattened.
    """
    if k < 1:
        raise InvalidInputError(f"size must be positive, got {k}")

    def norm_fn(coords):
        m = coords.shape[0]
        assembled = coords.reshape(m, m, k, k).transpose(0, 2, 1, 3).reshape(m * k, m * k)
        return float(np.linalg.svd(assembled, compute_uv=False)[0])

    return MatricialSpace(
        f"op:{k}", k * k, f"{k} x {k} matrices, assembled operator norm",
        norm_fn, kind="op", block_size=k,
    )


def l1_sum(parts) -> MatricialSpace:
    """Direct sum whose level-m norm is the sum of the component norms."""
    parts = tuple(parts)
    if not parts:
        raise InvalidInputError("l1 sum of an empty family")
    dims = [p.dim for p in parts]
    bounds = np.concatenate([[0], np.cumsum(dims)]).astype(int)

    def norm_fn(coords):
        total = 0.0
        for part, lo, hi in zip(parts, bounds[:-1], bounds[1:]):
            total += part.norm_fn(np.ascontiguousarray(coords[:, :, lo:hi]))
        return total

    space_id = "l1:[" + ",".join(p.space_id for p in parts) + "]"
    return MatricialSpace(
        space_id, int(bounds[-1]), f"l1 sum of {len(parts)} spaces",
        norm_fn, kind="l1", parts=parts,
    )


def l1_offsets(space: MatricialSpace) -> list[int]:
    """Coordinate offsets of the summands of an l1 space (ends with dim)."""
    if space.kind != "l1":
        raise InvalidInputError(f"{space.space_id} is not an l1 sum")
    offs = [0]
    for p in space.parts:
        offs.append(offs[-1] + p.dim)
    return offs


def l1_component(space: MatricialSpace, u: LeveledElement, index: int) -> LeveledElement:
    """Component of an l1-sum element as an element of the summand."""
    offs = l1_offsets(space)
    part = space.parts[index]
    return LeveledElement(part.space_id, np.ascontiguousarray(u.coords[:, :, offs[index]:offs[index + 1]]))


def l1_embed(space: MatricialSpace, element: LeveledElement, index: int) -> LeveledElement:
    """Image of a summand element under the coordinate injection into the sum."""
    offs = l1_offsets(space)
    part = space.parts[index]
    if element.space_id != part.space_id:
        raise InvalidInputError(f"cannot embed {element.space_id} as summand {index} of {space.space_id}")
    m = element.level
    coords = np.zeros((m, m, space.dim), dtype=complex)
    coords[:, :, offs[index]:offs[index + 1]] = element.coords
    return LeveledElement(space.space_id, coords)


def coproduct_apply(space: MatricialSpace, psis, u: LeveledElement) -> np.ndarray:
    """Apply the coproduct of coordinate maps componentwise to an l1-sum element.

    ``psis`` holds one coordinate matrix per summand, all with the same
    output dimension. Composing with a coordinate injection recovers the
    corresponding map exactly: the other components contribute exact zeros.
    """
    offs = l1_offsets(space)
    psis = [np.asarray(p, dtype=complex) for p in psis]
    if len(psis) != len(space.parts):
        raise InvalidInputError(f"{len(psis)} maps for {len(space.parts)} summands")
    out_dim = psis[0].shape[0]
    for psi, part in zip(psis, space.parts):
        if psi.ndim != 2 or psi.shape != (out_dim, part.dim):
            raise InvalidInputError(f"coordinate map of shape {psi.shape} against summand dimension {part.dim}")
    if u.space_id != space.space_id:
        raise InvalidInputError(f"element of {u.space_id} passed to {space.space_id}")
    m = u.level
    out = np.zeros((m, m, out_dim), dtype=complex)
    for psi, lo, hi in zip(psis, offs[:-1], offs[1:]):
        out = out + np.einsum("fd,kld->klf", psi, u.coords[:, :, lo:hi])
    return out


def _split_top_level(text: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
            continue
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        cur.append(ch)
    parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def space_from_id(space_id: str) -> MatricialSpace:
    """Build a catalog space from its stable identifier.

    Understood forms: "cmin", "cmax", "op:k", "l1:[id,id,...]" (nesting
    allowed).
    """
    s = space_id.strip()
    if s == "cmin":
        return c_min()
    if s == "cmax":
        return c_max()
    if s.startswith("op:"):
        try:
            k = int(s[3:])
        except ValueError as exc:
            raise InvalidInputError(f"bad operator-space id: {space_id!r}") from exc
        return concrete_operator_space(k)
    if s.startswith("l1:[") and s.endswith("]"):
        inner = _split_top_level(s[4:-1])
        if not inner:
            raise InvalidInputError(f"empty l1 sum id: {space_id!r}")
        return l1_sum([space_from_id(tok) for tok in inner])
    raise InvalidInputError(f"unknown space id: {space_id!r}")


def planted_fault_space(base: MatricialSpace | None = None) -> MatricialSpace:
    """Deliberately corrupted evaluator (norm + 0.1 at level 2 only).

    Violates the padding axiom; used to confirm the checker catches faults.
    """
    base = base or c_min()

    def norm_fn(coords):
        value = base.norm_fn(coords)
        return value + 0.1 if coords.shape[0] == 2 else value

    return MatricialSpace(
        f"fault:{base.space_id}", base.dim, "corrupted evaluator for checker validation",
        norm_fn, kind="custom",
    )


# ---------------------------------------------------------------------------
# element operations
# ---------------------------------------------------------------------------


def scalar_action(s, u: LeveledElement, t) -> LeveledElement:
    """Two-sided scalar action S u T, computed coordinatewise."""
    sm = linalg.as_matrix(s)
    tm = linalg.as_matrix(t)
    m = u.level
    if sm.shape != (m, m) or tm.shape != (m, m):
        raise InvalidInputError(f"scalar factors must be {m} x {m}, got {sm.shape} and {tm.shape}")
    return LeveledElement(u.space_id, np.einsum("kp,pqd,ql->kld", sm, u.coords, tm))


def pad(u: LeveledElement, extra: int) -> LeveledElement:
    """The element u + 0 at level m + extra (zero rows and columns appended)."""
    if extra < 0:
        raise InvalidInputError(f"padding must be nonnegative, got {extra}")
    if extra == 0:
        return u
    m, _, d = u.coords.shape
    coords = np.zeros((m + extra, m + extra, d), dtype=complex)
    coords[:m, :m] = u.coords
    return LeveledElement(u.space_id, coords)


def element_direct_sum(elements) -> LeveledElement:
    """Block-diagonal element combining same-space elements of any levels."""
    elements = list(elements)
    if not elements:
        raise InvalidInputError("direct sum of an empty family")
    space_id = elements[0].space_id
    d = elements[0].dim
    for e in elements:
        if e.space_id != space_id or e.dim != d:
            raise InvalidInputError("direct-sum summands must share a space")
    total = sum(e.level for e in elements)
    coords = np.zeros((total, total, d), dtype=complex)
    pos = 0
    for e in elements:
        coords[pos:pos + e.level, pos:pos + e.level] = e.coords
        pos += e.level
    return LeveledElement(space_id, coords)


def basis_element(space: MatricialSpace, index: int) -> LeveledElement:
    """Level-1 canonical coordinate element."""
    coords = np.zeros((1, 1, space.dim), dtype=complex)
    coords[0, 0, index] = 1.0
    return LeveledElement(space.space_id, coords)


def random_element(space: MatricialSpace, level: int, rng, unit: bool = False) -> LeveledElement:
    """Gaussian random element; with ``unit`` rescaled to norm 1 (when nonzero)."""
    rng = np.random.default_rng(rng)
    coords = rng.standard_normal((level, level, space.dim)) + 1j * rng.standard_normal((level, level, space.dim))
    el = LeveledElement(space.space_id, coords)
    if unit:
        nrm = space.norm(el)
        if nrm > 0:
            el = LeveledElement(space.space_id, coords / nrm)
    return el


# ---------------------------------------------------------------------------
# contractive functionals
# ---------------------------------------------------------------------------


def contractive_functional(space: MatricialSpace, rng) -> np.ndarray:
    """Random functional f with |f(x)| bounded by the level-1 norm of x.

    Returned as a length-dim row vector acting on coordinates. For the
    scalar spaces this is a number of modulus at most 1; for op:k it is
    x -> tr(x g) with trace norm of g at most 1; for l1 sums, a tuple of
    contractive functionals on the summands.
    """
    rng = np.random.default_rng(rng)
    if space.kind in ("cmin", "cmax"):
        phase = np.exp(2j * np.pi * rng.uniform())
        return np.array([rng.uniform() * phase])
    if space.kind == "op":
        k = space.block_size
        g = rng.standard_normal((k, k)) + 1j * rng.standard_normal((k, k))
        g *= rng.uniform() / linalg.trace_norm(g)
        # row-major coordinates of x pair with g as tr(x g) = sum x_ij g_ji
        return g.T.reshape(-1).copy()
    if space.kind == "l1":
        return np.concatenate([contractive_functional(p, rng) for p in space.parts])
    raise InvalidInputError(f"no functional sampler for space kind {space.kind!r}")


def functional_amplification(f_row, u: LeveledElement) -> np.ndarray:
    """Apply a functional entrywise to a level-m element; returns an m x m matrix."""
    row = np.asarray(f_row, dtype=complex)
    if row.shape != (u.dim,):
        raise InvalidInputError(f"functional of length {row.shape} against dimension {u.dim}")
    return np.einsum("d,kld->kl", row, u.coords)


# ---------------------------------------------------------------------------
# randomized axiom / convexity checkers
# ---------------------------------------------------------------------------


@dataclass
class AxiomReport:
    trials: int
    axiom1_max_violation: float
    axiom2_max_violation: float
    worst_case_inputs: dict


def _sample_element(space, level, rng, variant):
    if variant == 1:
        # single elementary coordinate at a random position
        coords = np.zeros((level, level, space.dim), dtype=complex)
        k = int(rng.integers(level))
        l = int(rng.integers(level))
        coords[k, l, int(rng.integers(space.dim))] = np.exp(2j * np.pi * rng.uniform())
        el = LeveledElement(space.space_id, coords)
    elif variant == 2:
        # diagonal element conjugated by a random unitary
        coords = np.zeros((level, level, space.dim), dtype=complex)
        for k in range(level):
            coords[k, k, int(rng.integers(space.dim))] = rng.standard_normal() + 1j * rng.standard_normal()
        u = linalg.random_unitary(level, rng)
        el = scalar_action(u, LeveledElement(space.space_id, coords), u.conj().T)
    else:
        el = random_element(space, level, rng)
    nrm = space.norm(el)
    if nrm > 0:
        el = LeveledElement(space.space_id, el.coords / nrm)
    return el


def check_axioms(space: MatricialSpace, trials: int, seed=0, max_level: int = 4) -> AxiomReport:
    """Randomized check of the two evaluator axioms, ``trials`` rounds per level.

    Records the largest absolute padding-equality violation and the largest
    positive part of the scalar-action inequality, together with serialized
    worst-case inputs. Samples mix normalized Gaussian elements with
    structured ones (elementary, unitary-conjugated diagonal) to hit the
    equality edges.
    """
    if trials < 1:
        raise InvalidInputError(f"trials must be positive, got {trials}")
    rng = np.random.default_rng(seed)
    a1_max = 0.0
    a2_max = 0.0
    worst: dict = {"axiom1": None, "axiom2": None}
    eye_cache = {m: np.eye(m) for m in range(1, max_level + 1)}
    for level in range(1, max_level + 1):
        eye = eye_cache[level]
        for t in range(trials):
            u = _sample_element(space, level, rng, variant=t % 3)
            base = space.norm(u)

            extra = int(rng.integers(1, 3))
            v1 = abs(space.norm(pad(u, extra)) - base)
            if v1 > a1_max:
                a1_max = v1
                worst["axiom1"] = {
                    "level": level, "extra": extra, "violation": v1,
                    "coords": complex_to_pairs(u.coords),
                }

            if t % 2:
                s = linalg.random_unitary(level, rng)
                tt = linalg.random_unitary(level, rng)
            else:
                s = rng.standard_normal((level, level)) + 1j * rng.standard_normal((level, level))
                tt = rng.standard_normal((level, level)) + 1j * rng.standard_normal((level, level))
            v2 = space.norm(scalar_action(s, u, eye)) - linalg.operator_norm(s) * base
            v2 = max(v2, space.norm(scalar_action(eye, u, tt)) - base * linalg.operator_norm(tt))
            v2 = max(0.0, v2)
            if v2 > a2_max:
                a2_max = v2
                worst["axiom2"] = {
                    "level": level, "violation": v2,
                    "coords": complex_to_pairs(u.coords),
                }
    return AxiomReport(trials, a1_max, a2_max, worst)


@dataclass
class PConvexityReport:
    p: float
    trials: int
    max_violation: float
    witness: dict | None


def check_p_convexity(space: MatricialSpace, p: float, trials: int, seed=0,
                      max_level: int = 2, summands=(2, 3)) -> PConvexityReport:
    """One-sided sampler for the l_p block-diagonal inequality.

    Evaluates the positive part of |u_1 + ... + u_k| - (sum |u_i|^p)^(1/p)
    on random tuples (k drawn from ``summands``) plus one structured tuple
    of identical unit basis elements. Absence of a violation is evidence,
    not proof.
    """
    if p < 1:
        raise InvalidInputError(f"exponent must be at least 1, got {p}")
    rng = np.random.default_rng(seed)
    best = 0.0
    witness = None
    for t in range(trials):
        if t == 0:
            b = basis_element(space, 0)
            nrm = space.norm(b)
            if nrm > 0:
                b = LeveledElement(space.space_id, b.coords / nrm)
            tup = [b, b]
        else:
            k = int(rng.choice(summands))
            tup = [
                _sample_element(space, int(rng.integers(1, max_level + 1)), rng, variant=t % 3)
                for _ in range(k)
            ]
        combined = space.norm(element_direct_sum(tup))
        bound = float(np.sum([space.norm(u) ** p for u in tup]) ** (1.0 / p))
        violation = combined - bound
        if violation > best:
            best = violation
            witness = {
                "trial": t, "violation": violation,
                "coords": [complex_to_pairs(u.coords) for u in tup],
            }
    return PConvexityReport(p, trials, best, witness)
