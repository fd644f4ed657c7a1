"""Maximization of the amplified-image norm over the unit ball of a space.

For the dual-friendly spaces (cmin, cmax, op:k) each ascent step linearizes
the objective at the current point through the extremal vectors of its norm,
pulls the resulting linear functional back to the variable, and jumps to the
closed-form maximizer of that functional over the unit ball (a conditional
gradient step built from dual witnesses). Other spaces fall back to a
projected random search. Nonsmoothness is handled by restart diversity, not
subgradient machinery: the known optima at this scale are recovered in a few
steps.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .correspondence import amplified_image
from .errors import InvalidInputError
from .spaces import Couple, LeveledElement, MatricialSpace

__all__ = ["OptimizerConfig", "polar_ascent_step", "optimize_couple"]

_LINE_SEARCH = (1.0, 0.5, 0.25, 0.1)


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 8
    iterations: int = 200
    step_init: float = 0.5
    step_decay: float = 0.9
    seed: int = 0
    tolerance: float = 1e-12
    stall_limit: int = 10

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidInputError(f"restarts must be positive, got {self.restarts}")
        if self.tolerance <= 0:
            raise InvalidInputError(f"tolerance must be positive, got {self.tolerance}")


def _project(space: MatricialSpace, coords: np.ndarray) -> LeveledElement:
    # radial rescaling by the space's own norm keeps any element feasible
    el = LeveledElement(space.space_id, coords)
    nrm = space.norm(el)
    if nrm > 1.0:
        el = LeveledElement(space.space_id, coords / nrm)
    return el


def _objective(space: MatricialSpace, v: LeveledElement, u4: np.ndarray) -> float:
    return space.norm(amplified_image(v, u4))


def _top_pair(mat: np.ndarray):
    u, s, vh = np.linalg.svd(mat)
    return u[:, 0], vh[0].conj(), float(s[0])


def _proposal_cmin(v, u4):
    w = v.coords[:, :, 0]
    image = np.einsum("klji,ij->kl", u4, w)
    if not image.any():
        return None
    x, y, _ = _top_pair(image)
    pullback = np.einsum("k,l,klji->ij", x.conj(), y, u4)
    if not pullback.any():
        return None
    # maximize Re sum w_ij g_ij = Re tr(w g^T) over the operator-norm ball
    return linalg.dual_witness(pullback.T).reshape(*pullback.shape, 1)


def _proposal_cmax(v, u4):
    w = v.coords[:, :, 0]
    image = np.einsum("klji,ij->kl", u4, w)
    if not image.any():
        return None
    witness = linalg.dual_witness(image)
    pullback = np.einsum("klji,lk->ij", u4, witness)
    if not pullback.any():
        return None
    # maximize Re tr(w g^T) over the trace-norm ball: top rank-one of g^T
    uu, _, vvh = np.linalg.svd(pullback.T)
    return np.outer(vvh[0].conj(), uu[:, 0].conj()).reshape(*pullback.shape, 1)


def _proposal_op(v, u4, k):
    n = v.level
    m = u4.shape[0]
    wblk = v.coords.reshape(n, n, k, k)
    image4 = np.einsum("klji,ijab->klab", u4, wblk)
    image = linalg.assemble_blocks(image4)
    if not image.any():
        return None
    x, y, _ = _top_pair(image)
    xc = x.reshape(m, k)
    yc = y.reshape(m, k)
    pull4 = np.einsum("klji,ka,lb->ijab", u4, xc.conj(), yc)
    pull = linalg.assemble_blocks(pull4)
    if not pull.any():
        return None
    w_new = linalg.dual_witness(pull.T)
    return linalg.split_blocks(w_new, k).reshape(n, n, k * k)


def _step(space: MatricialSpace, v: LeveledElement, u4: np.ndarray, current: float,
          rng, step: float):
    if space.kind == "cmin":
        proposal = _proposal_cmin(v, u4)
    elif space.kind == "cmax":
        proposal = _proposal_cmax(v, u4)
    elif space.kind == "op":
        proposal = _proposal_op(v, u4, space.block_size)
    else:
        proposal = None

    candidates = []
    if proposal is not None:
        for t in _LINE_SEARCH:
            candidates.append((1.0 - t) * v.coords + t * proposal)
    else:
        rng = np.random.default_rng(rng)
        scale = step * max(1.0, float(np.abs(v.coords).max()))
        for _ in range(4):
            noise = rng.standard_normal(v.coords.shape) + 1j * rng.standard_normal(v.coords.shape)
            candidates.append(v.coords + scale * noise)

    best_v, best_val = v, current
    for coords in candidates:
        cand = _project(space, coords)
        val = _objective(space, cand, u4)
        if val > best_val:
            best_v, best_val = cand, val
    return best_v, best_val


def polar_ascent_step(space: MatricialSpace, v: LeveledElement, u, rng=None,
                      step: float = 0.5) -> LeveledElement:
    """One ascent step; never decreases the objective (proposal rejected otherwise).

    For cmin, cmax and op:k spaces the proposal is the dual-witness jump
    described in the module docstring, refined by a short line search along
    the segment to the current point (the ball is convex, so every candidate
    stays feasible). Unsupported spaces fall back to a projected random
    search around the current point.
    """
    u4 = linalg.as_block_array(u, block_size=v.level)
    rng = np.random.default_rng(0 if rng is None else rng)
    best_v, _ = _step(space, v, u4, _objective(space, v, u4), rng, step)
    return best_v


def optimize_couple(space: MatricialSpace, n: int, u, config: OptimizerConfig | None = None,
                    starts=None):
    """Best couple found by multi-restart ascent; returns (couple, value).

    The returned element is feasible by radial projection, ties between
    restarts go to the first one found, and the reported value is a fresh
    evaluation of the returned couple. Deterministic per config seed.
    """
    cfg = config or OptimizerConfig()
    u4 = u
    if not (isinstance(u4, np.ndarray) and u4.dtype == np.complex128 and u4.ndim == 4
            and u4.shape[0] == u4.shape[1] and u4.shape[2] == n and u4.shape[3] == n):
        u4 = linalg.as_block_array(u, block_size=n)
    rng = np.random.default_rng(cfg.seed)

    if not u4.any():
        zero = LeveledElement(space.space_id, np.zeros((n, n, space.dim), dtype=complex))
        return Couple(space, zero), 0.0

    starts = list(starts or [])
    best_v = None
    best_val = -np.inf
    for restart in range(cfg.restarts):
        if restart < len(starts):
            v = _project(space, starts[restart].coords)
        else:
            coords = rng.standard_normal((n, n, space.dim)) + 1j * rng.standard_normal((n, n, space.dim))
            v = _project(space, coords)
        val = _objective(space, v, u4)
        stall = 0
        step = cfg.step_init
        for _ in range(cfg.iterations):
            v_next, val_next = _step(space, v, u4, val, rng, step)
            if val_next > val + cfg.tolerance:
                stall = 0
            else:
                stall += 1
            v, val = v_next, val_next
            step *= cfg.step_decay
            if stall >= cfg.stall_limit:
                break
        if val > best_val:
            best_v, best_val = v, val

    couple = Couple(space, best_v)
    return couple, _objective(space, best_v, u4)
