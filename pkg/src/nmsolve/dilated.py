"""Treeplex mirror steps built from per-decision-point regularizers.

The divergence dilates a local simplex divergence by parent reach:

    D(x, z) = sum_j x[parent_j] * D_loc(x_j / x[parent_j], z_j / z[parent_j])

with D_loc either KL or half squared Euclidean distance, and unit weight
on every decision point. Minimizing eta*<x, g> + D(x, z) then splits
bottom-up: each decision point solves a local prox whose gradient is its
own sequence losses plus the optimal values of child subproblems, and
that optimal value is in turn charged to the parent's gradient entry.
Local solutions are closed-form (softmax, or a sorted projection), so a
single sweep up and one sweep down produce the exact minimizer; the
value charged upward makes that exactness hold, which is what the
numerical-oracle tests pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, DomainError, InvalidInput
from .learners import ENTROPY, L2, _entropy_prox_probs, project_simplex
from .treeplex import SequenceFormStrategy, Treeplex


@dataclass(frozen=True)
class DilatedDGF:
    """Which local regularizer the dilation lifts to the treeplex."""

    kind: str = ENTROPY

    def __post_init__(self):
        if self.kind not in (ENTROPY, L2):
            raise InvalidInput(f"unknown regularizer kind {self.kind!r}")


def _behavior_at(z: np.ndarray, t: Treeplex, j: int) -> np.ndarray:
    reach = z[int(t.parent_seq[j])]
    local = z[t.seq_slice(j)]
    if reach <= 0.0:
        return np.full(local.size, 1.0 / local.size)
    return local / reach


def dilated_divergence(
    t: Treeplex, x: SequenceFormStrategy, z: SequenceFormStrategy, dgf: DilatedDGF
) -> float:
    """Reach-weighted sum of local divergences between two strategies."""
    xv, zv = x.values, z.values
    total = 0.0
    for j in range(t.num_decision_points):
        reach = xv[int(t.parent_seq[j])]
        if reach <= 0.0:
            continue
        bx = xv[t.seq_slice(j)] / reach
        bz = _behavior_at(zv, t, j)
        if dgf.kind == ENTROPY:
            mask = bx > 0.0
            total += reach * float(
                np.sum(bx[mask] * np.log(bx[mask] / bz[mask]))
            )
        else:
            d = bx - bz
            total += reach * 0.5 * float(d @ d)
    return total


def dilated_prox(
    t: Treeplex, z: SequenceFormStrategy, g, eta: float, dgf: DilatedDGF
) -> SequenceFormStrategy:
    """argmin over the treeplex of eta*<x, g> + D(x, z)."""
    if eta <= 0:
        raise InvalidInput("step size must be positive")
    grad = np.asarray(g, dtype=np.float64)
    if grad.size != t.seq_count:
        raise DimensionError(
            f"gradient has {grad.size} entries, treeplex has {t.seq_count}"
        )
    zv = z.values
    if dgf.kind == ENTROPY and np.any(zv <= 0.0):
        raise DomainError("entropy prox needs a strictly positive base point")

    J = t.num_decision_points
    behaviors = [None] * J
    values = np.zeros(J)
    scaled = eta * grad
    for j in t.bottom_up:
        c = scaled[t.seq_slice(j)].copy()
        for a in range(int(t.n[j])):
            for child in t.children[j][a]:
                c[a] += values[child]
        bz = _behavior_at(zv, t, j)
        if dgf.kind == ENTROPY:
            b = _entropy_prox_probs(bz, c, 1.0)
            shift = c.min()
            values[j] = shift - np.log(float(np.sum(bz * np.exp(shift - c))))
        else:
            b = project_simplex(bz - c).probs
            d = b - bz
            values[j] = float(b @ c) + 0.5 * float(d @ d)
        behaviors[j] = b

    x = np.zeros(t.seq_count)
    x[0] = 1.0
    for j in t.top_down:
        x[t.seq_slice(j)] = x[int(t.parent_seq[j])] * behaviors[j]
    return SequenceFormStrategy(t, x)


def dmomd_step(
    t: Treeplex, z: SequenceFormStrategy, momentum, eta: float, dgf: DilatedDGF
) -> SequenceFormStrategy:
    """Mirror step along an aggregated-momentum direction.

    The momentum vector plays the role of a negated loss, so the prox
    consumes its sign flip; the Euclidean instantiation is the gradient
    variant, the entropy one the multiplicative-weights variant.
    """
    return dilated_prox(t, z, -np.asarray(momentum, dtype=np.float64), eta, dgf)
