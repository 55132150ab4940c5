"""Online learners over a single probability simplex.

Covers the mirror-descent family (entropy and Euclidean prox, momentum
and optimistic variants, follow-the-regularized-leader on cumulative
losses) and the regret-matching family (plain, thresholded, and the
negative-momentum thresholded variant with a periodically rebound
attachment vector).

The entropy prox multiplies by exp(-eta * g) after subtracting the max
exponent, which changes nothing mathematically but keeps long runs from
overflowing; coordinates at exactly zero stay at zero, so entropy-based
solvers start from the uniform strategy.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionError, EmptyHistory, InvalidInput
from .momentum import CumulativeLossState, coerce_interval
from .nfg import SimplexStrategy, as_probs, instantaneous_regret

ENTROPY = "entropy"
L2 = "l2"

UNIFORM = "uniform"
LINEAR = "linear"
QUADRATIC = "quadratic"
LAST_ITERATE = "last"

AVERAGING_SCHEMES = (UNIFORM, LINEAR, QUADRATIC, LAST_ITERATE)


@dataclass(frozen=True)
class ProxSetup:
    eta: float
    regularizer: str = ENTROPY

    def __post_init__(self):
        if self.eta <= 0:
            raise InvalidInput("step size must be positive")
        if self.regularizer not in (ENTROPY, L2):
            raise InvalidInput(f"unknown regularizer {self.regularizer!r}")


def project_simplex(v) -> SimplexStrategy:
    """Euclidean projection onto the simplex (sort-and-threshold)."""
    w = np.asarray(v, dtype=np.float64).ravel()
    if w.size == 0 or not np.all(np.isfinite(w)):
        raise InvalidInput("projection input must be nonempty and finite")
    u = np.sort(w)[::-1]
    css = np.cumsum(u) - 1.0
    idx = np.arange(1, w.size + 1)
    rho = np.nonzero(u - css / idx > 0)[0][-1]
    theta = css[rho] / (rho + 1.0)
    return SimplexStrategy(np.maximum(w - theta, 0.0))


def _entropy_prox_probs(z: np.ndarray, g: np.ndarray, eta: float) -> np.ndarray:
    a = -eta * g
    x = z * np.exp(a - a.max())
    return x / x.sum()


def local_prox(z, g, setup: ProxSetup) -> SimplexStrategy:
    """Bregman prox step from z against gradient g."""
    zp = as_probs(z)
    gv = np.asarray(g, dtype=np.float64)
    if zp.shape != gv.shape:
        raise DimensionError(f"strategy {zp.shape} vs gradient {gv.shape}")
    if setup.regularizer == ENTROPY:
        return SimplexStrategy(_entropy_prox_probs(zp, gv, setup.eta))
    return project_simplex(zp - setup.eta * gv)


def momd_step(z, momentum, setup: ProxSetup) -> SimplexStrategy:
    """Mirror-descent step against a momentum vector (prox of -mu)."""
    return local_prox(z, -np.asarray(momentum, dtype=np.float64), setup)


def moftrl_step(state: CumulativeLossState, setup: ProxSetup) -> SimplexStrategy:
    """Regularized-leader step on the state's current cumulative loss."""
    if state.L is None:
        raise InvalidInput("cumulative state has no observed losses yet")
    a = -setup.eta * state.L
    if setup.regularizer == ENTROPY:
        x = np.exp(a - a.max())
        return SimplexStrategy(x / x.sum())
    return project_simplex(a)


RM = "rm"
RM_PLUS = "rm+"
MORM_PLUS = "morm+"


@dataclass
class RegretMatcherState:
    dim: int
    mode: str = RM_PLUS
    beta: float = 0.0
    k: Optional[int] = None
    R: np.ndarray = None
    R_att: np.ndarray = None
    prev_R: np.ndarray = None
    t: int = 0

    def __post_init__(self):
        if self.mode not in (RM, RM_PLUS, MORM_PLUS):
            raise InvalidInput(f"unknown regret-matching mode {self.mode!r}")
        self.k = coerce_interval(self.k)
        if self.R is None:
            self.R = np.zeros(self.dim)
        if self.R_att is None:
            self.R_att = np.zeros(self.dim)
        if self.prev_R is None:
            self.prev_R = np.zeros(self.dim)

    def strategy(self) -> SimplexStrategy:
        return _matched_strategy(self.R)


def _matched_strategy(R: np.ndarray) -> SimplexStrategy:
    pos = np.maximum(R, 0.0)
    total = pos.sum()
    if total <= 0.0:
        return SimplexStrategy.uniform(R.size)
    return SimplexStrategy(pos / total)


def regret_matcher_step(
    state: RegretMatcherState, loss, current
) -> SimplexStrategy:
    """Accumulate one round of regret and return the matched strategy.

    The momentum mode rebinds the attachment to the regret vector that
    entered the PREVIOUS iteration (one index behind the cumulative-loss
    form in :mod:`nmsolve.momentum`), after the update, whenever
    t % k == 0; at t = 0 that value is the zero vector.
    """
    l = np.asarray(loss, dtype=np.float64)
    if l.shape != state.R.shape:
        raise DimensionError(f"loss {l.shape} vs regret {state.R.shape}")
    r = instantaneous_regret(current, l)
    entering = state.R
    if state.mode == RM:
        state.R = entering + r
    elif state.mode == RM_PLUS:
        state.R = np.maximum(entering + r, 0.0)
    else:
        state.R = np.maximum(
            entering + r - state.beta * (state.R_att - entering), 0.0
        )
        if state.k is not None and state.t % state.k == 0:
            state.R_att = state.prev_R
    state.prev_R = entering
    state.t += 1
    return _matched_strategy(state.R)


@dataclass
class OptimisticState:
    current: SimplexStrategy
    prev_loss: Optional[np.ndarray] = None


def optimistic_step(state: OptimisticState, loss, setup: ProxSetup) -> SimplexStrategy:
    """One-memory optimistic prox: gradient 2*l_t - l_{t-1}, zero at start."""
    l = np.asarray(loss, dtype=np.float64)
    if state.prev_loss is None:
        state.prev_loss = np.zeros_like(l)
    nxt = local_prox(state.current, 2.0 * l - state.prev_loss, setup)
    state.prev_loss = l
    state.current = nxt
    return nxt


def averaged_strategy(history, scheme: str = UNIFORM) -> SimplexStrategy:
    """Weighted average of iterates; weights 1, t, t^2, or final-only."""
    if len(history) == 0:
        raise EmptyHistory("cannot average an empty history")
    if scheme == LAST_ITERATE:
        return SimplexStrategy(as_probs(history[-1]))
    if scheme == UNIFORM:
        weights = np.ones(len(history))
    elif scheme == LINEAR:
        weights = np.arange(1, len(history) + 1, dtype=np.float64)
    elif scheme == QUADRATIC:
        weights = np.arange(1, len(history) + 1, dtype=np.float64) ** 2
    else:
        raise InvalidInput(f"unknown averaging scheme {scheme!r}")
    stacked = np.stack([as_probs(h) for h in history])
    return SimplexStrategy(weights @ stacked)
