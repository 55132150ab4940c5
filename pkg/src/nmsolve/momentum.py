"""Negative-momentum buffers with periodic restarts.

Two equivalent bookkeeping forms are provided.  The buffer form keeps a
profile of past momentum vectors and emits

    mu_t = beta * sum(profile) - loss_t,

resetting the profile once it holds k entries (checked before appending
mu_t, so the reset fires while computing the k-th follow-up).  The
cumulative form tracks L_t = -sum_{tau<=t} mu_tau directly through

    L_t = L_{t-1} + loss_t - beta * (L_att - L_{t-1}),

where the attachment L_att is rebound to the pre-update value L_{t-1}
right after the update whenever t % k == 0.  The t = 0 trigger binds the
zero vector, so the first cycle runs with no attachment, matching the
buffer form exactly (property-tested to 1e-12).

k may be None, meaning an infinite interval: the profile never resets
and L_att stays pinned at zero, collapsing the cumulative form to
L_t = (1 + beta) * L_{t-1} + loss_t.

Note: the regret matchers in :mod:`nmsolve.learners` rebind their
attachment one index earlier (to the value entering the previous
iteration); each module follows its own update rule literally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DimensionError, InvalidInput


def coerce_interval(k) -> Optional[int]:
    """Normalize a restart interval: positive int, or None/inf for never."""
    if k is None:
        return None
    if isinstance(k, float) and math.isinf(k):
        return None
    ki = int(k)
    if ki < 1 or ki != k:
        raise InvalidInput(f"restart interval must be a positive integer, got {k!r}")
    return ki


@dataclass
class MomentumState:
    beta: float
    k: Optional[int] = None
    profile_sum: Optional[np.ndarray] = None
    profile_len: int = 0
    last_mu: Optional[np.ndarray] = None
    t: int = 0

    def __post_init__(self):
        self.k = coerce_interval(self.k)


def ram_momentum_update(state: MomentumState, loss) -> np.ndarray:
    """One buffer-form momentum step; returns mu_t and advances the state."""
    l = np.asarray(loss, dtype=np.float64)
    if state.profile_sum is None:
        state.profile_sum = np.zeros_like(l)
    elif state.profile_sum.shape != l.shape:
        raise DimensionError(
            f"loss {l.shape} vs momentum state {state.profile_sum.shape}"
        )
    mu = state.beta * state.profile_sum - l
    # reset check precedes the append, so the k-th follow-up still sees
    # the full profile and the buffer restarts with mu_t alone
    if state.k is not None and state.profile_len == state.k:
        state.profile_sum = np.zeros_like(l)
        state.profile_len = 0
    state.profile_sum = state.profile_sum + mu
    state.profile_len += 1
    state.last_mu = mu
    state.t += 1
    return mu


@dataclass
class CumulativeLossState:
    beta: float
    k: Optional[int] = None
    L: Optional[np.ndarray] = None
    L_att: Optional[np.ndarray] = None
    t: int = 0

    def __post_init__(self):
        self.k = coerce_interval(self.k)


def attachment_loss_update(state: CumulativeLossState, loss) -> np.ndarray:
    """One cumulative-form step; returns the new L_t and advances the state."""
    l = np.asarray(loss, dtype=np.float64)
    if state.L is None:
        state.L = np.zeros_like(l)
        state.L_att = np.zeros_like(l)
    elif state.L.shape != l.shape:
        raise DimensionError(f"loss {l.shape} vs cumulative state {state.L.shape}")
    prev = state.L
    state.L = prev + l - state.beta * (state.L_att - prev)
    if state.k is not None and state.t % state.k == 0:
        state.L_att = prev
    state.t += 1
    return state.L


def gdam_step(z_prev, z_curr, loss, eta: float, beta: float) -> np.ndarray:
    """Unconstrained heavy-ball step z' = z - eta*loss + beta*(z - z_prev)."""
    zp = np.asarray(z_prev, dtype=np.float64)
    zc = np.asarray(z_curr, dtype=np.float64)
    l = np.asarray(loss, dtype=np.float64)
    if not (zp.shape == zc.shape == l.shape):
        raise DimensionError(
            f"shapes differ: {zp.shape}, {zc.shape}, {l.shape}"
        )
    if eta <= 0:
        raise InvalidInput("step size must be positive")
    return zc - eta * l + beta * (zc - zp)
