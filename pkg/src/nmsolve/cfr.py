"""Regret decomposition on treeplexes.

One regret matcher per decision point, driven by counterfactual losses.
Each iteration runs bottom-up value aggregation (the local loss of a
decision point is its own sequence loss plus the values of child
subtrees), feeds every local matcher its instantaneous regret, and reads
the next behavior strategy straight off the positive parts.

The momentum variant applies the attachment-damped update
[R + r - beta * (R_att - R)]^+ locally at every decision point and
rebinds each attachment every k iterations to the regret vector that
entered the previous iteration (zero at the start), mirroring the
single-simplex rule in :mod:`nmsolve.learners`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from .errors import ConfigError, DimensionError
from .learners import (
    MORM_PLUS,
    RM,
    RM_PLUS,
    RegretMatcherState,
    _matched_strategy,
    regret_matcher_step,
)
from .nfg import SimplexStrategy, instantaneous_regret
from .treeplex import Treeplex, counterfactual_values

PCFR_PLUS = "pcfr+"

LOCAL_RULES = (RM, RM_PLUS, MORM_PLUS, PCFR_PLUS)


@dataclass
class PredictiveMatcherState(RegretMatcherState):
    """RM+ state that also remembers the last observed instantaneous regret."""

    prediction: Optional[np.ndarray] = None

    def __post_init__(self):
        super().__post_init__()
        if self.prediction is None:
            self.prediction = np.zeros(self.dim)


def pcfr_plus_local(state: PredictiveMatcherState, r) -> SimplexStrategy:
    """Predictive RM+ with the last regret standing in for the next one.

    R <- [R + r]^+ and the strategy is matched from [R + r]^+ again,
    treating r as the prediction; a zero prediction reduces to RM+.
    """
    r = np.asarray(r, dtype=np.float64)
    if r.shape != state.R.shape:
        raise DimensionError(f"regret {r.shape} vs state {state.R.shape}")
    state.R = np.maximum(state.R + r, 0.0)
    state.prediction = r
    state.t += 1
    return _matched_strategy(np.maximum(state.R + state.prediction, 0.0))


@dataclass
class LocalRegretBank:
    """One matcher per decision point plus the current behavior profile."""

    treeplex: Treeplex
    rule: str
    states: List[RegretMatcherState]
    current: List[SimplexStrategy]

    @property
    def predictive(self) -> bool:
        return self.rule == PCFR_PLUS


def make_bank(
    treeplex: Treeplex, rule: str, beta: float = 0.0, k: Optional[int] = None
) -> LocalRegretBank:
    if rule not in LOCAL_RULES:
        raise ConfigError(f"unknown local regret rule {rule!r}")
    states: List[RegretMatcherState] = []
    for j in range(treeplex.num_decision_points):
        dim = int(treeplex.n[j])
        if rule == PCFR_PLUS:
            states.append(PredictiveMatcherState(dim, RM_PLUS))
        else:
            states.append(RegretMatcherState(dim, rule, beta=beta, k=k))
    current = [SimplexStrategy.uniform(int(n)) for n in treeplex.n]
    return LocalRegretBank(treeplex, rule, states, current)


def cfr_iteration(
    bank: LocalRegretBank, treeplex: Treeplex, loss
) -> List[SimplexStrategy]:
    """Advance every local matcher one round against a sequence loss."""
    if treeplex is not bank.treeplex:
        raise ConfigError("regret bank was built for a different treeplex")
    cf = counterfactual_values(treeplex, loss, bank.current)
    nxt: List[SimplexStrategy] = []
    for j, state in enumerate(bank.states):
        local_loss = cf.per_decision_point[j]
        if bank.predictive:
            r = instantaneous_regret(bank.current[j].probs, local_loss)
            nxt.append(pcfr_plus_local(state, r))
        else:
            nxt.append(regret_matcher_step(state, local_loss, bank.current[j].probs))
    bank.current = nxt
    return nxt


def bank_regret_bound(bank: LocalRegretBank) -> float:
    """Sum over decision points of the clipped best local regret.

    Upper-bounds the owner's sequence-form external regret; the bound is
    what makes the decomposition sound.
    """
    return float(sum(max(float(np.max(s.R)), 0.0) for s in bank.states))
