"""One solve loop for every learner, plus convergence logging.

Matrix games and sequence-form bundles share the loop shape: each
iteration the x side sees G y as its loss and the y side sees -G'x.
Alternating mode updates x first and lets y react to the refreshed x;
simultaneous mode feeds both sides the stale pair. Exploitability of
the configured average is recorded every eval_every iterations.

Algorithm names double as registry keys. On bundles the mirror-family
names resolve to their dilated counterparts; regret-matching names
resolve to one local matcher per decision point.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import List, Optional, Union

import numpy as np

from .cfr import (
    PCFR_PLUS,
    PredictiveMatcherState,
    cfr_iteration,
    make_bank,
    pcfr_plus_local,
)
from .dilated import DilatedDGF, dilated_prox, dmomd_step
from .errors import ConfigError, InvalidInput
from .games.tree import EfgBundle
from .learners import (
    AVERAGING_SCHEMES,
    ENTROPY,
    L2,
    LAST_ITERATE,
    LINEAR,
    MORM_PLUS,
    QUADRATIC,
    RM,
    RM_PLUS,
    UNIFORM,
    OptimisticState,
    ProxSetup,
    RegretMatcherState,
    local_prox,
    moftrl_step,
    momd_step,
    optimistic_step,
    regret_matcher_step,
)
from .momentum import (
    CumulativeLossState,
    MomentumState,
    attachment_loss_update,
    coerce_interval,
    ram_momentum_update,
)
from .nfg import MatrixGame, SimplexStrategy, duality_gap, instantaneous_regret
from .treeplex import (
    SequenceFormStrategy,
    behavior_to_sequence,
    efg_exploitability,
    uniform_behavior,
)

MATCHER = "matcher"
MIRROR = "mirror"
OPTIMISTIC = "optimistic"
MOMENTUM = "momentum"
FTRL = "ftrl"
BANK = "bank"
DILATED_MIRROR = "dilated-mirror"
DILATED_OPTIMISTIC = "dilated-optimistic"
DILATED_MOMENTUM = "dilated-momentum"

MATRIX_ALGORITHMS = {
    "rm": (MATCHER, RM),
    "rm+": (MATCHER, RM_PLUS),
    "morm+": (MATCHER, MORM_PLUS),
    "pcfr+": (MATCHER, PCFR_PLUS),
    "mwu": (MIRROR, ENTROPY),
    "gda": (MIRROR, L2),
    "omwu": (OPTIMISTIC, ENTROPY),
    "ogda": (OPTIMISTIC, L2),
    "momwu": (MOMENTUM, ENTROPY),
    "mogda": (MOMENTUM, L2),
    "moftrl": (FTRL, ENTROPY),
    "moftrl-l2": (FTRL, L2),
}

EFG_ALGORITHMS = {
    "cfr": (BANK, RM),
    "cfr+": (BANK, RM_PLUS),
    "mocfr+": (BANK, MORM_PLUS),
    "pcfr+": (BANK, PCFR_PLUS),
    "mwu": (DILATED_MIRROR, ENTROPY),
    "gda": (DILATED_MIRROR, L2),
    "omwu": (DILATED_OPTIMISTIC, ENTROPY),
    "ogda": (DILATED_OPTIMISTIC, L2),
    "dmomwu": (DILATED_MOMENTUM, ENTROPY),
    "dmogda": (DILATED_MOMENTUM, L2),
}

# algorithms that actually consume the momentum and step-size knobs;
# anything else records them as ignored
MOMENTUM_ALGORITHMS = frozenset(
    {"morm+", "momwu", "mogda", "moftrl", "moftrl-l2", "mocfr+", "dmomwu", "dmogda"}
)
ETA_FREE_ALGORITHMS = frozenset({"rm", "rm+", "morm+", "pcfr+", "cfr", "cfr+", "mocfr+"})

DEFAULT_AVERAGING = {
    "rm": UNIFORM,
    "cfr": UNIFORM,
    "mwu": UNIFORM,
    "gda": UNIFORM,
    "rm+": LINEAR,
    "cfr+": LINEAR,
    "pcfr+": QUADRATIC,
}
# momentum and optimistic variants are judged on the current iterate
for _name in ("morm+", "momwu", "mogda", "moftrl", "moftrl-l2", "mocfr+",
              "dmomwu", "dmogda", "omwu", "ogda"):
    DEFAULT_AVERAGING[_name] = LAST_ITERATE


@dataclass
class SolveConfig:
    algorithm: str
    iterations: int
    eta: Optional[float] = None
    beta: float = 0.0
    k: Optional[int] = None
    alternating: bool = False
    averaging: Optional[str] = None
    eval_every: Optional[int] = None
    seed: int = 0

    def __post_init__(self):
        if self.iterations < 1:
            raise ConfigError("iterations must be at least 1")
        try:
            self.k = coerce_interval(self.k)
        except InvalidInput as bad:
            raise ConfigError(str(bad))
        if self.averaging is not None and self.averaging not in AVERAGING_SCHEMES:
            raise ConfigError(f"unknown averaging scheme {self.averaging!r}")
        if self.eval_every is not None and self.eval_every < 1:
            raise ConfigError("eval_every must be at least 1")
        if self.eta is not None and self.eta <= 0:
            raise ConfigError("eta must be positive")

    def uses_momentum(self) -> bool:
        return self.algorithm in MOMENTUM_ALGORITHMS

    def uses_eta(self) -> bool:
        return self.algorithm not in ETA_FREE_ALGORITHMS


@dataclass
class ConvergenceLog:
    game: str
    algorithm: str
    config: SolveConfig
    seed: int
    iterations: List[int] = field(default_factory=list)
    exploitability: List[float] = field(default_factory=list)
    wall_ms: List[float] = field(default_factory=list)

    def append(self, iteration: int, gap: float, ms: float) -> None:
        if self.iterations and iteration <= self.iterations[-1]:
            raise InvalidInput("log iterations must be strictly increasing")
        if gap < -1e-12:
            raise InvalidInput(f"exploitability {gap} below tolerance floor")
        self.iterations.append(int(iteration))
        self.exploitability.append(float(gap))
        self.wall_ms.append(float(ms))

    def metadata_lines(self) -> List[str]:
        cfg = self.config
        eta = "%.17g" % cfg.eta if cfg.uses_eta() and cfg.eta is not None else "ignored"
        if cfg.uses_momentum():
            beta = "%.17g" % cfg.beta
            k = "inf" if cfg.k is None else str(cfg.k)
        else:
            beta, k = "ignored", "ignored"
        averaging = cfg.averaging if cfg.averaging is not None else "default"
        return [
            f"# game {self.game}",
            f"# algorithm {self.algorithm}",
            f"# eta {eta}",
            f"# beta {beta}",
            f"# k {k}",
            f"# alternating {str(cfg.alternating).lower()}",
            f"# averaging {averaging}",
            f"# seed {self.seed}",
        ]

    def to_csv(self) -> str:
        lines = self.metadata_lines()
        lines.append("iteration,exploitability,wall_ms")
        for it, gap, ms in zip(self.iterations, self.exploitability, self.wall_ms):
            lines.append("%d,%.17g,%.3f" % (it, gap, ms))
        return "\n".join(lines) + "\n"

    def save(self, path) -> None:
        with open(path, "w") as f:
            f.write(self.to_csv())


def _resolve(config: SolveConfig, table, kind: str):
    try:
        family, reg = table[config.algorithm]
    except KeyError:
        raise ConfigError(
            f"algorithm {config.algorithm!r} is not available for {kind} games"
        )
    if config.uses_eta() and config.eta is None:
        raise ConfigError(f"algorithm {config.algorithm!r} requires eta")
    averaging = config.averaging or DEFAULT_AVERAGING[config.algorithm]
    return family, reg, averaging


def _scheme_weight(scheme: str, t: int) -> float:
    if scheme == UNIFORM:
        return 1.0
    if scheme == LINEAR:
        return float(t)
    return float(t) ** 2


class _MatcherLearner:
    def __init__(self, dim: int, mode: str, config: SolveConfig):
        if mode == PCFR_PLUS:
            self.state = PredictiveMatcherState(dim, RM_PLUS)
        else:
            self.state = RegretMatcherState(
                dim, mode, beta=config.beta, k=config.k
            )
        self.predictive = mode == PCFR_PLUS
        self.probs = SimplexStrategy.uniform(dim).probs

    def step(self, loss) -> None:
        if self.predictive:
            r = instantaneous_regret(self.probs, np.asarray(loss, dtype=np.float64))
            self.probs = pcfr_plus_local(self.state, r).probs
        else:
            self.probs = regret_matcher_step(self.state, loss, self.probs).probs


class _MirrorLearner:
    def __init__(self, dim: int, family: str, reg: str, config: SolveConfig):
        self.family = family
        self.setup = ProxSetup(config.eta, reg)
        self.probs = SimplexStrategy.uniform(dim).probs
        self.opt = OptimisticState(SimplexStrategy.uniform(dim))
        self.ram = MomentumState(config.beta, config.k)
        self.cumulative = CumulativeLossState(config.beta, config.k)

    def step(self, loss) -> None:
        if self.family == MIRROR:
            self.probs = local_prox(self.probs, loss, self.setup).probs
        elif self.family == OPTIMISTIC:
            self.probs = optimistic_step(self.opt, loss, self.setup).probs
        elif self.family == MOMENTUM:
            mu = ram_momentum_update(self.ram, loss)
            self.probs = momd_step(self.probs, mu, self.setup).probs
        else:
            attachment_loss_update(self.cumulative, loss)
            self.probs = moftrl_step(self.cumulative, self.setup).probs


def _matrix_learner(dim: int, family: str, reg: str, config: SolveConfig):
    if family == MATCHER:
        return _MatcherLearner(dim, reg, config)
    return _MirrorLearner(dim, family, reg, config)


class _BankPlayer:
    def __init__(self, treeplex, rule: str, config: SolveConfig):
        self.treeplex = treeplex
        self.bank = make_bank(treeplex, rule, beta=config.beta, k=config.k)

    def step(self, loss) -> None:
        cfr_iteration(self.bank, self.treeplex, loss)

    def sequence(self) -> SequenceFormStrategy:
        return behavior_to_sequence(self.treeplex, self.bank.current)


class _DilatedPlayer:
    def __init__(self, treeplex, family: str, reg: str, config: SolveConfig):
        self.treeplex = treeplex
        self.family = family
        self.eta = config.eta
        self.dgf = DilatedDGF(reg)
        self.z = behavior_to_sequence(treeplex, uniform_behavior(treeplex))
        self.prev_loss: Optional[np.ndarray] = None
        self.ram = MomentumState(config.beta, config.k)

    def step(self, loss) -> None:
        l = np.asarray(loss, dtype=np.float64)
        if self.family == DILATED_MOMENTUM:
            mu = ram_momentum_update(self.ram, l)
            self.z = dmomd_step(self.treeplex, self.z, mu, self.eta, self.dgf)
        elif self.family == DILATED_OPTIMISTIC:
            prev = self.prev_loss if self.prev_loss is not None else np.zeros_like(l)
            self.z = dilated_prox(
                self.treeplex, self.z, 2.0 * l - prev, self.eta, self.dgf
            )
            self.prev_loss = l
        else:
            self.z = dilated_prox(self.treeplex, self.z, l, self.eta, self.dgf)

    def sequence(self) -> SequenceFormStrategy:
        return self.z


def run_solver(
    game: Union[MatrixGame, EfgBundle],
    config: SolveConfig,
    game_name: Optional[str] = None,
) -> ConvergenceLog:
    """Run one configured solver and log exploitability checkpoints."""
    if isinstance(game, MatrixGame):
        return _run_matrix(game, config, game_name or "matrix")
    if isinstance(game, EfgBundle):
        return _run_efg(game, config, game_name or game.name)
    raise ConfigError(f"cannot solve objects of type {type(game).__name__}")


def _run_matrix(game: MatrixGame, config: SolveConfig, name: str) -> ConvergenceLog:
    family, reg, averaging = _resolve(config, MATRIX_ALGORITHMS, "matrix")
    eval_every = config.eval_every or 1
    G = game.payoff
    x = _matrix_learner(G.shape[0], family, reg, config)
    y = _matrix_learner(G.shape[1], family, reg, config)
    acc_x = np.zeros(G.shape[0])
    acc_y = np.zeros(G.shape[1])
    weight_total = 0.0
    log = ConvergenceLog(name, config.algorithm, config, config.seed)
    start = time.monotonic()
    for t in range(1, config.iterations + 1):
        if config.alternating:
            x.step(G @ y.probs)
            y.step(-(G.T @ x.probs))
        else:
            loss_x = G @ y.probs
            loss_y = -(G.T @ x.probs)
            x.step(loss_x)
            y.step(loss_y)
        if averaging != LAST_ITERATE:
            w = _scheme_weight(averaging, t)
            acc_x += w * x.probs
            acc_y += w * y.probs
            weight_total += w
        if t % eval_every == 0:
            if averaging == LAST_ITERATE:
                ax, ay = x.probs, y.probs
            else:
                ax, ay = acc_x / weight_total, acc_y / weight_total
            ms = (time.monotonic() - start) * 1000.0
            log.append(t, duality_gap(game, ax, ay), ms)
    return log


def _run_efg(bundle: EfgBundle, config: SolveConfig, name: str) -> ConvergenceLog:
    family, reg, averaging = _resolve(config, EFG_ALGORITHMS, "sequence-form")
    eval_every = config.eval_every or 10
    tx, ty, payoff = bundle.treeplex_x, bundle.treeplex_y, bundle.payoff
    if family == BANK:
        px, py = _BankPlayer(tx, reg, config), _BankPlayer(ty, reg, config)
    else:
        px = _DilatedPlayer(tx, family, reg, config)
        py = _DilatedPlayer(ty, family, reg, config)
    xs, ys = px.sequence(), py.sequence()
    acc_x = np.zeros(tx.seq_count)
    acc_y = np.zeros(ty.seq_count)
    weight_total = 0.0
    log = ConvergenceLog(name, config.algorithm, config, config.seed)
    start = time.monotonic()
    for t in range(1, config.iterations + 1):
        if config.alternating:
            px.step(payoff.loss_x(ys.values))
            xs = px.sequence()
            py.step(-payoff.gain_y(xs.values))
            ys = py.sequence()
        else:
            loss_x = payoff.loss_x(ys.values)
            loss_y = -payoff.gain_y(xs.values)
            px.step(loss_x)
            py.step(loss_y)
            xs, ys = px.sequence(), py.sequence()
        if averaging != LAST_ITERATE:
            w = _scheme_weight(averaging, t)
            acc_x += w * xs.values
            acc_y += w * ys.values
            weight_total += w
        if t % eval_every == 0:
            if averaging == LAST_ITERATE:
                ax, ay = xs, ys
            else:
                ax = SequenceFormStrategy(tx, acc_x / weight_total)
                ay = SequenceFormStrategy(ty, acc_y / weight_total)
            ms = (time.monotonic() - start) * 1000.0
            log.append(t, efg_exploitability(payoff, tx, ty, ax, ay), ms)
    return log
