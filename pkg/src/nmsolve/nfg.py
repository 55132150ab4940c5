"""Normal-form zero-sum games on the simplex.

A game is a payoff matrix G for the bilinear problem min_x max_y x'Gy with
both players restricted to probability simplices.  The x-player pays x'Gy,
so their loss field is G y and the y-player's gain field is G'x.  Best
responses over a simplex are attained at vertices, which makes the duality
gap (exploitability) exact: gap = max(G'x) - min(Gy).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, EmptyHistory, InvalidGame, InvalidInput
from .rng import Xoshiro256StarStar


@dataclass(frozen=True)
class MatrixGame:
    payoff: np.ndarray
    normalized: bool = False

    @property
    def rows(self) -> int:
        return self.payoff.shape[0]

    @property
    def cols(self) -> int:
        return self.payoff.shape[1]


def make_matrix_game(entries, normalize: bool = False) -> MatrixGame:
    """Build a MatrixGame, optionally rescaling entries into [-1, 1].

    Normalization divides by the max absolute entry (a no-op for the zero
    matrix), which preserves best-response structure.
    """
    G = np.array(entries, dtype=np.float64)
    if G.ndim != 2 or G.size == 0:
        raise InvalidGame("payoff matrix must be 2-d and nonempty")
    if not np.all(np.isfinite(G)):
        raise InvalidGame("payoff matrix has non-finite entries")
    if normalize:
        scale = np.max(np.abs(G))
        if scale > 0.0:
            G = G / scale
    G.setflags(write=False)
    return MatrixGame(payoff=G, normalized=normalize)


class SimplexStrategy:
    """Point on a probability simplex; renormalized exactly on construction."""

    __slots__ = ("probs",)

    def __init__(self, probs):
        p = np.array(probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise InvalidInput("strategy must have at least one entry")
        if not np.all(np.isfinite(p)):
            raise InvalidInput("strategy has non-finite entries")
        if np.any(p < 0.0):
            raise InvalidInput("strategy has negative entries")
        total = p.sum()
        if total <= 0.0:
            raise InvalidInput("strategy must have positive mass")
        p = p / total
        p.setflags(write=False)
        self.probs = p

    @classmethod
    def uniform(cls, d: int) -> "SimplexStrategy":
        return cls(np.full(d, 1.0 / d))

    @classmethod
    def vertex(cls, d: int, i: int) -> "SimplexStrategy":
        p = np.zeros(d)
        p[i] = 1.0
        return cls(p)

    def __len__(self) -> int:
        return self.probs.size

    def __repr__(self) -> str:
        return f"SimplexStrategy({self.probs.tolist()})"


def as_probs(strategy) -> np.ndarray:
    """Accept a SimplexStrategy or a bare probability vector."""
    if isinstance(strategy, SimplexStrategy):
        return strategy.probs
    return np.asarray(strategy, dtype=np.float64)


@dataclass(frozen=True)
class JointLoss:
    f: np.ndarray  # loss field for the x-player, G y
    g: np.ndarray  # gain field for the y-player, G' x


def joint_loss(game: MatrixGame, x, y) -> JointLoss:
    xp, yp = as_probs(x), as_probs(y)
    if xp.size != game.rows or yp.size != game.cols:
        raise DimensionError(
            f"strategies ({xp.size},{yp.size}) do not match game "
            f"({game.rows},{game.cols})"
        )
    return JointLoss(f=game.payoff @ yp, g=game.payoff.T @ xp)


def duality_gap(game: MatrixGame, x, y) -> float:
    """Exploitability max_y' x'Gy' - min_x' x''Gy via vertex enumeration."""
    jl = joint_loss(game, x, y)
    return float(np.max(jl.g) - np.min(jl.f))


def instantaneous_regret(strategy, loss) -> np.ndarray:
    """r(x) = <x, l> 1 - l; always orthogonal to x."""
    p = as_probs(strategy)
    l = np.asarray(loss, dtype=np.float64)
    if p.shape != l.shape:
        raise DimensionError(f"strategy {p.shape} vs loss {l.shape}")
    return np.dot(p, l) - l


@dataclass
class RegretLedger:
    """Paired (loss, play) history for external-regret accounting."""

    loss_history: list = field(default_factory=list)
    play_history: list = field(default_factory=list)

    def append(self, loss, play) -> None:
        l = np.asarray(loss, dtype=np.float64)
        p = as_probs(play)
        if l.shape != p.shape:
            raise DimensionError(f"loss {l.shape} vs play {p.shape}")
        self.loss_history.append(l)
        self.play_history.append(p)

    def __len__(self) -> int:
        return len(self.loss_history)


def external_regret(ledger: RegretLedger) -> float:
    """Realized cumulative loss minus the best fixed vertex in hindsight."""
    if len(ledger) == 0:
        raise EmptyHistory("regret of an empty history is undefined")
    realized = sum(
        float(np.dot(l, p))
        for l, p in zip(ledger.loss_history, ledger.play_history)
    )
    total_loss = np.sum(ledger.loss_history, axis=0)
    return realized - float(np.min(total_loss))


def random_nfg(seed: int, m: int, n: int) -> MatrixGame:
    """Random zero-sum game with i.i.d. standard-Gaussian entries.

    Entries come from the documented xoshiro256** / Box-Muller stream in
    :mod:`nmsolve.rng`, filled row-major, then rescaled so max |entry| = 1.
    Identical (seed, m, n) gives a bit-identical matrix on every platform.
    """
    if m < 1 or n < 1:
        raise InvalidGame("matrix dimensions must be positive")
    gen = Xoshiro256StarStar(seed)
    G = np.empty((m, n), dtype=np.float64)
    flat = G.reshape(-1)
    for i in range(m * n):
        flat[i] = gen.next_gaussian()
    scale = np.max(np.abs(G))
    if scale > 0.0:
        G /= scale
    G.setflags(write=False)
    return MatrixGame(payoff=G, normalized=True)


def save_matrix_csv(game: MatrixGame, path) -> None:
    """Write `# matrix M N` then one CSV row per matrix row (17 sig digits)."""
    with open(path, "w") as fh:
        fh.write(f"# matrix {game.rows} {game.cols}\n")
        for row in game.payoff:
            fh.write(",".join("%.17g" % v for v in row) + "\n")


def load_matrix_csv(path) -> MatrixGame:
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 4 or header[:2] != ["#", "matrix"]:
            raise InvalidGame(f"{path}: expected '# matrix M N' header")
        m, n = int(header[2]), int(header[3])
        rows = [
            [float(v) for v in line.split(",")]
            for line in fh
            if line.strip()
        ]
    G = np.array(rows, dtype=np.float64)
    if G.shape != (m, n):
        raise InvalidGame(f"{path}: header says {m}x{n}, body is {G.shape}")
    return make_matrix_game(G)
