"""Explicit game trees and their compilation to sequence form.

Games are described as trees of Chance / Decision / Terminal nodes with
payoffs stated for player 1.  Compilation interns each player's
information sets in depth-first order, checks perfect recall (an
information set must always be entered through the same own-action
sequence), folds chance probabilities into the leaf payoffs, and returns
an EfgBundle holding one treeplex per player plus the sparse bilinear
payoff.  Payoff entries are costs to player 1: the x-player minimizes
x'Gy, so the conventional game value for player 1 is the negated
bilinear value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, List, Optional, Sequence, Tuple, Union

from ..errors import InvalidGame, PerfectRecallViolation
from ..treeplex import SparsePayoff, Treeplex


@dataclass(frozen=True)
class Terminal:
    p1_payoff: float


@dataclass(frozen=True)
class Chance:
    outcomes: Tuple[Tuple[float, "Node"], ...]


@dataclass(frozen=True)
class Decision:
    player: int  # 0 = player 1 (minimizer x), 1 = player 2 (maximizer y)
    infoset: Hashable
    actions: Tuple["Node", ...]


Node = Union[Terminal, Chance, Decision]


@dataclass(frozen=True)
class EfgBundle:
    treeplex_x: Treeplex
    treeplex_y: Treeplex
    payoff: SparsePayoff
    name: str
    payoff_scale: float
    infoset_keys_x: Tuple[Hashable, ...]
    infoset_keys_y: Tuple[Hashable, ...]
    normalized: bool = False

    def normalized_copy(self) -> "EfgBundle":
        """Same game with leaf payoffs rescaled into [-1, 1]."""
        if self.normalized or self.payoff_scale == 0:
            return self
        return EfgBundle(
            treeplex_x=self.treeplex_x,
            treeplex_y=self.treeplex_y,
            payoff=self.payoff.scaled(1.0 / self.payoff_scale),
            name=self.name,
            payoff_scale=self.payoff_scale,
            infoset_keys_x=self.infoset_keys_x,
            infoset_keys_y=self.infoset_keys_y,
            normalized=True,
        )

    def to_text(self) -> str:
        lines = [
            f"game {self.name}",
            "scale %.17g" % self.payoff_scale,
        ]
        return (
            "\n".join(lines)
            + "\n"
            + self.treeplex_x.to_text()
            + self.treeplex_y.to_text()
            + self.payoff.to_text()
        )


class _PlayerInterner:
    """Per-player infoset table built up during the tree walk."""

    def __init__(self, player: int):
        self.player = player
        self.index = {}
        self.keys: List[Hashable] = []
        self.action_counts: List[int] = []
        self.parent: List[Optional[Tuple[int, int]]] = []

    def visit(self, key: Hashable, n_actions: int, last: Optional[Tuple[int, int]]) -> int:
        j = self.index.get(key)
        if j is None:
            j = len(self.keys)
            self.index[key] = j
            self.keys.append(key)
            self.action_counts.append(n_actions)
            self.parent.append(last)
            return j
        if self.action_counts[j] != n_actions:
            raise InvalidGame(
                f"infoset {key!r} visited with {n_actions} actions, "
                f"previously {self.action_counts[j]}"
            )
        if self.parent[j] != last:
            raise PerfectRecallViolation(
                f"infoset {key!r} reached through different own histories"
            )
        return j

    def build_treeplex(self) -> Treeplex:
        if not self.keys:
            raise InvalidGame(f"player {self.player} never acts")
        children = {}
        for j, p in enumerate(self.parent):
            if p is not None:
                children.setdefault(p, []).append(j)
        return Treeplex(self.action_counts, children)


def compile_bundle(root: Node, name: str) -> EfgBundle:
    """Walk the tree, validate it, and assemble the sequence-form bundle."""
    interners = (_PlayerInterner(0), _PlayerInterner(1))
    # terminal records: (last own (j, a) per player or None, chance reach, cost)
    leaves: List[Tuple[Optional[Tuple[int, int]], Optional[Tuple[int, int]], float, float]] = []
    scale = 0.0

    stack = [(root, None, None, 1.0)]
    while stack:
        node, last_x, last_y, reach = stack.pop()
        if isinstance(node, Terminal):
            leaves.append((last_x, last_y, reach, -float(node.p1_payoff)))
            scale = max(scale, abs(float(node.p1_payoff)))
        elif isinstance(node, Chance):
            total = sum(p for p, _ in node.outcomes)
            if abs(total - 1.0) > 1e-9 or any(p < 0 for p, _ in node.outcomes):
                raise InvalidGame("chance probabilities must be a distribution")
            for p, child in node.outcomes:
                if p > 0.0:
                    stack.append((child, last_x, last_y, reach * p))
        elif isinstance(node, Decision):
            if node.player not in (0, 1):
                raise InvalidGame(f"unknown player {node.player}")
            if len(node.actions) < 1:
                raise InvalidGame(f"infoset {node.infoset!r} has no actions")
            interner = interners[node.player]
            last = last_x if node.player == 0 else last_y
            j = interner.visit(node.infoset, len(node.actions), last)
            for a, child in enumerate(node.actions):
                if node.player == 0:
                    stack.append((child, (j, a), last_y, reach))
                else:
                    stack.append((child, last_x, (j, a), reach))
        else:
            raise InvalidGame(f"unknown node type {type(node).__name__}")

    tx = interners[0].build_treeplex()
    ty = interners[1].build_treeplex()

    def seq(t: Treeplex, last: Optional[Tuple[int, int]]) -> int:
        return 0 if last is None else t.seq_id(last[0], last[1])

    entries = [
        (seq(tx, lx), seq(ty, ly), reach * cost)
        for lx, ly, reach, cost in leaves
    ]
    payoff = SparsePayoff(tx.seq_count, ty.seq_count, entries)
    return EfgBundle(
        treeplex_x=tx,
        treeplex_y=ty,
        payoff=payoff,
        name=name,
        payoff_scale=scale,
        infoset_keys_x=tuple(interners[0].keys),
        infoset_keys_y=tuple(interners[1].keys),
    )


def swap_players(bundle: EfgBundle) -> EfgBundle:
    """Negate and transpose the payoff, exchanging the two roles."""
    transposed = SparsePayoff(
        bundle.payoff.shape[1],
        bundle.payoff.shape[0],
        zip(bundle.payoff.cols, bundle.payoff.rows, -bundle.payoff.vals),
    )
    return EfgBundle(
        treeplex_x=bundle.treeplex_y,
        treeplex_y=bundle.treeplex_x,
        payoff=transposed,
        name=bundle.name + "-swapped",
        payoff_scale=bundle.payoff_scale,
        infoset_keys_x=bundle.infoset_keys_y,
        infoset_keys_y=bundle.infoset_keys_x,
        normalized=bundle.normalized,
    )
