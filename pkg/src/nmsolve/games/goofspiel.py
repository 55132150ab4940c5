"""Bidding game over a fixed descending prize deck.

Each player holds bid cards 1..R; the prize deck pays R, R-1, ..., 1 in
that order.  Every round both players secretly commit one card; the
higher card takes the prize and a tie splits it.  The simultaneous move
is encoded sequentially with information hiding: player 2's information
set never includes player 1's current-round card.  With full information
past bids become public after each round; the limited variant reveals
only each round's win/lose/tie outcome.  The last round is forced (one
card each) and is folded straight into the terminal payoff, which is the
sign of the final score difference (+1 / -1, ties worth 0).
"""

from __future__ import annotations

from .tree import Chance, Decision, EfgBundle, Terminal, compile_bundle
from ..errors import ConfigError


def _sign(d: float) -> float:
    return 1.0 if d > 0 else (-1.0 if d < 0 else 0.0)


def _round_result(prize: int, c1: int, c2: int):
    """Score increments and per-player outcome codes for one round."""
    if c1 > c2:
        return prize, 0.0, 1, -1
    if c2 > c1:
        return 0.0, prize, -1, 1
    return prize / 2.0, prize / 2.0, 0, 0


def _build(ranks, limited, h1, h2, o1, o2, s1, s2, rnd):
    remaining1 = tuple(c for c in range(1, ranks + 1) if c not in h1)
    remaining2 = tuple(c for c in range(1, ranks + 1) if c not in h2)
    prize = ranks - rnd
    if len(remaining1) == 1:
        # forced last plays decide the game
        d1, d2, _, _ = _round_result(prize, remaining1[0], remaining2[0])
        return Terminal(p1_payoff=_sign((s1 + d1) - (s2 + d2)))

    def p2_subtree(c1):
        actions = []
        for c2 in remaining2:
            d1, d2, r1, r2 = _round_result(prize, c1, c2)
            actions.append(
                _build(
                    ranks, limited,
                    h1 + (c1,), h2 + (c2,),
                    o1 + ((r1,) if limited else (c2,)),
                    o2 + ((r2,) if limited else (c1,)),
                    s1 + d1, s2 + d2, rnd + 1,
                )
            )
        return Decision(player=1, infoset=(h2, o2), actions=tuple(actions))

    return Decision(
        player=0,
        infoset=(h1, o1),
        actions=tuple(p2_subtree(c1) for c1 in remaining1),
    )


def goofspiel_tree(ranks: int, limited_info: bool = False):
    if ranks not in (4, 5):
        raise ConfigError(f"supported rank counts are 4 and 5, got {ranks}")
    return _build(ranks, limited_info, (), (), (), (), 0.0, 0.0, 0)


def goofspiel(ranks: int, limited_info: bool = False) -> EfgBundle:
    suffix = "-limited" if limited_info else ""
    return compile_bundle(
        goofspiel_tree(ranks, limited_info), f"goofspiel{ranks}{suffix}"
    )
