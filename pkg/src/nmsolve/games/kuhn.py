"""Three-card poker with a one-bet betting round.

Cards 0 < 1 < 2, one dealt to each player (six ordered deals, uniform).
Both players ante 1.  Player 1 checks or bets 1; after a check player 2
may check (showdown for the antes) or bet, after which player 1 folds or
calls; after a bet player 2 folds or calls.  Calls lead to a showdown
for the pot of 2 per player.
"""

from __future__ import annotations

from itertools import permutations

from .tree import Chance, Decision, EfgBundle, Terminal, compile_bundle


def _showdown(c1: int, c2: int, stake: int) -> Terminal:
    return Terminal(p1_payoff=stake if c1 > c2 else -stake)


def _deal_subtree(c1: int, c2: int):
    p1_fold_after_bet = Terminal(p1_payoff=-1.0)
    p2_fold = Terminal(p1_payoff=1.0)

    p1_facing_bet = Decision(
        player=0,
        infoset=(c1, "cb"),
        actions=(p1_fold_after_bet, _showdown(c1, c2, 2)),  # fold, call
    )
    p2_after_check = Decision(
        player=1,
        infoset=(c2, "c"),
        actions=(_showdown(c1, c2, 1), p1_facing_bet),  # check, bet
    )
    p2_after_bet = Decision(
        player=1,
        infoset=(c2, "b"),
        actions=(p2_fold, _showdown(c1, c2, 2)),  # fold, call
    )
    return Decision(
        player=0,
        infoset=(c1, ""),
        actions=(p2_after_check, p2_after_bet),  # check, bet
    )


def kuhn_tree():
    deals = list(permutations(range(3), 2))
    return Chance(
        outcomes=tuple(
            (1.0 / len(deals), _deal_subtree(c1, c2)) for c1, c2 in deals
        )
    )


def kuhn_poker() -> EfgBundle:
    return compile_bundle(kuhn_tree(), "kuhn")
