"""Two-round hold'em on a six-card deck (ranks 0 < 1 < 2, two suits each).

Both players ante 1 and receive one private card; a public card comes
out between the rounds.  Player 1 acts first in both rounds.  Each round
allows at most two bets (the initial bet plus one raise); the bet size
is 1 in the first round and 2 in the second.  A paired private and
public card wins the showdown, otherwise the higher rank does; equal
ranks split the pot.  Information sets are keyed by the player's private
card, the public card (once dealt), and the full betting line, so the
pot size is always common knowledge.
"""

from __future__ import annotations

from .tree import Chance, Decision, EfgBundle, Terminal, compile_bundle

RANKS = (0, 0, 1, 1, 2, 2)  # card id -> rank
BET_SIZE = (1, 2)  # per betting round


def _winner(c1: int, c2: int, public: int) -> float:
    """+1 if player 1's hand wins, -1 if it loses, 0 on a split."""
    r1, r2, rp = RANKS[c1], RANKS[c2], RANKS[public]
    if r1 == rp and r2 != rp:
        return 1.0
    if r2 == rp and r1 != rp:
        return -1.0
    if r1 != r2:
        return 1.0 if r1 > r2 else -1.0
    return 0.0


def _fold_payoff(folder: int, cont) -> Terminal:
    # the folder forfeits their own contribution to the opponent
    lost = cont[folder]
    return Terminal(p1_payoff=float(lost) if folder == 1 else -float(lost))


def _betting_round(cards, public, rnd, to_act, checked, bets, cont, line, after):
    """Decision subtree for one betting round.

    `line` is the full betting line so far (both rounds); `after(cont,
    line)` continues the game when the round closes without a fold.
    """
    size = BET_SIZE[rnd]
    me, opp = to_act, 1 - to_act
    key = (cards[me], public, line)

    actions = []
    if bets == 0:
        if checked:
            actions.append(after(cont, line + "k"))  # check behind
        else:
            actions.append(
                _betting_round(
                    cards, public, rnd, opp, True, 0, cont, line + "k", after
                )
            )
        bet_cont = list(cont)
        bet_cont[me] = cont[opp] + size
        actions.append(
            _betting_round(
                cards, public, rnd, opp, False, 1, tuple(bet_cont),
                line + "b", after,
            )
        )
    else:
        actions.append(_fold_payoff(me, cont))
        call_cont = list(cont)
        call_cont[me] = cont[opp]
        actions.append(after(tuple(call_cont), line + "c"))
        if bets < 2:
            raise_cont = list(cont)
            raise_cont[me] = cont[opp] + size
            actions.append(
                _betting_round(
                    cards, public, rnd, opp, False, bets + 1,
                    tuple(raise_cont), line + "r", after,
                )
            )
    return Decision(player=me, infoset=key, actions=tuple(actions))


def _deal_subtree(c1: int, c2: int):
    cards = (c1, c2)
    remaining = [c for c in range(6) if c not in cards]

    def after_round_one(cont, line):
        outcomes = []
        for public in remaining:
            def showdown(final_cont, _line, c1=c1, c2=c2, public=public):
                sign = _winner(c1, c2, public)
                return Terminal(p1_payoff=sign * float(final_cont[0]))

            sub = _betting_round(
                cards, public, 1, 0, False, 0, cont, line + "/", showdown
            )
            outcomes.append((1.0 / len(remaining), sub))
        return Chance(outcomes=tuple(outcomes))

    return _betting_round(
        cards, None, 0, 0, False, 0, (1, 1), "", after_round_one
    )


def leduc_tree():
    deals = [(a, b) for a in range(6) for b in range(6) if a != b]
    return Chance(
        outcomes=tuple(
            (1.0 / len(deals), _deal_subtree(c1, c2)) for c1, c2 in deals
        )
    )


def leduc_poker() -> EfgBundle:
    return compile_bundle(leduc_tree(), "leduc")
