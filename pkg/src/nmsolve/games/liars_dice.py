"""One-die-each bluffing game with a quantity-value bid ladder.

Both players roll a private fair die with the given face count.  Bids
are (quantity, value) pairs with quantity 1 or 2, ordered by quantity
then value; every move must strictly raise the bid or call the bluff,
and a call ends the game: the caller wins (+1) when fewer than
`quantity` of the two dice show `value`, and loses (-1) otherwise.
Player 1 opens and may not call on an empty ladder.
"""

from __future__ import annotations

from .tree import Chance, Decision, EfgBundle, Terminal, compile_bundle
from ..errors import ConfigError


def bid_ladder(faces: int):
    return [(q, v) for q in (1, 2) for v in range(1, faces + 1)]


def _call_terminal(bids, last, caller, r1, r2):
    quantity, value = bids[last]
    count = int(r1 == value) + int(r2 == value)
    caller_wins = count < quantity
    p1_wins = caller_wins if caller == 0 else not caller_wins
    return Terminal(p1_payoff=1.0 if p1_wins else -1.0)


def _build(bids, r1, r2, history, last, to_act):
    own_roll = r1 if to_act == 0 else r2
    actions = [
        _build(bids, r1, r2, history + (b,), b, 1 - to_act)
        for b in range(last + 1, len(bids))
    ]
    if last >= 0:
        actions.append(_call_terminal(bids, last, to_act, r1, r2))
    return Decision(
        player=to_act, infoset=(own_roll, history), actions=tuple(actions)
    )


def liars_dice_tree(faces: int):
    if faces not in (4, 5):
        raise ConfigError(f"supported face counts are 4 and 5, got {faces}")
    bids = bid_ladder(faces)
    p = 1.0 / (faces * faces)
    outcomes = tuple(
        (p, _build(bids, r1, r2, (), -1, 0))
        for r1 in range(1, faces + 1)
        for r2 in range(1, faces + 1)
    )
    return Chance(outcomes=outcomes)


def liars_dice(faces: int) -> EfgBundle:
    return compile_bundle(liars_dice_tree(faces), f"liars-dice{faces}")
