"""Benchmark game construction: sizes, payoffs, equilibria, serialization."""

import hashlib
from pathlib import Path

import numpy as np
import pytest

from _oracles import count_terminals, lp_equilibrium, pure_cost, uniform_cost
from nmsolve.errors import ConfigError
from nmsolve.games import (
    Chance,
    Decision,
    Terminal,
    builtin_matrix_games,
    goofspiel,
    goofspiel_tree,
    kuhn_poker,
    kuhn_tree,
    leduc_poker,
    leduc_tree,
    liars_dice_tree,
    make_game,
    swap_players,
)
from nmsolve.nfg import SimplexStrategy, duality_gap
from nmsolve.rng import Xoshiro256StarStar
from nmsolve.treeplex import (
    SequenceFormStrategy,
    behavior_to_sequence,
    efg_exploitability,
    uniform_behavior,
)

DATA = Path(__file__).parent / "data"

# name, params, sequences per player, decision points per player,
# payoff entries, payoff scale
SIZES = [
    ("kuhn", {}, 13, 6, 30, 2.0),
    ("leduc", {}, 1093, 468, 5520, 7.0),
    ("goofspiel4", {}, 341, 161, 576, 1.0),
    ("goofspiel4", {"limited_info": True}, 175, 81, 576, 1.0),
    ("goofspiel5", {}, 8506, 4026, 14400, 1.0),
    ("goofspiel5", {"limited_info": True}, 2284, 1062, 14400, 1.0),
    ("liars-dice4", {}, 1021, 512, 4080, 1.0),
    ("liars-dice5", {}, 5116, 2560, 25575, 1.0),
]

TREES = {
    "kuhn": kuhn_tree,
    "leduc": leduc_tree,
    "goofspiel4": lambda: goofspiel_tree(4),
    "goofspiel5": lambda: goofspiel_tree(5),
    "liars-dice4": lambda: liars_dice_tree(4),
    "liars-dice5": lambda: liars_dice_tree(5),
}


@pytest.mark.parametrize("name,params,seqs,points,nnz,scale", SIZES)
def test_game_sizes(name, params, seqs, points, nnz, scale):
    b = make_game(name, **params)
    assert b.treeplex_x.seq_count == seqs
    assert b.treeplex_y.seq_count == seqs
    assert b.treeplex_x.num_decision_points == points
    assert b.treeplex_y.num_decision_points == points
    assert len(b.payoff.vals) == nnz
    assert b.payoff_scale == scale
    assert not b.normalized


@pytest.mark.parametrize("name,params,seqs,points,nnz,scale", SIZES)
def test_uniform_play_matches_tree_walk(name, params, seqs, points, nnz, scale):
    # the sparse bilinear form must reproduce a direct walk of the raw tree
    b = make_game(name, **params)
    xs = behavior_to_sequence(b.treeplex_x, uniform_behavior(b.treeplex_x))
    ys = behavior_to_sequence(b.treeplex_y, uniform_behavior(b.treeplex_y))
    got = b.payoff.expectation(xs.values, ys.values)
    want = uniform_cost(TREES[name]())
    assert got == pytest.approx(want, abs=1e-10)


def test_uniform_cost_pins():
    assert uniform_cost(kuhn_tree()) == pytest.approx(-0.125, abs=1e-12)
    assert uniform_cost(leduc_tree()) == pytest.approx(0.0052083333333333, abs=1e-12)
    assert uniform_cost(liars_dice_tree(4)) == pytest.approx(0.0625, abs=1e-12)
    assert uniform_cost(goofspiel_tree(4)) == pytest.approx(0.0, abs=1e-12)


# equilibrium cost to player 1 from the sequence-form LP
LP_VALUES = [
    ("kuhn", 1.0 / 18.0),
    ("leduc", 0.052455748450252186),
    ("goofspiel4", 0.0),
    ("goofspiel5", 0.0),
    ("liars-dice4", 0.125),
    ("liars-dice5", 0.12),
]


@pytest.mark.parametrize("name,value", LP_VALUES)
def test_lp_equilibrium_value_and_gap(name, value):
    b = make_game(name)
    x, y, v = lp_equilibrium(b)
    assert v == pytest.approx(value, abs=1e-9)
    xs = SequenceFormStrategy(b.treeplex_x, np.clip(x, 0.0, 1.0))
    ys = SequenceFormStrategy(b.treeplex_y, np.clip(y, 0.0, 1.0))
    gap = efg_exploitability(b.payoff, b.treeplex_x, b.treeplex_y, xs, ys)
    assert -1e-10 <= gap <= 1e-9


@pytest.mark.parametrize("name", ["kuhn", "leduc", "goofspiel4", "liars-dice4"])
def test_uniform_play_is_exploitable(name):
    b = make_game(name)
    xs = behavior_to_sequence(b.treeplex_x, uniform_behavior(b.treeplex_x))
    ys = behavior_to_sequence(b.treeplex_y, uniform_behavior(b.treeplex_y))
    gap = efg_exploitability(b.payoff, b.treeplex_x, b.treeplex_y, xs, ys)
    assert gap > 0.1


def test_kuhn_value_by_pure_strategy_enumeration():
    # cross-check the sequence-form LP against a totally separate route:
    # enumerate all 2^6 pure strategies per player and solve the matrix game
    from itertools import product

    from scipy.optimize import linprog

    b = kuhn_poker()
    root = kuhn_tree()
    picks_x = [dict(zip(b.infoset_keys_x, bits)) for bits in product((0, 1), repeat=6)]
    picks_y = [dict(zip(b.infoset_keys_y, bits)) for bits in product((0, 1), repeat=6)]
    M = np.array([[pure_cost(root, px, py) for py in picks_y] for px in picks_x])
    assert np.max(np.abs(M)) <= 2.0

    # min_p max_j (p'M)_j as an LP over (p, v)
    n = len(picks_x)
    c = np.r_[np.zeros(n), 1.0]
    A_ub = np.hstack([M.T, -np.ones((n, 1))])
    A_eq = np.r_[np.ones(n), 0.0].reshape(1, -1)
    res = linprog(c, A_ub=A_ub, b_ub=np.zeros(n), A_eq=A_eq, b_eq=[1.0],
                  bounds=[(0, None)] * n + [(None, None)], method="highs")
    assert res.status == 0
    assert res.fun == pytest.approx(1.0 / 18.0, abs=1e-9)

    # the optimal mixture, pushed through the tree machinery, is a saddle point
    p = res.x[:n]
    xs = np.zeros(b.treeplex_x.seq_count)
    for weight, pick in zip(p, picks_x):
        if weight <= 0:
            continue
        behavior = [
            SimplexStrategy.vertex(int(b.treeplex_x.n[j]), pick[b.infoset_keys_x[j]])
            for j in range(b.treeplex_x.num_decision_points)
        ]
        xs += weight * behavior_to_sequence(b.treeplex_x, behavior).values
    xs[0] = 1.0
    _, y_lp, _ = lp_equilibrium(b)
    gap = efg_exploitability(
        b.payoff,
        b.treeplex_x,
        b.treeplex_y,
        SequenceFormStrategy(b.treeplex_x, np.clip(xs, 0.0, 1.0)),
        SequenceFormStrategy(b.treeplex_y, np.clip(y_lp, 0.0, 1.0)),
    )
    assert gap <= 1e-9


def test_kuhn_terminal_count():
    assert count_terminals(kuhn_tree()) == 30
    root = kuhn_tree()
    assert isinstance(root, Chance)
    assert len(root.outcomes) == 6
    assert all(p == pytest.approx(1.0 / 6.0) for p, _ in root.outcomes)


def test_goofspiel_terminal_count_and_tie_line():
    root = goofspiel_tree(4)
    assert count_terminals(root) == 576
    # identical index choices mean identical cards, so every round ties
    # and the final score difference is zero
    node = root
    while not isinstance(node, Terminal):
        assert isinstance(node, Decision)
        node = node.actions[0]
    assert node.p1_payoff == 0.0


def test_goofspiel_round_one_actions():
    root = goofspiel_tree(4)
    assert isinstance(root, Decision) and root.player == 0
    assert len(root.actions) == 4
    second = root.actions[0]
    assert isinstance(second, Decision) and second.player == 1
    # simultaneous play: player 2's first infoset cannot depend on
    # player 1's unrevealed card
    keys = {root.actions[i].infoset for i in range(4)}
    assert len(keys) == 1


def test_goofspiel_limited_info_collapses_infosets():
    full = goofspiel(4)
    lim = goofspiel(4, limited_info=True)
    assert lim.treeplex_x.seq_count < full.treeplex_x.seq_count
    assert lim.name == "goofspiel4-limited"
    # same leaves, same uniform value, different information structure
    xs = behavior_to_sequence(lim.treeplex_x, uniform_behavior(lim.treeplex_x))
    ys = behavior_to_sequence(lim.treeplex_y, uniform_behavior(lim.treeplex_y))
    assert lim.payoff.expectation(xs.values, ys.values) == pytest.approx(0.0, abs=1e-12)


def test_liars_dice_bid_ladder_structure():
    root = liars_dice_tree(4)
    assert isinstance(root, Chance)
    assert len(root.outcomes) == 16
    assert all(p == pytest.approx(1.0 / 16.0) for p, _ in root.outcomes)
    first = root.outcomes[0][1]
    # opening move offers every bid but not a challenge
    assert isinstance(first, Decision) and first.player == 0
    assert len(first.actions) == 8
    # after the opening bid the responder sees 7 raises plus the challenge
    second = first.actions[0]
    assert isinstance(second, Decision) and second.player == 1
    assert len(second.actions) == 8
    # after the highest possible bid only the challenge remains
    node = first
    while isinstance(node, Decision) and len(node.actions) > 1:
        node = node.actions[-2]  # last bid before the challenge slot
    assert isinstance(node, Decision) and len(node.actions) == 1
    assert isinstance(node.actions[0], Terminal)


def test_liars_dice_challenge_payoffs_are_unit():
    b = make_game("liars-dice4")
    assert set(np.sign(b.payoff.vals)) <= {-1.0, 1.0}
    assert np.max(np.abs(b.payoff.vals)) <= 1.0 + 1e-12


def test_leduc_deal_and_raise_cap():
    root = leduc_tree()
    assert isinstance(root, Chance)
    assert len(root.outcomes) == 30
    deal = root.outcomes[0][1]
    assert isinstance(deal, Decision) and deal.player == 0
    assert len(deal.actions) == 2  # check, bet
    p2 = deal.actions[0]
    assert isinstance(p2, Decision) and p2.player == 1
    board = p2.actions[0]
    # check-check ends the round: a public card comes off the remaining four
    assert isinstance(board, Chance)
    assert len(board.outcomes) == 4
    assert all(p == pytest.approx(0.25) for p, _ in board.outcomes)
    # bet then raise caps the round: only fold or call remain
    after_bet = deal.actions[1]
    assert len(after_bet.actions) == 3  # fold, call, raise
    after_raise = after_bet.actions[2]
    assert isinstance(after_raise, Decision)
    assert len(after_raise.actions) == 2  # fold, call


def test_leduc_pot_sizes():
    # ante 1, round bets 1 and 2, two bets max per round: per-player
    # contributions run 1..7, and tied showdowns split the pot for 0
    payoffs = {abs(node.p1_payoff) for node in _terminals(leduc_tree())}
    assert payoffs == {0.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0}


def _terminals(node):
    if isinstance(node, Terminal):
        yield node
        return
    children = (
        [c for _, c in node.outcomes] if isinstance(node, Chance) else node.actions
    )
    for child in children:
        yield from _terminals(child)


@pytest.mark.parametrize("name", ["kuhn", "goofspiel4", "liars-dice4"])
def test_swap_players_flips_sign(name):
    b = make_game(name)
    s = swap_players(b)
    rng = Xoshiro256StarStar(7)

    def random_seq(t):
        parts = []
        for j in range(t.num_decision_points):
            w = np.array([rng.next_uniform() + 0.05 for _ in range(int(t.n[j]))])
            parts.append(SimplexStrategy(w / w.sum()))
        return behavior_to_sequence(t, parts)

    xs, ys = random_seq(b.treeplex_x), random_seq(b.treeplex_y)
    direct = efg_exploitability(b.payoff, b.treeplex_x, b.treeplex_y, xs, ys)
    mirrored = efg_exploitability(s.payoff, s.treeplex_x, s.treeplex_y, ys, xs)
    assert direct == pytest.approx(mirrored, abs=1e-10)
    assert s.payoff.expectation(ys.values, xs.values) == pytest.approx(
        -b.payoff.expectation(xs.values, ys.values), abs=1e-12
    )


def test_normalized_copy():
    # entries carry chance reach, so normalization divides them by the
    # leaf-payoff scale rather than forcing a max of one
    b = leduc_poker()
    n = b.normalized_copy()
    assert n.normalized and not b.normalized
    assert n.payoff_scale == 7.0
    assert np.allclose(n.payoff.vals, b.payoff.vals / 7.0, rtol=0, atol=1e-15)
    assert n.normalized_copy() is n
    k = kuhn_poker()
    kn = k.normalized_copy()
    assert np.allclose(kn.payoff.vals, k.payoff.vals / 2.0, rtol=0, atol=1e-15)


def test_builtin_3x3_metadata():
    named = builtin_matrix_games()["3x3"]
    g = named.game
    assert np.array_equal(g.payoff, [[3, 0, -3], [0, 3, -4], [0, 0, 1]])
    x, y = named.equilibrium_x, named.equilibrium_y
    assert duality_gap(g, x, y) <= 1e-12
    assert float(x @ g.payoff @ y) == pytest.approx(0.25, abs=1e-12)


def test_builtin_bias_rps():
    g = builtin_matrix_games()["bias_rps"].game
    assert np.array_equal(g.payoff, [[0, -1, 3], [1, 0, -1], [-3, 1, 0]])
    assert np.array_equal(g.payoff, -g.payoff.T)


def test_make_game_registry():
    assert make_game("3x3").payoff.shape == (3, 3)
    assert make_game("random", seed=0, m=4, n=5).payoff.shape == (4, 5)
    assert make_game("kuhn").name == "kuhn"
    assert make_game("goofspiel4", limited_info=True).name == "goofspiel4-limited"
    with pytest.raises(ConfigError):
        make_game("unknown-game")
    with pytest.raises(ConfigError):
        make_game("3x3", size=4)
    with pytest.raises(ConfigError):
        make_game("random", seed=0, m=4)
    with pytest.raises(ConfigError):
        make_game("kuhn", limited_info=True)
    with pytest.raises(ConfigError):
        make_game("goofspiel4", ranks=6)
    with pytest.raises(ConfigError):
        goofspiel(6)


def test_kuhn_serialization_golden():
    got = kuhn_poker().to_text()
    want = (DATA / "kuhn_bundle.txt").read_text()
    assert got == want


CHECKSUMS = {
    ("leduc", ()): "35a4dc733e92deba17346f36f69ff7d9d95b9e6e72bc8da781a4f0a58589c541",
    ("goofspiel4", ()): "f0b45ac2ef34ee3845a4375d0db9e914c2a434adeed403baafbbbb92b172e453",
    ("goofspiel4", ("limited_info",)): "a89040ee1db5b3d9c3cfa68327fcf43f31683153dc40e66fa3025422d1f707a0",
    ("liars-dice4", ()): "deae8579c7acf28aec7543068892d3597af0729e8f6b6e0ddba6b9ff5eff33c8",
}


@pytest.mark.parametrize("key", sorted(CHECKSUMS))
def test_serialization_checksums(key):
    name, flags = key
    b = make_game(name, **{f: True for f in flags})
    digest = hashlib.sha256(b.to_text().encode()).hexdigest()
    assert digest == CHECKSUMS[key]
