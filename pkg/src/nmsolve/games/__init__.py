"""Benchmark game constructors: matrix games and sequence-form bundles."""

from __future__ import annotations

from ..errors import ConfigError
from ..nfg import MatrixGame, random_nfg
from .builtin import NamedMatrixGame, builtin_matrix_games
from .goofspiel import goofspiel, goofspiel_tree
from .kuhn import kuhn_poker, kuhn_tree
from .leduc import leduc_poker, leduc_tree
from .liars_dice import liars_dice, liars_dice_tree
from .tree import (
    Chance,
    Decision,
    EfgBundle,
    Terminal,
    compile_bundle,
    swap_players,
)

__all__ = [
    "Chance",
    "Decision",
    "EfgBundle",
    "MatrixGame",
    "NamedMatrixGame",
    "Terminal",
    "builtin_matrix_games",
    "compile_bundle",
    "goofspiel",
    "goofspiel_tree",
    "kuhn_poker",
    "kuhn_tree",
    "leduc_poker",
    "leduc_tree",
    "liars_dice",
    "liars_dice_tree",
    "make_game",
    "random_nfg",
    "swap_players",
]


def make_game(name: str, **params):
    """Look up a benchmark game by name.

    Matrix games: "3x3", "bias_rps", and "random" (params seed, m, n).
    Sequence-form games: "kuhn", "leduc", "goofspiel4", "goofspiel5"
    (param limited_info), "liars-dice4", "liars-dice5".
    """
    matrices = builtin_matrix_games()
    if name in matrices:
        if params:
            raise ConfigError(f"game {name!r} takes no parameters")
        return matrices[name].game
    if name == "random":
        try:
            seed = int(params.pop("seed"))
            m = int(params.pop("m"))
            n = int(params.pop("n"))
        except KeyError as missing:
            raise ConfigError(f"random game needs parameter {missing}")
        if params:
            raise ConfigError(f"unknown random-game parameters {sorted(params)}")
        return random_nfg(seed, m, n)
    if name == "kuhn":
        builder = kuhn_poker
    elif name == "leduc":
        builder = leduc_poker
    elif name in ("goofspiel4", "goofspiel5"):
        ranks = int(name[-1])
        limited = bool(params.pop("limited_info", False))
        if params:
            raise ConfigError(f"unknown goofspiel parameters {sorted(params)}")
        return goofspiel(ranks, limited_info=limited)
    elif name in ("liars-dice4", "liars-dice5"):
        if params:
            raise ConfigError(f"game {name!r} takes no parameters")
        return liars_dice(int(name[-1]))
    else:
        raise ConfigError(f"unknown game {name!r}")
    if params:
        raise ConfigError(f"game {name!r} takes no parameters")
    return builder()
