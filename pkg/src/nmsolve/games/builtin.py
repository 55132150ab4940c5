"""Built-in matrix games used by the benchmark presets."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..nfg import MatrixGame, make_matrix_game


@dataclass(frozen=True)
class NamedMatrixGame:
    name: str
    game: MatrixGame
    equilibrium_x: Optional[np.ndarray] = None
    equilibrium_y: Optional[np.ndarray] = None


def builtin_matrix_games() -> dict:
    """The 3x3 game with a unique interior-free equilibrium, and a
    rock-paper-scissors variant with asymmetric stakes."""
    g33 = NamedMatrixGame(
        name="3x3",
        game=make_matrix_game([[3, 0, -3], [0, 3, -4], [0, 0, 1]]),
        equilibrium_x=np.array([1 / 12, 1 / 12, 5 / 6]),
        equilibrium_y=np.array([1 / 3, 5 / 12, 1 / 4]),
    )
    bias = NamedMatrixGame(
        name="bias_rps",
        game=make_matrix_game([[0, -1, 3], [1, 0, -1], [-3, 1, 0]]),
    )
    return {g.name: g for g in (g33, bias)}
