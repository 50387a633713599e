"""Open-loop optimizer strategies, expanded to a per-round mix array."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Any

import numpy as np

from ..core.geometry import dot
from ..game import Game, swap_regret
from ..meanbased import (
    PLAIN, ShapeError, Trajectory, discretize_runs, spiral_unroll,
)


@dataclass
class OptimizerSpec:
    kind: str
    x: tuple | None = None
    rounds: list | None = None
    repeat: bool = False
    trajectory: Trajectory | None = None
    eps: Any = Fraction(1, 1000)
    uO: tuple | None = None


def _mix(x, m):
    x = np.asarray([float(v) for v in x])
    if x.shape != (m,) or (x < 0).any() or abs(x.sum() - 1) > 1e-12:
        raise ValueError(f"not a distribution over {m} actions: {x}")
    return x


def _expand(runs, m, T, repeat):
    rows = []
    total = 0
    for count, x in runs:
        if count < 0:
            raise ValueError("negative run length")
        rows.append((int(count), _mix(x, m)))
        total += int(count)
    if not rows or total == 0:
        raise ValueError("empty schedule")
    out = np.empty((T, m))
    t = 0
    while t < T:
        for count, x in rows:
            k = min(count, T - t)
            out[t:t + k] = x
            t += k
            if t >= T:
                break
        if not repeat:
            out[t:] = rows[-1][1]
            break
    return out


def optimizer_mixes(spec: OptimizerSpec, game: Game, T: int) -> np.ndarray:
    m = game.m
    if spec.kind == "fixed":
        if spec.x is None:
            raise ValueError("fixed optimizer needs x")
        return np.tile(_mix(spec.x, m), (T, 1))
    if spec.kind == "schedule":
        return _expand(spec.rounds or [], m, T, spec.repeat)
    if spec.kind == "trajectory":
        if spec.trajectory is None:
            raise ValueError("trajectory optimizer needs a trajectory")
        return _expand(discretize_runs(game, spec.trajectory, T, spec.eps), m, T, False)
    if spec.kind == "exploiter":
        if spec.uO is None:
            raise ValueError("exploiter needs uO")
        return optimizer_mixes(exploiter_strategy(game, spec.uO, spec.eps), game, T)
    raise ValueError(f"unknown optimizer kind {spec.kind!r}")


@lru_cache(maxsize=16)
def _mb(game: Game):
    from ..meanbased import build_mb
    return build_mb(game, jobs=1)


def exploiter_vertex(game: Game, uO) -> tuple:
    """The mean-based-menu vertex best for ``uO``.

    Ties go to the learner's payoff, then to the larger swap regret.
    """
    if (game.m, game.n) != (2, 3):
        raise ShapeError("the exploiter needs a 2x3 game")
    uO = tuple(Fraction(v) for v in uO)
    if len(uO) != game.dim:
        raise ValueError("uO has the wrong length")
    mb = _mb(game)
    key = lambda v: (dot(uO, v), dot(game.uL_flat, v), swap_regret(game, v))
    return max(mb.menu.vertices, key=key)


def exploiter_strategy(game: Game, uO, eps=Fraction(1, 1000)) -> OptimizerSpec:
    v = exploiter_vertex(game, uO)
    tau = _mb(game).witnesses[v].trajectory(game)
    if tau.kind != PLAIN:
        tau = spiral_unroll(game, tau)
    return OptimizerSpec("trajectory", trajectory=tau, eps=eps)
