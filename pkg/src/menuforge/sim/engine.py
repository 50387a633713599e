"""The repeated-game loop and transcript measurements."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from ..core.lp import OPTIMAL, simplex_standard
from ..game import Game
from .learners import LearnerSpec, make_learner
from .optimizers import OptimizerSpec, optimizer_mixes

DENOMINATOR = 10 ** 9


@dataclass
class Transcript:
    T: int
    optimizer_mixes: np.ndarray
    learner_mixes: np.ndarray
    seed: int

    def __post_init__(self):
        if self.optimizer_mixes.shape[0] != self.T or self.learner_mixes.shape[0] != self.T:
            raise ValueError("transcript rows must number T")


def _renormalize(A):
    if (A < -1e-12).any():
        raise ValueError("negative probability in transcript")
    A = np.maximum(A, 0.0)
    s = A.sum(axis=1, keepdims=True)
    if (np.abs(s - 1) > 1e-9).any():
        raise ValueError("transcript row is not a distribution")
    return A / s


def run(game: Game, learner: LearnerSpec, optimizer: OptimizerSpec, T: int, seed: int = 0) -> Transcript:
    if T < 1:
        raise ValueError("horizon must be positive")
    rng = np.random.default_rng(seed)
    U = np.array([[float(v) for v in row] for row in game.uL])
    X = optimizer_mixes(optimizer, game, T)
    L = make_learner(learner, game, T, rng)
    Y = np.empty((T, game.n))
    for t in range(T):
        y = L.act()
        Y[t] = y
        x = X[t]
        L.observe(x, x @ U)
    return Transcript(T, _renormalize(X), _renormalize(Y), seed)


def empirical_csp(tr: Transcript) -> np.ndarray:
    """Time-averaged ``x_t (x) y_t``, flattened with the optimizer action as the row."""
    if tr.T == 0:
        raise ValueError("empty transcript")
    phi = (tr.optimizer_mixes.T @ tr.learner_mixes).ravel() / tr.T
    return phi / phi.sum()


def rationalize(phi: Sequence[float], denominator: int = DENOMINATOR) -> tuple:
    """Round to multiples of ``1/denominator`` keeping an exact unit sum."""
    counts = [round(float(v) * denominator) for v in phi]
    counts[int(np.argmax(counts))] += denominator - sum(counts)
    return tuple(Fraction(c, denominator) for c in counts)


def empirical_csp_rational(tr: Transcript) -> tuple:
    return rationalize(empirical_csp(tr))


def regret_curves(game: Game, tr: Transcript) -> tuple[np.ndarray, np.ndarray]:
    """Prefix-wise external and swap regret (cumulative, not averaged)."""
    U = np.array([[float(v) for v in row] for row in game.uL])
    P = tr.optimizer_mixes @ U  # payoff of each learner action, per round
    got = np.einsum("tj,tj->t", P, tr.learner_mixes)
    best = np.cumsum(P, axis=0).max(axis=1)
    regret = best - np.cumsum(got)
    # W[t, j, k]: mass on j times payoff of k
    W = np.cumsum(tr.learner_mixes[:, :, None] * P[:, None, :], axis=0)
    diag = np.einsum("tjj->tj", W)
    swap = (W.max(axis=2) - diag).sum(axis=1)
    return regret, swap


def gamma_power(p: float = 0.25) -> Callable[[np.ndarray], np.ndarray]:
    return lambda t: np.asarray(t, dtype=float) ** (-p)


def mean_based_audit(game: Game, tr: Transcript, gamma: Callable | None = None,
                     normalize: str = "horizon") -> int:
    """Count rounds where an action trailing the leader by more than the threshold kept weight above ``gamma``.

    The learner at round ``t`` sees the history of rounds ``1..t-1``.
    ``normalize="horizon"`` compares cumulative gaps with ``gamma(T) * T``
    and weights with ``gamma(T)``; ``"round"`` uses ``gamma(t)`` on the
    ``t``-round average.
    """
    gamma = gamma or gamma_power()
    U = np.array([[float(v) for v in row] for row in game.uL])
    P = tr.optimizer_mixes @ U
    G = np.vstack([np.zeros(game.n), np.cumsum(P, axis=0)[:-1]])
    gap = G.max(axis=1, keepdims=True) - G
    T = tr.T
    t = np.arange(1, T + 1, dtype=float)
    if normalize == "horizon":
        g = float(np.asarray(gamma(T)))
        thresh = np.full((T, 1), g * T)
        wcap = np.full((T, 1), g)
    elif normalize == "round":
        g = np.asarray(gamma(t)).reshape(T, 1)
        thresh = g * np.maximum(t - 1, 1).reshape(T, 1)
        wcap = g
    else:
        raise ValueError(f"unknown normalization {normalize!r}")
    bad = (gap > thresh) & (tr.learner_mixes > wcap)
    bad[0] = False
    return int(bad.any(axis=1).sum())


def l1_distance(point: Sequence, vertices: Sequence[Sequence]) -> Fraction:
    """Exact L1 distance from a rational point to ``conv(vertices)``."""
    dim, k = len(point), len(vertices)
    A, b = [], []
    for d in range(dim):
        row = [Fraction(v[d]) for v in vertices] + [Fraction(0)] * (2 * dim)
        row[k + d] = Fraction(1)
        row[k + dim + d] = Fraction(-1)
        A.append(row)
        b.append(Fraction(point[d]))
    A.append([Fraction(1)] * k + [Fraction(0)] * (2 * dim))
    b.append(Fraction(1))
    c = [Fraction(0)] * k + [Fraction(1)] * (2 * dim)
    res = simplex_standard(A, b, c)
    assert res.status == OPTIMAL
    return res.value


def transcript_csv(game: Game, tr: Transcript) -> str:
    reg, swap = regret_curves(game, tr)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["t"] + [f"x_{i + 1}" for i in range(game.m)] + [f"y_{j + 1}" for j in range(game.n)]
               + ["regret_prefix", "swap_regret_prefix"])
    for t in range(tr.T):
        w.writerow([t + 1] + [repr(float(v)) for v in tr.optimizer_mixes[t]]
                   + [repr(float(v)) for v in tr.learner_mixes[t]]
                   + [repr(float(reg[t])), repr(float(swap[t]))])
    return buf.getvalue()
