"""Menu-extension protocol: listen for a target CSP, play its schedule, punish deviation."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple, Sequence

import numpy as np

from ..core.geometry import contains_polytope
from ..core.lp import OPTIMAL, simplex_standard
from ..menus import Menu, build_nsr_menu


class ProtocolParams(NamedTuple):
    C: int
    digits: int
    listen: int


def protocol_parameters(m: int, n: int, T: int) -> ProtocolParams:
    C = math.isqrt(T) + 1
    D = 1
    while m ** D < C + 1:
        D += 1
    return ProtocolParams(C, D, m * n * D)


def net_point(phi: Sequence, C: int) -> tuple[int, ...]:
    """Integer counts summing to ``C`` closest to ``C * phi`` (largest remainders)."""
    scaled = [Fraction(p) * C for p in phi]
    counts = [math.floor(s) for s in scaled]
    short = C - sum(counts)
    order = sorted(range(len(phi)), key=lambda k: (-(scaled[k] - counts[k]), k))
    for k in order[:short]:
        counts[k] += 1
    return tuple(counts)


def encode_counts(counts: Sequence[int], m: int, digits: int) -> list[int]:
    """Base-``m`` digits of every count, most significant first."""
    out = []
    for c in counts:
        ds = []
        for _ in range(digits):
            c, r = divmod(c, m)
            ds.append(r)
        if c:
            raise ValueError("count does not fit in the digit budget")
        out.extend(reversed(ds))
    return out


def decode_counts(actions: Sequence[int], m: int, digits: int) -> tuple[int, ...]:
    counts = []
    for k in range(0, len(actions), digits):
        c = 0
        for a in actions[k:k + digits]:
            c = c * m + a
        counts.append(c)
    return tuple(counts)


def cycle_slots(counts: Sequence[int], n: int) -> list[tuple[int, int]]:
    slots = []
    for idx, c in enumerate(counts):
        slots.extend([divmod(idx, n)] * c)
    return slots


def cooperative_actions(m: int, n: int, counts: Sequence[int], T: int) -> list[int]:
    """Optimizer pure-action sequence that announces ``counts`` then follows the schedule."""
    C, D, L = protocol_parameters(m, n, T)
    if sum(counts) != C:
        raise ValueError(f"counts must sum to C = {C}")
    acts = encode_counts(counts, m, D)
    slots = cycle_slots(counts, n)
    r = 0
    while len(acts) < T:
        acts.append(slots[r % C][0])
        r += 1
    return acts[:T]


def linf_distance(point: Sequence, vertices: Sequence[Sequence]) -> Fraction:
    """Exact ``min ||point - v||_inf`` over ``conv(vertices)``."""
    dim, k = len(point), len(vertices)
    # columns: lambda (k), e_plus (dim), e_minus (dim), r, slack (2*dim)
    cols = k + 2 * dim + 1 + 2 * dim
    A, b = [], []
    for d in range(dim):
        row = [Fraction(v[d]) for v in vertices] + [Fraction(0)] * (cols - k)
        row[k + d] = Fraction(1)
        row[k + dim + d] = Fraction(-1)
        A.append(row)
        b.append(Fraction(point[d]))
    for d in range(dim):
        for off in (0, dim):
            row = [Fraction(0)] * cols
            row[k + off + d] = Fraction(1)
            row[k + 2 * dim] = Fraction(-1)
            row[k + 2 * dim + 1 + off + d] = Fraction(1)
            A.append(row)
            b.append(Fraction(0))
    A.append([Fraction(1)] * k + [Fraction(0)] * (cols - k))
    b.append(Fraction(1))
    c = [Fraction(0)] * cols
    c[k + 2 * dim] = Fraction(1)
    res = simplex_standard(A, b, c)
    assert res.status == OPTIMAL
    return res.value


def check_extension(extension: Menu, base) -> None:
    """Input check: the extension must contain the base learner's menu (at least ``M_NSR``)."""
    if base is None:
        raise ValueError("protocol learner needs a base learner")
    nsr = build_nsr_menu(extension.game)
    if not contains_polytope(extension.polytope, nsr.polytope):
        raise ValueError("extension menu does not contain the base learner's menu")


class ProtocolLearner:
    LISTEN, PLAY, FALLBACK = "listen", "play", "fallback"

    def __init__(self, game, extension: Menu, base, T: int, rng):
        from .learners import make_learner

        check_extension(extension, base)
        self.game = game
        self.extension = extension
        self.base_spec = base
        self.T = T
        self.rng = rng
        self._make = make_learner
        self.params = protocol_parameters(game.m, game.n, T)
        self.heard: list[int] = []
        self.state = self.LISTEN
        self.slots: list[tuple[int, int]] = []
        self.r = 0
        self.t = 0
        self.base = None
        self.counts = None
        self.listen_mix = np.full(game.n, 1.0 / game.n)

    def _defect(self):
        self.state = self.FALLBACK
        self.base = self._make(self.base_spec, self.game, max(1, self.T - self.t), self.rng)

    def act(self):
        if self.state == self.LISTEN:
            return self.listen_mix
        if self.state == self.PLAY:
            y = np.zeros(self.game.n)
            y[self.slots[self.r % len(self.slots)][1]] = 1.0
            return y
        return self.base.act()

    def observe(self, x, u):
        self.t += 1
        if self.state == self.FALLBACK:
            self.base.observe(x, u)
            return
        pure = np.flatnonzero(x == 1.0)
        if len(pure) != 1:
            self._defect()
            return
        a = int(pure[0])
        if self.state == self.LISTEN:
            self.heard.append(a)
            if len(self.heard) == self.params.listen:
                self._decode()
            return
        if a != self.slots[self.r % len(self.slots)][0]:
            self._defect()
            return
        self.r += 1

    def _decode(self):
        C = self.params.C
        counts = decode_counts(self.heard, self.game.m, self.params.digits)
        if sum(counts) != C:
            self._defect()
            return
        phi = [Fraction(c, C) for c in counts]
        if linf_distance(phi, self.extension.vertices) > Fraction(1, C):
            self._defect()
            return
        self.counts = counts
        self.slots = cycle_slots(counts, self.game.n)
        self.state = self.PLAY


def cooperative_optimizer(game, counts: Sequence[int], T: int):
    """Schedule spec announcing ``counts`` and then playing along."""
    from .optimizers import OptimizerSpec

    runs: list = []
    for a in cooperative_actions(game.m, game.n, counts, T):
        x = tuple(int(i == a) for i in range(game.m))
        if runs and runs[-1][1] == x:
            runs[-1][0] += 1
        else:
            runs.append([1, x])
    return OptimizerSpec("schedule", rounds=[tuple(r) for r in runs])


def protocol_bound(m: int, n: int, T: int) -> float:
    """The L-infinity accuracy ``2/C + mn log(C) / T`` the cooperative run should reach."""
    C = protocol_parameters(m, n, T).C
    return 2 / C + m * n * math.log(C) / T
