"""Executable learners for the full-information repeated game.

Every learner exposes ``act() -> y`` (a float distribution over the learner's
actions) and ``observe(x, u)`` where ``x`` is the optimizer's mix this round
and ``u[j] = u_L(x, j)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


@dataclass
class LearnerSpec:
    kind: str
    regularizer: str = "negentropy"
    eta: float | None = None
    target_menu: Any = None
    base: "LearnerSpec | None" = None
    gamma_audit: str | None = None
    y: tuple | None = None
    cycle: tuple | None = None
    trigger: int | None = None
    after: tuple | None = None
    extra: dict = field(default_factory=dict)


KINDS = ("ftrl", "ftl", "swap_regret", "blackwell", "protocol",
         "fixed", "cyclic", "grim_trigger", "random")


def default_eta(regularizer: str, n: int, T: int) -> float:
    if regularizer == "negentropy":
        return math.sqrt(math.log(n) / T) if n > 1 else 1.0
    if regularizer == "quadratic":
        return 1.0 / math.sqrt(T)
    raise ValueError(f"unknown regularizer {regularizer!r}")


def softmax(z):
    w = np.exp(z - z.max())
    return w / w.sum()


def project_simplex(v):
    """Euclidean projection onto the probability simplex (sorted-threshold rule)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u) - 1.0
    k = np.arange(1, len(v) + 1)
    rho = np.nonzero(u - css / k > 0)[0][-1]
    theta = css[rho] / (rho + 1)
    return np.maximum(v - theta, 0.0)


def _pure(n, j):
    y = np.zeros(n)
    y[j] = 1.0
    return y


class FTRL:
    def __init__(self, n, eta, regularizer="negentropy"):
        self.G = np.zeros(n)
        self.eta = eta
        self.reg = regularizer
        if regularizer not in ("negentropy", "quadratic"):
            raise ValueError(f"unknown regularizer {regularizer!r}")

    def act(self):
        if self.reg == "negentropy":
            return softmax(self.eta * self.G)
        return project_simplex(self.eta * self.G)

    def observe(self, x, u):
        self.G += u


class FTL:
    """Pure leader; ties go to the lowest index."""

    def __init__(self, n):
        self.G = np.zeros(n)
        self.n = n

    def act(self):
        return _pure(self.n, int(np.argmax(self.G)))

    def observe(self, x, u):
        self.G += u


class SwapRegret:
    """Blum-Mansour: one multiplicative-weights copy per action, play the stationary mix."""

    def __init__(self, n, eta):
        self.n = n
        self.eta = eta
        self.G = np.zeros((n, n))
        self.p = np.full(n, 1.0 / n)

    def _stationary(self, Q):
        n = self.n
        M = Q.T - np.eye(n)
        M[-1, :] = 1.0
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        try:
            p = np.linalg.solve(M, rhs)
        except np.linalg.LinAlgError:
            p = self.p
            for _ in range(100000):
                q = p @ Q
                if np.abs(q - p).sum() < 1e-12:
                    break
                p = q
        p = np.maximum(p, 0.0)
        return p / p.sum()

    def act(self):
        Z = self.eta * self.G
        Z -= Z.max(axis=1, keepdims=True)
        Q = np.exp(Z)
        Q /= Q.sum(axis=1, keepdims=True)
        self.p = self._stationary(Q)
        return self.p

    def observe(self, x, u):
        self.G += np.outer(self.p, u)


class Fixed:
    def __init__(self, y):
        self.y = np.asarray(y, dtype=float)

    def act(self):
        return self.y

    def observe(self, x, u):
        pass


class Cyclic:
    def __init__(self, cycle):
        self.cycle = [np.asarray(y, dtype=float) for y in cycle]
        self.t = 0

    def act(self):
        return self.cycle[self.t % len(self.cycle)]

    def observe(self, x, u):
        self.t += 1


class GrimTrigger:
    """Plays ``y`` until the optimizer puts weight on ``trigger``, then ``after`` forever."""

    def __init__(self, y, trigger, after):
        self.y = np.asarray(y, dtype=float)
        self.after = np.asarray(after, dtype=float)
        self.trigger = trigger
        self.fired = False

    def act(self):
        return self.after if self.fired else self.y

    def observe(self, x, u):
        if x[self.trigger] > 0:
            self.fired = True


class RandomMix:
    """Fresh uniformly random mix every round; never concentrates."""

    def __init__(self, n, rng):
        self.n = n
        self.rng = rng

    def act(self):
        return self.rng.dirichlet(np.ones(self.n))

    def observe(self, x, u):
        pass


def make_learner(spec: LearnerSpec, game, T: int, rng):
    n = game.n
    k = spec.kind
    if k == "ftrl":
        eta = spec.eta if spec.eta is not None else default_eta(spec.regularizer, n, T)
        return FTRL(n, eta, spec.regularizer)
    if k == "ftl":
        return FTL(n)
    if k == "swap_regret":
        eta = spec.eta if spec.eta is not None else default_eta("negentropy", n, T)
        return SwapRegret(n, eta)
    if k == "blackwell":
        from .blackwell import BlackwellLearner
        return BlackwellLearner(spec.target_menu)
    if k == "protocol":
        from .protocol import ProtocolLearner
        return ProtocolLearner(game, spec.target_menu, spec.base, T, rng)
    if k == "fixed":
        return Fixed(_check_mix(spec.y, n))
    if k == "cyclic":
        return Cyclic([_check_mix(y, n) for y in spec.cycle])
    if k == "grim_trigger":
        if spec.trigger is None or not 0 <= spec.trigger < game.m:
            raise ValueError("grim_trigger needs an optimizer action to watch")
        return GrimTrigger(_check_mix(spec.y, n), spec.trigger, _check_mix(spec.after, n))
    if k == "random":
        return RandomMix(n, rng)
    raise ValueError(f"unknown learner kind {k!r}")


def _check_mix(y, n):
    if y is None:
        raise ValueError("learner mix missing")
    y = np.asarray([float(v) for v in y])
    if y.shape != (n,) or (y < 0).any() or abs(y.sum() - 1) > 1e-12:
        raise ValueError(f"not a distribution over {n} actions: {y}")
    return y
