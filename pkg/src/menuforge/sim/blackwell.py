"""Blackwell-approachability learner steering the average CSP into a target menu."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from ..core.distance import project
from ..menus import Menu, is_valid_menu, response_mix


@lru_cache(maxsize=None)
def _supports(m: int, n: int):
    # per support size k: row index sets (C, k) and column index sets (C, k)
    out = []
    for k in range(1, min(m, n) + 1):
        pairs = [(I, J) for I in itertools.combinations(range(m), k)
                 for J in itertools.combinations(range(n), k)]
        rows = np.array([I for I, _ in pairs])
        cols = np.array([J for _, J in pairs])
        out.append((k, rows, cols))
    return out


def _square(D, I, J):
    # equalizing strategies of the subgame (I, J); None if singular or infeasible
    k = len(I)
    A = np.zeros((k + 1, k + 1))
    A[:k, :k] = D[np.ix_(I, J)]
    A[:k, k] = -1.0
    A[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    try:
        col = np.linalg.solve(A, rhs)
        row = np.linalg.solve(A.T * np.r_[np.ones(k), -1.0][:, None] * np.r_[np.ones(k), -1.0], rhs)
    except np.linalg.LinAlgError:
        return None
    if (col[:k] < -1e-12).any() or (row[:k] < -1e-12).any():
        return None
    y = np.zeros(D.shape[1])
    y[list(J)] = np.maximum(col[:k], 0.0)
    x = np.zeros(D.shape[0])
    x[list(I)] = np.maximum(row[:k], 0.0)
    return y / y.sum(), x / x.sum()


def minimax_column(D, hint=None):
    """``argmin_y max_i (D y)_i`` over the simplex, by enumerating square subgames.

    Returns ``(y, (I, J))``; a previous support passed as ``hint`` is tried
    first and accepted when it certifies optimality from both sides.
    """
    if hint is not None:
        got = _square(D, *hint)
        if got is not None:
            y, x = got
            if (D @ y).max() <= (x @ D).min() + 1e-12:
                return y, hint
    m, n = D.shape
    best = (np.inf, None, None)
    for k, rows, cols in _supports(m, n):
        c = len(rows)
        A = np.zeros((c, k + 1, k + 1))
        A[:, :k, :k] = D[rows[:, :, None], cols[:, None, :]]
        A[:, :k, k] = -1.0
        A[:, k, :k] = 1.0
        ok = np.abs(np.linalg.det(A)) > 1e-14
        if not ok.any():
            continue
        rhs = np.zeros((int(ok.sum()), k + 1, 1))
        rhs[:, k] = 1.0
        sol = np.linalg.solve(A[ok], rhs)[:, :k, 0]
        Y = np.zeros((len(sol), n))
        np.put_along_axis(Y, cols[ok], sol, axis=1)
        feas = (Y >= -1e-12).all(axis=1)
        if not feas.any():
            continue
        Y = np.maximum(Y[feas], 0.0)
        Y /= Y.sum(axis=1, keepdims=True)
        vals = (Y @ D.T).max(axis=1)
        a = int(np.argmin(vals))
        if vals[a] < best[0] - 1e-15:
            best = (vals[a], Y[a], (tuple(rows[ok][feas][a]), tuple(cols[ok][feas][a])))
    return best[1], best[2]


class BlackwellLearner:
    def __init__(self, target: Menu, tol: float = 1e-12, check_grid: int | None = 6):
        if target is None:
            raise ValueError("blackwell learner needs a target menu")
        if check_grid and not is_valid_menu(target, check_grid, jobs=1).passed:
            raise ValueError("target menu is not response-satisfiable")
        g = target.game
        self.m, self.n = g.m, g.n
        self.V = np.array([[float(a) for a in v] for v in target.vertices])
        uniform = [Fraction(1, self.m)] * self.m
        self.default = np.array([float(a) for a in response_mix(target.vertices, self.n, uniform)])
        self.S = np.zeros(self.m * self.n)
        self.t = 0
        self.tol = tol
        self.warm = None
        self.hint = None
        self.y = self.default

    def distance(self):
        if self.t == 0:
            return 0.0
        _, dist, _ = project(self.S / self.t, self.V)
        return dist

    def act(self):
        if self.t == 0:
            self.y = self.default
            return self.y
        avg = self.S / self.t
        p, dist, w = project(avg, self.V, warm=self.warm)
        idx = np.nonzero(w)[0]
        self.warm = (list(idx), w[idx])
        if dist <= self.tol:
            self.y = self.default
        else:
            self.y, self.hint = minimax_column((avg - p).reshape(self.m, self.n), self.hint)
        return self.y

    def observe(self, x, u):
        self.S += np.outer(x, self.y).ravel()
        self.t += 1
