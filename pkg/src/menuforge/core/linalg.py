"""Small exact linear-algebra helpers over Fractions and Python ints."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns."""
    M = [[Fraction(v) for v in r] for r in rows]
    if not M:
        return M, []
    ncols = len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(M)) if M[i][c] != 0), None)
        if p is None:
            continue
        M[r], M[p] = M[p], M[r]
        inv = 1 / M[r][c]
        M[r] = [v * inv for v in M[r]]
        for i in range(len(M)):
            if i != r and M[i][c] != 0:
                f = M[i][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
        if r == len(M):
            break
    return M[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(rows)[1])


def solve_affine(eq_rows, eq_rhs, dim):
    """Parametrise ``{x : E x = f}`` as ``x0 + N z``.

    Returns ``(x0, N)`` with ``N`` a list of basis column vectors, or ``None``
    when the system is inconsistent.
    """
    if not eq_rows:
        x0 = [Fraction(0)] * dim
        basis = []
        for k in range(dim):
            e = [Fraction(0)] * dim
            e[k] = Fraction(1)
            basis.append(e)
        return x0, basis
    aug = [list(r) + [Fraction(v)] for r, v in zip(eq_rows, eq_rhs)]
    R, piv = rref(aug)
    if dim in piv:
        return None
    x0 = [Fraction(0)] * dim
    for i, c in enumerate(piv):
        x0[c] = R[i][dim]
    free = [c for c in range(dim) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * dim
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        basis.append(v)
    return x0, basis


def integerize(vec: Sequence[Fraction]) -> list[int]:
    """Scale a rational vector to a primitive integer vector (same direction)."""
    den = 1
    for v in vec:
        d = Fraction(v).denominator
        den = den * d // gcd(den, d)
    ints = [int(Fraction(v) * den) for v in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return ints


def primitive(vec: list[int]) -> list[int]:
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g > 1:
        return [v // g for v in vec]
    return vec


def inverse(M: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    n = len(M)
    aug = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in R]
