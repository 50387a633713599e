"""Exact two-phase simplex over rationals (Bland's rule).

All arithmetic is done with :class:`fractions.Fraction`, so results are exact
and the returned points satisfy every constraint by substitution.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str
    value: Fraction | None = None
    point: tuple[Fraction, ...] | None = None


def _pivot(rows, obj, basis, r, c):
    prow = rows[r]
    piv = prow[c]
    if piv != 1:
        inv = 1 / piv
        prow = [v * inv for v in prow]
        rows[r] = prow
    nz = [(k, v) for k, v in enumerate(prow) if v]
    for i, row in enumerate(rows):
        if i == r:
            continue
        f = row[c]
        if f:
            for k, v in nz:
                row[k] -= f * v
    f = obj[c]
    if f:
        for k, v in nz:
            obj[k] -= f * v
    basis[r] = c


def _run(rows, obj, basis, allowed):
    """Minimise with the reduced-cost row ``obj`` (last entry is -value).

    Returns False when unbounded.
    """
    ncols = len(obj) - 1
    while True:
        enter = -1
        for j in range(ncols):
            if allowed[j] and obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        best = None
        leave = -1
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(rows, obj, basis, leave, enter)


def simplex_standard(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction],
                     c: Sequence[Fraction] | None = None) -> LPResult:
    """Minimise ``c.x`` subject to ``A x = b``, ``x >= 0``.

    With ``c`` omitted only feasibility is decided and a basic feasible point
    is returned with value 0.
    """
    m = len(A)
    n = len(A[0]) if m else (len(c) if c is not None else 0)
    if c is None:
        c = [_ZERO] * n
    if m == 0:
        if any(v < 0 for v in c):
            return LPResult(UNBOUNDED)
        return LPResult(OPTIMAL, _ZERO, tuple(_ZERO for _ in range(n)))

    # tableau columns: n structural, m artificial, rhs
    rows = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [_ZERO] * m
        art[i] = _ONE
        rows.append(row + art + [rhs])
    basis = [n + i for i in range(m)]

    # phase one: minimise the sum of artificials
    obj = [_ZERO] * (n + m + 1)
    for row in rows:
        for k in range(n):
            obj[k] -= row[k]
        obj[-1] -= row[-1]
    allowed = [True] * (n + m)
    _run(rows, obj, basis, allowed)
    if obj[-1] != 0:
        return LPResult(INFEASIBLE)

    # drive remaining artificials out of the basis, dropping redundant rows
    r = 0
    while r < len(rows):
        if basis[r] >= n:
            row = rows[r]
            col = next((k for k in range(n) if row[k] != 0), -1)
            if col < 0:
                del rows[r]
                del basis[r]
                continue
            _pivot(rows, obj, basis, r, col)
        r += 1

    # phase two
    allowed = [True] * n + [False] * m
    obj = [Fraction(v) for v in c] + [_ZERO] * m + [_ZERO]
    for i, bv in enumerate(basis):
        f = obj[bv]
        if f:
            row = rows[i]
            for k in range(n + m + 1):
                if row[k]:
                    obj[k] -= f * row[k]
    if not _run(rows, obj, basis, allowed):
        return LPResult(UNBOUNDED)
    x = [_ZERO] * n
    for i, bv in enumerate(basis):
        x[bv] = rows[i][-1]
    value = sum((Fraction(ci) * xi for ci, xi in zip(c, x) if xi), _ZERO)
    return LPResult(OPTIMAL, value, tuple(x))
