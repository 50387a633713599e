"""Double-description vertex enumeration in exact integer arithmetic.

Works on the homogenised cone ``{(z, s) : A z - b s <= 0, s >= 0}``; a bounded
nonempty polytope corresponds to a pointed cone whose extreme rays all have
``s > 0``.
"""
from __future__ import annotations

from fractions import Fraction

from .linalg import integerize, inverse, primitive, rank


class UnboundedError(ValueError):
    """The inequality system describes an unbounded region."""


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _independent_rows(rows, width):
    chosen = []
    basis_rows = []
    for i, r in enumerate(rows):
        trial = basis_rows + [[Fraction(v) for v in r]]
        if rank(trial) == len(trial):
            chosen.append(i)
            basis_rows = trial
            if len(chosen) == width:
                break
    return chosen


def cone_extreme_rays(rows: list[list[int]]) -> list[list[int]] | None:
    """Extreme rays of the pointed cone ``{x : r.x <= 0 for r in rows}``.

    Returns ``None`` if the cone is not pointed (rank-deficient rows).
    """
    width = len(rows[0])
    init = _independent_rows(rows, width)
    if len(init) < width:
        return None
    B = [[Fraction(v) for v in rows[i]] for i in init]
    Binv = inverse(B)
    rays = []
    for k in range(width):
        col = [-Binv[i][k] for i in range(width)]
        rays.append(integerize(col))
    # zero sets as bitmasks over processed row positions
    order = init + [i for i in range(len(rows)) if i not in set(init)]
    zeros = []
    for k in range(width):
        mask = 0
        for pos, i in enumerate(init):
            if pos != k:
                mask |= 1 << pos
        zeros.append(mask)

    need = width - 2
    for pos in range(width, len(order)):
        a = rows[order[pos]]
        vals = [_dot(a, r) for r in rays]
        plus = [k for k, v in enumerate(vals) if v > 0]
        if not plus:
            bit = 1 << pos
            zeros = [z | bit if v == 0 else z for z, v in zip(zeros, vals)]
            continue
        minus = [k for k, v in enumerate(vals) if v < 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        new_rays = []
        new_zeros = []
        keep = minus + zero
        for p in plus:
            zp = zeros[p]
            for q in minus:
                common = zp & zeros[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for k in range(len(rays)):
                    if k != p and k != q and (zeros[k] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], vals[q]
                r = [-vq * x + vp * y for x, y in zip(rays[p], rays[q])]
                new_rays.append(primitive(r))
                new_zeros.append(common | (1 << pos))
        bit = 1 << pos
        rays = [rays[k] for k in keep] + new_rays
        zeros = [zeros[k] | (bit if vals[k] == 0 else 0) for k in keep] + new_zeros
        if not rays:
            break
    return rays
