"""Float distance-to-polytope via Wolfe's minimum-norm-point algorithm."""
from __future__ import annotations

import numpy as np


def _affine_min(P):
    # minimum-norm point of the affine hull of the rows of P, as weights
    k = P.shape[0]
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = P @ P.T
    M[:k, k] = 1.0
    M[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return sol[:k]


def _minor_cycle(V, S, w):
    # move to the affine minimizer of the corral, dropping points that leave it
    while True:
        alpha = _affine_min(V[S])
        if np.all(alpha > 1e-14):
            return S, alpha
        mask = alpha <= 1e-14
        denom = w[mask] - alpha[mask]
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(denom > 0, w[mask] / denom, np.inf)
        theta = min(1.0, float(ratios.min()))
        w = theta * alpha + (1 - theta) * w
        keep = w > 1e-14
        if keep.all():
            # numerical stall; drop the smallest weight
            keep[int(np.argmin(w))] = False
        S = [s for s, k in zip(S, keep) if k]
        w = w[keep]
        w = w / w.sum()


def min_norm_point(V, tol: float = 1e-12, max_iter: int = 1000, warm=None):
    """Point of ``conv(rows of V)`` closest to the origin.

    ``warm`` is an optional ``(indices, weights)`` corral to start from.
    Returns ``(weights, distance)`` with ``weights`` over all rows.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[0]
    if n == 1:
        return np.ones(1), float(np.linalg.norm(V[0]))
    norms = np.einsum("ij,ij->i", V, V)
    if warm is not None and len(warm[0]):
        S = list(warm[0])
        w = np.asarray(warm[1], dtype=float)
        S, w = _minor_cycle(V, S, w / w.sum())
    else:
        S = [int(np.argmin(norms))]
        w = np.array([1.0])
    x = w @ V[S]
    scale = max(1.0, float(norms.max()))
    for _ in range(max_iter):
        vals = V @ x
        j = int(np.argmin(vals))
        if x @ x - vals[j] <= tol * scale or j in S:
            break
        S, w = _minor_cycle(V, S + [j], np.append(w, 0.0))
        x = w @ V[S]
    weights = np.zeros(n)
    weights[S] = w
    return weights, float(np.linalg.norm(x))


def project(point, V, tol: float = 1e-12, warm=None):
    """Euclidean projection of ``point`` onto ``conv(rows of V)``: ``(proj, dist, weights)``."""
    V = np.asarray(V, dtype=float)
    p = np.asarray(point, dtype=float)
    w, dist = min_norm_point(V - p, tol=tol, warm=warm)
    return w @ V, dist, w
