"""Pure-numpy kernels.

Same contracts as :mod:`intentminer.kernels._numba`; every per-iteration
step is vectorised instead of written as an explicit loop.
"""
from __future__ import annotations

import numpy as np

TAU = 1e-12
MIN_SPLIT_GAIN = 1e-12
# split scores this close (relative to node weight) are treated as equal
TIE_REL = 1e-12


def rbf_gram(A: np.ndarray, B: np.ndarray, gamma: float) -> np.ndarray:
    """``exp(-gamma * ||a - b||^2)`` for every row pair of ``A`` and ``B``."""
    sq = (A * A).sum(axis=1)[:, None] + (B * B).sum(axis=1)[None, :] - 2.0 * (A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    return np.exp(-gamma * sq)


def smo_solve(K, y, ub, tol, max_iter, alpha, G):
    """Soft-margin dual by SMO with second-order working-set selection.

    Minimises ``0.5 a'Qa - e'a`` with ``Q_ij = y_i y_j K_ij``, ``0 <= a_i <= ub_i``
    and ``y'a = 0``, starting from the feasible ``alpha`` and its gradient
    ``G = Qa - e``; both are updated in place.  Returns ``(n_iter, converged)``.
    """
    QD = np.diagonal(K).copy()
    pos = y > 0
    neg = ~pos
    converged = False
    it = 0
    while it < max_iter:
        up = (pos & (alpha < ub)) | (neg & (alpha > 0))
        low = (neg & (alpha < ub)) | (pos & (alpha > 0))
        if not up.any() or not low.any():
            converged = True
            break
        score = np.where(up, -y * G, -np.inf)
        i = int(np.argmax(score))
        gmax = score[i]
        yg = y * G
        gmax2 = np.max(np.where(low, yg, -np.inf))
        if gmax + gmax2 < tol:
            converged = True
            break
        grad_diff = gmax + yg
        cand = low & (grad_diff > 0)
        if not cand.any():
            converged = True
            break
        quad = QD[i] + QD - 2.0 * K[i]
        quad = np.where(quad > 0, quad, TAU)
        obj = np.where(cand, -(grad_diff * grad_diff) / quad, np.inf)
        j = int(np.argmin(obj))
        _update_pair(K, y, ub, alpha, G, i, j)
        it += 1
    return it, converged


def _update_pair(K, y, ub, alpha, G, i, j):
    yi, yj = y[i], y[j]
    ci, cj = ub[i], ub[j]
    old_ai, old_aj = alpha[i], alpha[j]
    qij = yi * yj * K[i, j]
    ai, aj = old_ai, old_aj
    if yi != yj:
        quad = K[i, i] + K[j, j] + 2.0 * qij
        if quad <= 0:
            quad = TAU
        delta = (-G[i] - G[j]) / quad
        diff = ai - aj
        ai += delta
        aj += delta
        if diff > 0:
            if aj < 0:
                aj = 0.0
                ai = diff
        else:
            if ai < 0:
                ai = 0.0
                aj = -diff
        if diff > ci - cj:
            if ai > ci:
                ai = ci
                aj = ci - diff
        else:
            if aj > cj:
                aj = cj
                ai = cj + diff
    else:
        quad = K[i, i] + K[j, j] - 2.0 * qij
        if quad <= 0:
            quad = TAU
        delta = (G[i] - G[j]) / quad
        total = ai + aj
        ai -= delta
        aj += delta
        if total > ci:
            if ai > ci:
                ai = ci
                aj = total - ci
        else:
            if aj < 0:
                aj = 0.0
                ai = total
        if total > cj:
            if aj > cj:
                aj = cj
                ai = total - cj
        else:
            if ai < 0:
                ai = 0.0
                aj = total
    alpha[i] = ai
    alpha[j] = aj
    dai = ai - old_ai
    daj = aj - old_aj
    G += (y * yi) * K[:, i] * dai + (y * yj) * K[:, j] * daj


def best_split(X, y, w, rows):
    """Best Gini split of the node holding ``rows``.

    Split candidates are midpoints between consecutive distinct values.
    Returns ``(feature, threshold, gain)``; ``feature == -1`` when no split
    lowers the weighted impurity.  Candidates whose score is within
    ``TIE_REL`` of the best count as tied; ties keep the lowest feature, then
    the lowest threshold.
    """
    yr = y[rows]
    wr = w[rows]
    total = wr.sum()
    c1 = wr[yr == 1].sum()
    c0 = total - c1
    parent_sq = (c0 * c0 + c1 * c1) / total
    parent_gini = 1.0 - parent_sq / total
    Xn = X[rows]
    scores = []
    top = -np.inf
    for f in range(X.shape[1]):
        col = Xn[:, f]
        if col.min() == col.max():
            continue
        order = np.argsort(col, kind="stable")
        v = col[order]
        wy = wr[order]
        l1 = np.cumsum(wy * (yr[order] == 1))
        lw = np.cumsum(wy)
        cut = np.nonzero(v[:-1] != v[1:])[0]
        nl = lw[cut]
        L1 = l1[cut]
        L0 = nl - L1
        nr = total - nl
        R1 = c1 - L1
        R0 = nr - R1
        s = (L0 * L0 + L1 * L1) / nl + (R0 * R0 + R1 * R1) / nr
        scores.append((f, v, cut, s))
        top = max(top, float(s.max()))
    if not scores:
        return -1, 0.0, 0.0
    floor = top - TIE_REL * total
    for f, v, cut, s in scores:
        hit = np.nonzero(s >= floor)[0]
        if hit.size:
            k = int(hit[0])
            gain = parent_gini - (1.0 - s[k] / total)
            if gain <= MIN_SPLIT_GAIN:
                return -1, 0.0, 0.0
            return f, 0.5 * (v[cut[k]] + v[cut[k] + 1]), gain
    return -1, 0.0, 0.0


def _sigmoid(z):
    if z >= 0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


def sgd_epoch(W1, b1, W2, b2, w3, b3, X, y, order, lr):
    """One pass of per-sample SGD on squared error; updates parameters in place."""
    for r in order:
        x = X[r]
        z1 = W1 @ x + b1
        a1 = np.maximum(z1, 0.0)
        z2 = W2 @ a1 + b2
        a2 = np.maximum(z2, 0.0)
        out = _sigmoid(float(w3 @ a2 + b3[0]))
        d3 = 2.0 * (out - y[r]) * out * (1.0 - out)
        d2 = d3 * w3 * (z2 > 0)
        d1 = (W2.T @ d2) * (z1 > 0)
        w3 -= lr * d3 * a2
        b3[0] -= lr * d3
        W2 -= lr * np.outer(d2, a1)
        b2 -= lr * d2
        nz = np.nonzero(x)[0]
        W1[:, nz] -= lr * np.outer(d1, x[nz])
        b1 -= lr * d1


def mlp_forward(W1, b1, W2, b2, w3, b3, X):
    """Sigmoid outputs for every row of ``X``."""
    a1 = np.maximum(X @ W1.T + b1, 0.0)
    a2 = np.maximum(a1 @ W2.T + b2, 0.0)
    z = a2 @ w3 + b3[0]
    out = np.empty_like(z)
    posz = z >= 0
    out[posz] = 1.0 / (1.0 + np.exp(-z[posz]))
    e = np.exp(z[~posz])
    out[~posz] = e / (1.0 + e)
    return out
