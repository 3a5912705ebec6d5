"""numba-compiled twins of :mod:`._numpy`.

Scalar loops where they beat numpy; dense products still go through BLAS.
"""
from __future__ import annotations

import math

import numpy as np
from numba import njit

TAU = 1e-12
MIN_SPLIT_GAIN = 1e-12
TIE_REL = 1e-12


@njit(cache=True, nogil=True)
def rbf_gram(A, B, gamma):
    # the cross term goes through BLAS; an element loop is several times slower
    A = np.ascontiguousarray(A)
    B = np.ascontiguousarray(B)
    sa = (A * A).sum(axis=1)
    sb = (B * B).sum(axis=1)
    cross = A @ B.T
    out = np.empty_like(cross)
    for i in range(out.shape[0]):
        for j in range(out.shape[1]):
            sq = sa[i] + sb[j] - 2.0 * cross[i, j]
            out[i, j] = math.exp(-gamma * (sq if sq > 0.0 else 0.0))
    return out


@njit(cache=True, nogil=True)
def smo_solve(K, y, ub, tol, max_iter, alpha, G):
    n = y.shape[0]
    converged = False
    it = 0
    while it < max_iter:
        gmax = -np.inf
        i = -1
        for t in range(n):
            if y[t] > 0:
                if alpha[t] < ub[t] and -G[t] > gmax:
                    gmax = -G[t]
                    i = t
            else:
                if alpha[t] > 0 and G[t] > gmax:
                    gmax = G[t]
                    i = t
        if i < 0:
            converged = True
            break
        gmax2 = -np.inf
        j = -1
        obj_min = np.inf
        for t in range(n):
            in_low = (y[t] < 0 and alpha[t] < ub[t]) or (y[t] > 0 and alpha[t] > 0)
            if not in_low:
                continue
            yg = y[t] * G[t]
            if yg > gmax2:
                gmax2 = yg
            grad_diff = gmax + yg
            if grad_diff > 0:
                quad = K[i, i] + K[t, t] - 2.0 * K[i, t]
                if quad <= 0:
                    quad = TAU
                obj = -(grad_diff * grad_diff) / quad
                if obj < obj_min:
                    obj_min = obj
                    j = t
        if gmax + gmax2 < tol or j < 0:
            converged = True
            break

        yi, yj = y[i], y[j]
        ci, cj = ub[i], ub[j]
        old_ai, old_aj = alpha[i], alpha[j]
        ai, aj = old_ai, old_aj
        qij = yi * yj * K[i, j]
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
        for t in range(n):
            G[t] += y[t] * yi * K[t, i] * dai + y[t] * yj * K[t, j] * daj
        it += 1
    return it, converged


@njit(cache=True, nogil=True)
def _split_scores(X, y, w, rows, f, col, order, total, c1, out_s, out_t):
    """Scores and thresholds of every candidate cut on feature ``f``; returns the count."""
    m = rows.shape[0]
    for r in range(m):
        col[r] = X[rows[r], f]
    order[:] = np.argsort(col, kind="mergesort")
    nl = 0.0
    L1 = 0.0
    n = 0
    for k in range(m - 1):
        rr = rows[order[k]]
        nl += w[rr]
        if y[rr] == 1:
            L1 += w[rr]
        v0 = col[order[k]]
        v1 = col[order[k + 1]]
        if v0 == v1:
            continue
        L0 = nl - L1
        nr = total - nl
        R1 = c1 - L1
        R0 = nr - R1
        out_s[n] = (L0 * L0 + L1 * L1) / nl + (R0 * R0 + R1 * R1) / nr
        out_t[n] = 0.5 * (v0 + v1)
        n += 1
    return n


@njit(cache=True, nogil=True)
def best_split(X, y, w, rows):
    m = rows.shape[0]
    d = X.shape[1]
    total = 0.0
    c1 = 0.0
    for r in range(m):
        total += w[rows[r]]
        if y[rows[r]] == 1:
            c1 += w[rows[r]]
    c0 = total - c1
    parent_sq = (c0 * c0 + c1 * c1) / total
    parent_gini = 1.0 - parent_sq / total
    col = np.empty(m)
    order = np.empty(m, dtype=np.int64)
    out_s = np.empty((d, m))
    out_t = np.empty((d, m))
    counts = np.empty(d, dtype=np.int64)
    top = -np.inf
    for f in range(d):
        n = _split_scores(X, y, w, rows, f, col, order, total, c1, out_s[f], out_t[f])
        counts[f] = n
        for k in range(n):
            if out_s[f, k] > top:
                top = out_s[f, k]
    if top == -np.inf:
        return -1, 0.0, 0.0
    # the earliest candidate tied with the best wins
    floor = top - TIE_REL * total
    for f in range(d):
        for k in range(counts[f]):
            if out_s[f, k] >= floor:
                gain = parent_gini - (1.0 - out_s[f, k] / total)
                if gain <= MIN_SPLIT_GAIN:
                    return -1, 0.0, 0.0
                return f, out_t[f, k], gain
    return -1, 0.0, 0.0


@njit(cache=True, nogil=True)
def _sigmoid(z):
    if z >= 0:
        return 1.0 / (1.0 + math.exp(-z))
    e = math.exp(z)
    return e / (1.0 + e)


@njit(cache=True, nogil=True)
def sgd_epoch(W1, b1, W2, b2, w3, b3, X, y, order, lr):
    h1, d = W1.shape
    h2 = W2.shape[0]
    z1 = np.empty(h1)
    a1 = np.empty(h1)
    z2 = np.empty(h2)
    a2 = np.empty(h2)
    d1 = np.empty(h1)
    d2 = np.empty(h2)
    nz = np.empty(d, dtype=np.int64)
    for r in order:
        nnz = 0
        for k in range(d):
            if X[r, k] != 0.0:
                nz[nnz] = k
                nnz += 1
        for a in range(h1):
            s = b1[a]
            for q in range(nnz):
                k = nz[q]
                s += W1[a, k] * X[r, k]
            z1[a] = s
            a1[a] = s if s > 0.0 else 0.0
        z3 = b3[0]
        for a in range(h2):
            s = b2[a]
            for c in range(h1):
                s += W2[a, c] * a1[c]
            z2[a] = s
            a2[a] = s if s > 0.0 else 0.0
            z3 += w3[a] * a2[a]
        out = _sigmoid(z3)
        d3 = 2.0 * (out - y[r]) * out * (1.0 - out)
        for a in range(h2):
            d2[a] = d3 * w3[a] if z2[a] > 0.0 else 0.0
        for c in range(h1):
            s = 0.0
            for a in range(h2):
                s += W2[a, c] * d2[a]
            d1[c] = s if z1[c] > 0.0 else 0.0
        for a in range(h2):
            w3[a] -= lr * d3 * a2[a]
        b3[0] -= lr * d3
        for a in range(h2):
            if d2[a] != 0.0:
                for c in range(h1):
                    W2[a, c] -= lr * d2[a] * a1[c]
            b2[a] -= lr * d2[a]
        for c in range(h1):
            if d1[c] != 0.0:
                for q in range(nnz):
                    k = nz[q]
                    W1[c, k] -= lr * d1[c] * X[r, k]
            b1[c] -= lr * d1[c]


@njit(cache=True, nogil=True)
def mlp_forward(W1, b1, W2, b2, w3, b3, X):
    # batched matrix products through BLAS, as in the numpy twin
    X = np.ascontiguousarray(X)
    a1 = X @ np.ascontiguousarray(W1.T)
    for r in range(a1.shape[0]):
        for a in range(a1.shape[1]):
            v = a1[r, a] + b1[a]
            a1[r, a] = v if v > 0.0 else 0.0
    a2 = a1 @ np.ascontiguousarray(W2.T)
    n = X.shape[0]
    out = np.empty(n)
    for r in range(n):
        z3 = b3[0]
        for a in range(a2.shape[1]):
            v = a2[r, a] + b2[a]
            if v > 0.0:
                z3 += w3[a] * v
        out[r] = _sigmoid(z3)
    return out
