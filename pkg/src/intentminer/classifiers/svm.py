"""C-SVC with an RBF kernel trained by SMO.

Identical training rows are merged before solving: a row seen ``w`` times
becomes one dual variable with box ``[0, C * w]``.  The optimum decision
function is the same as for the expanded problem.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .. import kernels
from .spec import SvmParams

log = logging.getLogger(__name__)


def rbf_kernel(x, z, gamma: float) -> float:
    """``exp(-gamma * ||x - z||^2)``."""
    x = np.asarray(x, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    if x.shape != z.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {z.shape}")
    if not gamma > 0:
        raise ValueError("gamma must be positive")
    d = x - z
    return math.exp(-gamma * float(np.dot(d, d)))


@dataclass(frozen=True)
class SmoResult:
    alpha: np.ndarray
    grad: np.ndarray
    bias: float
    n_iter: int
    converged: bool

    def dual_objective(self) -> float:
        """``sum(a) - 0.5 a'Qa`` evaluated from the maintained gradient."""
        # grad = Qa - e  =>  a'Qa = a'(grad + e)
        return float(self.alpha.sum() - 0.5 * self.alpha @ (self.grad + 1.0))


def smo(K: np.ndarray, y_pm: np.ndarray, ub: np.ndarray, tol: float, max_iter: int) -> SmoResult:
    """Solve the dual on a precomputed kernel; ``y_pm`` in {-1, +1}."""
    K = np.ascontiguousarray(K, dtype=np.float64)
    y_pm = np.ascontiguousarray(y_pm, dtype=np.float64)
    ub = np.ascontiguousarray(ub, dtype=np.float64)
    n = y_pm.shape[0]
    alpha = np.zeros(n)
    G = -np.ones(n)
    n_iter, converged = kernels.smo_solve(K, y_pm, ub, float(tol), int(max_iter), alpha, G)
    if not converged:
        log.warning("SMO stopped after %d iterations without reaching tolerance %g", n_iter, tol)
        return SmoResult(alpha, G, _bias(alpha, G, y_pm, ub), int(n_iter), False)
    # SMO stops on the KKT gap; finish with an exact solve on the active set,
    # tightening the gap first when the active set is not yet settled
    inner_tol = float(tol)
    for _ in range(POLISH_ROUNDS):
        polished = _polish(K, y_pm, ub, alpha, G)
        if polished is not None:
            alpha, G = polished
            break
        if np.count_nonzero((alpha > 0) & (alpha < ub)) > POLISH_MAX_FREE:
            break
        inner_tol *= 0.1
        more, ok = kernels.smo_solve(K, y_pm, ub, inner_tol, int(max_iter), alpha, G)
        n_iter += more
        if not ok:
            break
    return SmoResult(alpha, G, _bias(alpha, G, y_pm, ub), int(n_iter), True)


POLISH_MAX_FREE = 500
POLISH_ROUNDS = 6


def _kkt_gap(alpha, G, y, ub) -> float:
    up = ((y > 0) & (alpha < ub)) | ((y < 0) & (alpha > 0))
    low = ((y < 0) & (alpha < ub)) | ((y > 0) & (alpha > 0))
    if not up.any() or not low.any():
        return 0.0
    return float(np.max(-y[up] * G[up]) + np.max(y[low] * G[low]))


def _polish(K, y, ub, alpha, G):
    """Solve the KKT system exactly on the active set SMO converged to.

    Bound variables stay fixed; free ones and the offset come from one
    linear solve.  The result is kept only if it stays inside the box and
    does not worsen the dual objective or the KKT gap.
    """
    free = (alpha > 0) & (alpha < ub)
    F = np.flatnonzero(free)
    if F.size == 0 or F.size > POLISH_MAX_FREE:
        return None
    B = np.flatnonzero(~free)
    Q = (y[:, None] * y[None, :]) * K
    m = F.size
    A = np.zeros((m + 1, m + 1))
    A[:m, :m] = Q[np.ix_(F, F)]
    A[:m, m] = -y[F]
    A[m, :m] = y[F]
    rhs = np.empty(m + 1)
    rhs[:m] = 1.0 - Q[np.ix_(F, B)] @ alpha[B]
    rhs[m] = -(y[B] @ alpha[B])
    sol = np.linalg.lstsq(A, rhs, rcond=None)[0]
    new = alpha.copy()
    new[F] = sol[:m]
    slack = 1e-12 * max(1.0, float(ub.max()))
    if np.any(new[F] < -slack) or np.any(new[F] > ub[F] + slack):
        return None
    new[F] = np.clip(new[F], 0.0, ub[F])
    if abs(y @ new) > 1e-9 * max(1.0, float(ub.sum())):
        return None
    newG = Q @ new - 1.0
    old_obj = alpha.sum() - 0.5 * alpha @ (G + 1.0)
    new_obj = new.sum() - 0.5 * new @ (newG + 1.0)
    if new_obj < old_obj or _kkt_gap(new, newG, y, ub) > _kkt_gap(alpha, G, y, ub):
        return None
    return new, newG


def _bias(alpha, G, y, ub) -> float:
    yg = y * G
    at_ub = alpha >= ub
    at_lb = alpha <= 0
    free = ~(at_ub | at_lb)
    if free.any():
        rho = float(yg[free].mean())
    else:
        upper = np.inf
        lower = -np.inf
        up_mask = (at_ub & (y < 0)) | (at_lb & (y > 0))
        lo_mask = (at_ub & (y > 0)) | (at_lb & (y < 0))
        if up_mask.any():
            upper = float(yg[up_mask].min())
        if lo_mask.any():
            lower = float(yg[lo_mask].max())
        rho = 0.5 * (upper + lower)
    return -rho


@dataclass(frozen=True)
class SvmModel:
    n_features: int
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float
    params: SvmParams
    n_iter: int = 0
    kind: str = "svm"

    def decision_function(self, X: np.ndarray) -> np.ndarray:
        if self.support_vectors.shape[0] == 0:
            return np.full(X.shape[0], self.bias)
        K = kernels.rbf_gram(np.ascontiguousarray(X, dtype=np.float64),
                             self.support_vectors, float(self.params.gamma))
        return K @ self.dual_coef + self.bias

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return (self.decision_function(X) >= 0).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "n_features": self.n_features,
            "support_vectors": [[float(v) for v in row] for row in self.support_vectors],
            "dual_coef": [float(v) for v in self.dual_coef],
            "bias": float(self.bias),
            "n_iter": self.n_iter,
        }

    @classmethod
    def from_dict(cls, data: dict, params: SvmParams) -> "SvmModel":
        d = int(data["n_features"])
        sv = np.array(data["support_vectors"], dtype=np.float64).reshape(-1, d)
        return cls(d, np.ascontiguousarray(sv), np.array(data["dual_coef"], dtype=np.float64),
                   float(data["bias"]), params, int(data.get("n_iter", 0)))


def fit_svm(X: np.ndarray, y: np.ndarray, w: np.ndarray, params: SvmParams) -> SvmModel:
    """Train on weighted unique rows; ``y`` in {0, 1}."""
    y_pm = np.where(y == 1, 1.0, -1.0)
    K = kernels.rbf_gram(X, X, float(params.gamma))
    ub = params.c_penalty * w
    max_iter = int(params.max_passes) * max(X.shape[0], 50)
    res = smo(K, y_pm, ub, params.smo_tolerance, max_iter)
    sv = res.alpha > 0
    return SvmModel(X.shape[1], np.ascontiguousarray(X[sv]), res.alpha[sv] * y_pm[sv],
                    res.bias, params, res.n_iter)
