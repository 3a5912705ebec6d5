"""Feed-forward network: two ReLU layers, sigmoid output, squared error, plain SGD."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .spec import AnnParams


def xavier_bound(fan_in: int, fan_out: int) -> float:
    return float(np.sqrt(6.0 / (fan_in + fan_out)))


def _sigmoid(z: float) -> float:
    if z >= 0:
        return 1.0 / (1.0 + np.exp(-z))
    e = np.exp(z)
    return e / (1.0 + e)


@dataclass(frozen=True)
class AnnModel:
    """Weights ``W1 (h1, d)``, ``W2 (h2, h1)``, output weights ``w3 (h2,)``, biases."""

    n_features: int
    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray
    w3: np.ndarray
    b3: np.ndarray  # shape (1,)
    params: AnnParams
    kind: str = "ann"

    @property
    def weights(self) -> tuple[np.ndarray, ...]:
        return (self.W1, self.b1, self.W2, self.b2, self.w3, self.b3)

    def predict_proba_yes(self, X: np.ndarray) -> np.ndarray:
        return kernels.mlp_forward(*self.weights, np.ascontiguousarray(X, dtype=np.float64))

    def predict_codes(self, X: np.ndarray) -> np.ndarray:
        return (self.predict_proba_yes(X) >= 0.5).astype(np.int64)

    def to_dict(self) -> dict:
        return {
            "n_features": self.n_features,
            "layers": [
                {"weight": self.W1.tolist(), "bias": self.b1.tolist()},
                {"weight": self.W2.tolist(), "bias": self.b2.tolist()},
                {"weight": [self.w3.tolist()], "bias": self.b3.tolist()},
            ],
        }

    @classmethod
    def from_dict(cls, data: dict, params: AnnParams) -> "AnnModel":
        d = int(data["n_features"])
        l1, l2, l3 = data["layers"]
        W1 = np.array(l1["weight"], dtype=np.float64).reshape(-1, d)
        W2 = np.array(l2["weight"], dtype=np.float64).reshape(-1, W1.shape[0])
        return cls(d, W1, np.array(l1["bias"], dtype=np.float64), W2,
                   np.array(l2["bias"], dtype=np.float64),
                   np.array(l3["weight"], dtype=np.float64).reshape(-1),
                   np.array(l3["bias"], dtype=np.float64).reshape(1), params)


def init_network(n_features: int, params: AnnParams, rng: np.random.Generator) -> AnnModel:
    """Xavier-uniform weights, zero biases."""
    h1, h2 = params.hidden_layers
    W1 = rng.uniform(-1, 1, size=(h1, n_features)) * xavier_bound(n_features, h1)
    W2 = rng.uniform(-1, 1, size=(h2, h1)) * xavier_bound(h1, h2)
    w3 = rng.uniform(-1, 1, size=h2) * xavier_bound(h2, 1)
    return AnnModel(n_features, W1, np.zeros(h1), W2, np.zeros(h2), w3, np.zeros(1), params)


def ann_forward(model: AnnModel, x) -> float:
    """Output in (0, 1) for one dense input vector."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected a vector of length {model.n_features}, got shape {x.shape}")
    a1 = np.maximum(model.W1 @ x + model.b1, 0.0)
    a2 = np.maximum(model.W2 @ a1 + model.b2, 0.0)
    return float(_sigmoid(float(model.w3 @ a2 + model.b3[0])))


def ann_gradient(model: AnnModel, x, y: float) -> dict[str, np.ndarray]:
    """Backprop gradient of ``(forward(x) - y)^2``; ReLU subgradient 0 at the kink."""
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (model.n_features,):
        raise ValueError(f"expected a vector of length {model.n_features}, got shape {x.shape}")
    z1 = model.W1 @ x + model.b1
    a1 = np.maximum(z1, 0.0)
    z2 = model.W2 @ a1 + model.b2
    a2 = np.maximum(z2, 0.0)
    out = _sigmoid(float(model.w3 @ a2 + model.b3[0]))
    d3 = 2.0 * (out - y) * out * (1.0 - out)
    d2 = d3 * model.w3 * (z2 > 0)
    d1 = (model.W2.T @ d2) * (z1 > 0)
    return {
        "W1": np.outer(d1, x),
        "b1": d1,
        "W2": np.outer(d2, a1),
        "b2": d2,
        "w3": d3 * a2,
        "b3": np.array([d3]),
    }


def fit_ann(X: np.ndarray, y: np.ndarray, params: AnnParams, seed: int) -> AnnModel:
    """``epochs`` passes of per-row SGD, rows reshuffled every epoch."""
    rng = np.random.default_rng(seed)
    model = init_network(X.shape[1], params, rng)
    W1, b1, W2, b2, w3, b3 = (np.ascontiguousarray(a.copy()) for a in model.weights)
    X = np.ascontiguousarray(X, dtype=np.float64)
    target = y.astype(np.float64)
    for _ in range(int(params.epochs)):
        order = rng.permutation(X.shape[0]).astype(np.int64)
        kernels.sgd_epoch(W1, b1, W2, b2, w3, b3, X, target, order, float(params.learning_rate))
    return AnnModel(X.shape[1], W1, b1, W2, b2, w3, b3, params)
