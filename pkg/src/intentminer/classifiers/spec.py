"""Classifier specifications: kind, hyperparameters and seed."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields
from typing import Any, Union

from ..errors import ConfigError

KINDS = ("dt", "nb", "svm", "ann")


@dataclass(frozen=True)
class DtParams:
    criterion: str = "gini"
    pruning: str = "none"
    # a node is only split when it holds at least this many documents
    min_node_size: int = 2

    def __post_init__(self):
        if self.criterion != "gini":
            raise ConfigError("dt criterion is fixed to gini")
        if self.pruning != "none":
            raise ConfigError("dt pruning is fixed to none")
        if int(self.min_node_size) < 1:
            raise ConfigError("min_node_size must be >= 1")


@dataclass(frozen=True)
class NbParams:
    event_model: str = "multinomial"
    smoothing_alpha: float = 1.0

    def __post_init__(self):
        if self.event_model not in ("multinomial", "bernoulli"):
            raise ConfigError("event_model must be multinomial or bernoulli")
        if not self.smoothing_alpha >= 0:
            raise ConfigError("smoothing_alpha must be >= 0")


@dataclass(frozen=True)
class SvmParams:
    c_penalty: float = 1.0
    kernel: str = "rbf"
    gamma: float = 1.0
    smo_tolerance: float = 1e-3
    max_passes: int = 200

    def __post_init__(self):
        if self.kernel != "rbf":
            raise ConfigError("svm kernel is fixed to rbf")
        if not self.c_penalty > 0:
            raise ConfigError("c_penalty must be > 0")
        if not self.gamma > 0:
            raise ConfigError("gamma must be > 0")
        if not self.smo_tolerance > 0:
            raise ConfigError("smo_tolerance must be > 0")
        if int(self.max_passes) < 1:
            raise ConfigError("max_passes must be >= 1")


@dataclass(frozen=True)
class AnnParams:
    hidden_layers: tuple[int, int] = (100, 100)
    activation: str = "relu"
    output_activation: str = "sigmoid"
    init: str = "xavier"
    learning_rate: float = 0.1
    epochs: int = 1
    loss: str = "mse"
    optimizer: str = "sgd"

    def __post_init__(self):
        hidden = tuple(int(h) for h in self.hidden_layers)
        if len(hidden) != 2 or min(hidden) < 1:
            raise ConfigError("hidden_layers must be two positive layer widths")
        object.__setattr__(self, "hidden_layers", hidden)
        fixed = {"activation": "relu", "output_activation": "sigmoid", "init": "xavier",
                 "loss": "mse", "optimizer": "sgd"}
        for name, value in fixed.items():
            if getattr(self, name) != value:
                raise ConfigError(f"ann {name} is fixed to {value}")
        if not self.learning_rate > 0:
            raise ConfigError("learning_rate must be > 0")
        if int(self.epochs) < 1:
            raise ConfigError("epochs must be >= 1")


Params = Union[DtParams, NbParams, SvmParams, AnnParams]
PARAMS_BY_KIND = {"dt": DtParams, "nb": NbParams, "svm": SvmParams, "ann": AnnParams}


@dataclass(frozen=True)
class ClassifierSpec:
    kind: str
    params: Params = None  # type: ignore[assignment]
    seed: int = 0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"classifier kind must be one of {KINDS}, got {self.kind!r}")
        cls = PARAMS_BY_KIND[self.kind]
        if self.params is None:
            object.__setattr__(self, "params", cls())
        elif isinstance(self.params, dict):
            object.__setattr__(self, "params", _params_from_dict(cls, self.params))
        elif not isinstance(self.params, cls):
            raise ConfigError(f"{self.kind} spec needs {cls.__name__}")

    def to_dict(self) -> dict[str, Any]:
        params = asdict(self.params)
        if "hidden_layers" in params:
            params["hidden_layers"] = list(params["hidden_layers"])
        return {"kind": self.kind, "params": params, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict[str, Any], default_seed: int = 0) -> "ClassifierSpec":
        if "kind" not in data:
            raise ConfigError("classifier spec needs a 'kind'")
        return cls(data["kind"], dict(data.get("params") or {}), int(data.get("seed", default_seed)))


def _params_from_dict(cls, data: dict):
    names = {f.name for f in fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ConfigError(f"unknown {cls.__name__} fields: {sorted(unknown)}")
    return cls(**data)
