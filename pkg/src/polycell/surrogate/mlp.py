"""Small fully connected ReLU regressor written directly in numpy.

Inputs and targets are min-max scaled; the network maps the scaled (P, T)
pair to the scaled objective value.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from polycell.errors import ContractError, DivergenceError, DomainError
from polycell.surrogate.data import Scaler

FORMAT_TAG = "polycell-mlp-v1"
DIVERGENCE_LOSS = 1e6


class OptimizerKind(str, enum.Enum):
    SGD = "sgd"
    ADAM = "adam"


@dataclass(frozen=True)
class MLPConfig:
    input_dim: int = 2
    hidden_layers: tuple[int, ...] = (10, 10)
    output_dim: int = 1

    def __post_init__(self):
        object.__setattr__(self, "hidden_layers", tuple(int(w) for w in self.hidden_layers))
        if self.input_dim < 1 or self.output_dim < 1 or any(w < 1 for w in self.hidden_layers):
            raise DomainError("layer widths must be >= 1")

    @property
    def widths(self) -> tuple[int, ...]:
        return (self.input_dim, *self.hidden_layers, self.output_dim)


@dataclass
class MLP:
    """Weights are stored (fan_in, fan_out) so a layer computes x @ W + b."""

    config: MLPConfig
    weights: list[np.ndarray]
    biases: list[np.ndarray]
    scaler: Scaler | None = None

    def __post_init__(self):
        widths = self.config.widths
        if len(self.weights) != len(widths) - 1 or len(self.biases) != len(widths) - 1:
            raise ContractError("layer count does not match config")
        for k, (w, b) in enumerate(zip(self.weights, self.biases)):
            if w.shape != (widths[k], widths[k + 1]) or b.shape != (widths[k + 1],):
                raise ContractError(f"layer {k} has shapes {w.shape}, {b.shape}")

    def copy(self) -> "MLP":
        return MLP(self.config, [w.copy() for w in self.weights], [b.copy() for b in self.biases], self.scaler)

    @property
    def parameters(self) -> list[np.ndarray]:
        return [p for pair in zip(self.weights, self.biases) for p in pair]

    def predict(self, pressure, temperature) -> np.ndarray:
        """Forward pass in physical units (atm, degC) -> W."""
        if self.scaler is None:
            raise ContractError("network has no scaler; use mlp_forward on scaled inputs")
        x = np.column_stack([np.atleast_1d(pressure), np.atleast_1d(temperature)]).astype(float)
        return self.scaler.inverse_value(mlp_forward(self, self.scaler.transform_inputs(x)))


def mlp_init(config: MLPConfig, seed: int) -> MLP:
    """He-uniform weights U(-sqrt(6/fan_in), sqrt(6/fan_in)) from PCG64(seed); zero biases."""
    rng = np.random.default_rng(seed)
    weights, biases = [], []
    widths = config.widths
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / fan_in)
        weights.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        biases.append(np.zeros(fan_out))
    return MLP(config, weights, biases)


def _check_inputs(net: MLP, x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.config.input_dim:
        raise ContractError(f"expected inputs of width {net.config.input_dim}, got shape {x.shape}")
    return x


def _forward_cache(net: MLP, x: np.ndarray):
    activations = [x]
    pre = []
    a = x
    last = len(net.weights) - 1
    for k, (w, b) in enumerate(zip(net.weights, net.biases)):
        z = a @ w + b
        pre.append(z)
        a = z if k == last else np.maximum(z, 0.0)
        activations.append(a)
    return pre, activations


def mlp_forward(net: MLP, x) -> np.ndarray:
    """Scaled outputs for scaled inputs; returns shape (n,) for a single output."""
    x = _check_inputs(net, x)
    _, acts = _forward_cache(net, x)
    out = acts[-1]
    return out[:, 0] if net.config.output_dim == 1 else out


def mse_loss(net: MLP, x, y) -> float:
    pred = mlp_forward(net, x)
    return float(np.mean((pred - np.asarray(y, dtype=float)) ** 2))


def mlp_gradients(net: MLP, x, y) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Backpropagated gradients of mean((pred - y)^2) w.r.t. weights and biases."""
    x = _check_inputs(net, x)
    y = np.asarray(y, dtype=float).reshape(len(x), -1)
    if len(x) == 0:
        raise DomainError("gradient requires a non-empty batch")
    pre, acts = _forward_cache(net, x)
    delta = 2.0 * (acts[-1] - y) / y.size
    grad_w = [np.empty(0)] * len(net.weights)
    grad_b = [np.empty(0)] * len(net.weights)
    for k in range(len(net.weights) - 1, -1, -1):
        grad_w[k] = acts[k].T @ delta
        grad_b[k] = delta.sum(axis=0)
        if k:
            delta = (delta @ net.weights[k].T) * (pre[k - 1] > 0)
    return grad_w, grad_b


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    epochs: int = 15000
    batch_size: int | None = None  # None -> full batch
    seed: int = 1
    optimizer: OptimizerKind = OptimizerKind.ADAM
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "optimizer", OptimizerKind(self.optimizer))
        if self.learning_rate <= 0:
            raise DomainError("learning_rate must be positive")
        if self.epochs < 1:
            raise DomainError("epochs must be >= 1")
        if self.batch_size is not None and self.batch_size < 1:
            raise DomainError("batch_size must be >= 1")


@dataclass
class _Adam:
    beta1: float
    beta2: float
    eps: float
    m: list[np.ndarray] = field(default_factory=list)
    v: list[np.ndarray] = field(default_factory=list)
    t: int = 0

    def step(self, params, grads, lr):
        if not self.m:
            self.m = [np.zeros_like(p) for p in params]
            self.v = [np.zeros_like(p) for p in params]
        self.t += 1
        c1 = 1.0 - self.beta1**self.t
        c2 = 1.0 - self.beta2**self.t
        for p, g, m, v in zip(params, grads, self.m, self.v):
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            p -= lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


def mlp_train(net: MLP, x, y, config: TrainConfig = TrainConfig()) -> tuple[MLP, list[float]]:
    """Train a copy of `net` on scaled data; returns (trained net, per-epoch loss).

    The recorded loss of an epoch is the full-dataset MSE after its updates.
    Minibatch order is shuffled each epoch from PCG64(config.seed).
    """
    x = _check_inputs(net, x)
    y = np.asarray(y, dtype=float).reshape(len(x))
    n = len(x)
    batch = n if config.batch_size is None else config.batch_size
    if batch > n:
        raise DomainError(f"batch_size {batch} exceeds dataset size {n}")
    net = net.copy()
    rng = np.random.default_rng(config.seed)
    adam = _Adam(config.beta1, config.beta2, config.epsilon)
    history: list[float] = []
    for epoch in range(1, config.epochs + 1):
        order = np.arange(n) if batch == n else rng.permutation(n)
        for start in range(0, n, batch):
            idx = order[start : start + batch]
            gw, gb = mlp_gradients(net, x[idx], y[idx])
            grads = [g for pair in zip(gw, gb) for g in pair]
            if config.optimizer is OptimizerKind.ADAM:
                adam.step(net.parameters, grads, config.learning_rate)
            else:
                for p, g in zip(net.parameters, grads):
                    p -= config.learning_rate * g
        loss = mse_loss(net, x, y)
        if not np.isfinite(loss) or loss > DIVERGENCE_LOSS:
            raise DivergenceError(epoch, loss)
        history.append(loss)
    return net, history


# --- persistence ------------------------------------------------------------


def mlp_to_document(net: MLP) -> dict:
    doc = {
        "format": FORMAT_TAG,
        "config": {
            "input_dim": net.config.input_dim,
            "hidden_layers": list(net.config.hidden_layers),
            "output_dim": net.config.output_dim,
            "hidden_activation": "relu",
            "output_activation": "identity",
        },
        "scaler": None,
        "layers": [
            {"shape": list(w.shape), "weights": w.ravel(order="C").tolist(), "bias": b.tolist()}
            for w, b in zip(net.weights, net.biases)
        ],
    }
    if net.scaler is not None:
        doc["scaler"] = {"min": net.scaler.mins.tolist(), "max": net.scaler.maxs.tolist()}
    return doc


def mlp_from_document(doc: dict) -> MLP:
    if doc.get("format") != FORMAT_TAG:
        raise ContractError(f"unsupported model format {doc.get('format')!r}")
    cfg = doc["config"]
    config = MLPConfig(cfg["input_dim"], tuple(cfg["hidden_layers"]), cfg["output_dim"])
    weights = [np.array(layer["weights"], dtype=float).reshape(layer["shape"]) for layer in doc["layers"]]
    biases = [np.array(layer["bias"], dtype=float) for layer in doc["layers"]]
    scaler = None
    if doc.get("scaler"):
        scaler = Scaler(np.array(doc["scaler"]["min"]), np.array(doc["scaler"]["max"]))
    return MLP(config, weights, biases, scaler)


def dumps(net: MLP) -> str:
    # json writes floats with repr(), which round-trips float64 exactly
    return json.dumps(mlp_to_document(net), indent=1) + "\n"


def load(path: str | Path) -> MLP:
    return mlp_from_document(json.loads(Path(path).read_text()))
