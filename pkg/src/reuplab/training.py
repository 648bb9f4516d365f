"""Target generation, datasets, Adam optimization of the full-batch MSE
loss, and R^2 evaluation.

Targets are random Fourier series of fixed degree with standard-normal
coefficients, rescaled so the variance over [0, 2pi] (= sum (a_k^2+b_k^2)/2)
is exactly one; the constant term a_0 is rescaled by the same factor to keep
target magnitudes comparable across draws.  Training is full batch with the
loss gradient obtained by the chain rule through the exact data Jacobian,
so identical inputs reproduce bit-identical results.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .circuit import ArchitectureSpec, forward_batch, validate_parameters
from .errors import InternalConsistencyError, InvalidInputError, UndefinedMetricError


@dataclass(frozen=True)
class TargetFunction:
    """f*(x) = a0 + sum_k a_k cos(kx) + b_k sin(kx), unit variance."""

    degree: int
    a0: float
    a: np.ndarray
    b: np.ndarray


@dataclass(frozen=True)
class Dataset:
    train_x: np.ndarray
    train_y: np.ndarray
    test_x: np.ndarray
    test_y: np.ndarray


@dataclass(frozen=True)
class TrainConfig:
    learning_rate: float = 1e-3
    steps: int = 5000
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise InvalidInputError("learning_rate must be positive")
        if self.steps < 1:
            raise InvalidInputError("steps must be >= 1")


@dataclass(frozen=True)
class TrainResult:
    final_theta: np.ndarray
    loss_curve: np.ndarray  # length steps + 1, entry t = loss at step t
    r2_train: float
    r2_test: float
    wall_steps: int


def sample_target(degree: int, rng: np.random.Generator) -> TargetFunction:
    """Draw a_0, a_k, b_k ~ N(0,1) and rescale everything to unit variance."""
    if degree < 1:
        raise InvalidInputError("degree must be >= 1")
    while True:
        a0 = rng.normal()
        a = rng.normal(size=degree)
        b = rng.normal(size=degree)
        var = float(np.sum(a ** 2 + b ** 2) / 2.0)
        if var > 0:
            break
    scale = 1.0 / math.sqrt(var)
    return TargetFunction(degree=degree, a0=a0 * scale, a=a * scale, b=b * scale)


def eval_target(t: TargetFunction, x) -> np.ndarray | float:
    x = np.asarray(x, dtype=float)
    k = np.arange(1, t.degree + 1)
    kx = np.multiply.outer(x, k)
    val = t.a0 + np.cos(kx) @ t.a + np.sin(kx) @ t.b
    return float(val) if val.ndim == 0 else val


def sample_dataset(t: TargetFunction, n_train: int, n_test: int,
                   rng: np.random.Generator) -> Dataset:
    """Uniform draws on [0, 2pi] with exact labels; train and test use
    separate child streams so the splits never share points."""
    if n_train < 1 or n_test < 1:
        raise InvalidInputError("dataset sizes must be >= 1")
    train_rng, test_rng = rng.spawn(2)
    train_x = train_rng.uniform(0.0, 2.0 * np.pi, n_train)
    test_x = test_rng.uniform(0.0, 2.0 * np.pi, n_test)
    return Dataset(
        train_x=train_x,
        train_y=eval_target(t, train_x),
        test_x=test_x,
        test_y=eval_target(t, test_x),
    )


# ---------------------------------------------------------------------------
# optimizer
# ---------------------------------------------------------------------------

def adam_init(p: int) -> tuple[np.ndarray, np.ndarray, int]:
    return np.zeros(p), np.zeros(p), 0


def adam_step(state, grad, theta, config: TrainConfig):
    """One bias-corrected Adam update; returns (theta, m, v, t)."""
    m, v, t = state
    grad = np.asarray(grad, dtype=float)
    t = t + 1
    m = config.beta1 * m + (1.0 - config.beta1) * grad
    v = config.beta2 * v + (1.0 - config.beta2) * grad ** 2
    m_hat = m / (1.0 - config.beta1 ** t)
    v_hat = v / (1.0 - config.beta2 ** t)
    theta = theta - config.learning_rate * m_hat / (np.sqrt(v_hat) + config.epsilon)
    return theta, m, v, t


# ---------------------------------------------------------------------------
# loss machinery
# ---------------------------------------------------------------------------

def _shift_offsets(p: int) -> np.ndarray:
    """Row 0: unshifted; rows 1+2j / 2+2j: +-pi/2 on parameter j."""
    d = np.zeros((2 * p + 1, p))
    idx = np.arange(p)
    d[1 + 2 * idx, idx] = np.pi / 2
    d[2 + 2 * idx, idx] = -np.pi / 2
    return d


def mse_loss_and_gradient(spec: ArchitectureSpec, theta, xs, ys):
    """Full-batch MSE loss, its exact gradient (chain rule through the data
    Jacobian), and the predictions, in one batched circuit evaluation."""
    theta = validate_parameters(spec, theta)
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    f = forward_batch(spec, theta[None, :] + _shift_offsets(theta.size), xs)
    preds = f[0]
    jac = ((f[1::2] - f[2::2]) / 2.0).T  # (n, P) data Jacobian
    resid = preds - ys
    loss = float(np.mean(resid ** 2))
    grad = (2.0 / xs.size) * (jac.T @ resid)
    return loss, grad, preds


def train(spec: ArchitectureSpec, dataset: Dataset, config: TrainConfig,
          rng: np.random.Generator) -> TrainResult:
    """Adam on the full-batch MSE loss from a uniform-[0, 2pi] random
    initialization; deterministic given (spec, dataset, config, rng)."""
    p = spec.n_parameters
    theta = rng.uniform(0.0, 2.0 * np.pi, p)
    offsets = _shift_offsets(p)
    state = adam_init(p)
    losses = np.empty(config.steps + 1)
    n = dataset.train_x.size
    for step in range(config.steps):
        f = forward_batch(spec, theta[None, :] + offsets, dataset.train_x)
        resid = f[0] - dataset.train_y
        loss = float(np.mean(resid ** 2))
        if not np.isfinite(loss):
            raise InternalConsistencyError(
                f"non-finite loss {loss} at step {step}"
            )
        losses[step] = loss
        jac = ((f[1::2] - f[2::2]) / 2.0).T
        grad = (2.0 / n) * (jac.T @ resid)
        theta, *rest = adam_step(state, grad, theta, config)
        state = tuple(rest)
    train_pred = forward_batch(spec, theta[None, :], dataset.train_x)[0]
    test_pred = forward_batch(spec, theta[None, :], dataset.test_x)[0]
    losses[config.steps] = float(np.mean((train_pred - dataset.train_y) ** 2))
    return TrainResult(
        final_theta=theta,
        loss_curve=losses,
        r2_train=r_squared(train_pred, dataset.train_y),
        r2_test=r_squared(test_pred, dataset.test_y),
        wall_steps=config.steps,
    )


def r_squared(pred, truth) -> float:
    """1 - SS_res / SS_tot; negative when predictions are worse than the
    constant mean predictor."""
    pred = np.asarray(pred, dtype=float)
    truth = np.asarray(truth, dtype=float)
    if pred.shape != truth.shape or pred.ndim != 1 or pred.size < 2:
        raise InvalidInputError("pred and truth must be equal-length, size >= 2")
    ss_tot = float(np.sum((truth - truth.mean()) ** 2))
    if ss_tot == 0.0:
        raise UndefinedMetricError("R^2 undefined for constant truth")
    return 1.0 - float(np.sum((pred - truth) ** 2)) / ss_tot


def l_min(degree: int, n_qubits: int) -> int:
    """Minimum encoding layers for a degree-d target: ceil(d / N)."""
    if degree < 1 or n_qubits < 1:
        raise InvalidInputError("degree and n_qubits must be >= 1")
    return -(-degree // n_qubits)
