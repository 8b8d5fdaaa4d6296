"""Logistic regression trained by batch gradient descent with proximal L1."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LearnerError, ModelSpec, TrainedModel

__all__ = ["LinearParams", "logistic_response", "sigmoid", "LogisticModel"]


def sigmoid(z):
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


@dataclass(frozen=True)
class LinearParams:
    intercept: float
    weights: np.ndarray
    penalty: str = "l2"
    C: float = 1.0  # inverse regularization strength

    def __post_init__(self):
        if self.C <= 0:
            raise LearnerError("C must be positive")
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))


def logistic_response(params: LinearParams, x) -> float:
    """sigma(b0 + b . x) for a single feature vector."""
    x = np.asarray(x, dtype=float)
    if x.shape != params.weights.shape:
        raise LearnerError("feature dimension mismatch")
    return float(sigmoid(params.intercept + params.weights @ x))


def fit_logistic(X: np.ndarray, y: np.ndarray, penalty: str = "l2", C: float = 1.0,
                 max_iter: int = 500, tol: float = 1e-10) -> LinearParams:
    """Batch gradient descent on mean log-loss + penalty/(C*n); prox step for L1.

    Features are standardized internally for conditioning; the returned
    parameters are folded back to the original scale.
    """
    if penalty not in ("l1", "l2"):
        raise LearnerError(f"unknown penalty {penalty!r}")
    n, d = X.shape
    mu = X.mean(axis=0)
    sd = X.std(axis=0)
    sd = np.where(sd > 0, sd, 1.0)
    Z = (X - mu) / sd

    w = np.zeros(d)
    b = 0.0
    lam = 1.0 / (C * n)
    # Lipschitz constant of the mean-logloss gradient is bounded by
    # ||Z||_2^2 / (4n); include the intercept column and the l2 term.
    lip = (np.linalg.norm(Z, 2) ** 2 + n) / (4.0 * n) + (lam if penalty == "l2" else 0.0)
    step = 1.0 / lip
    prev_obj = np.inf
    for _ in range(max_iter):
        p = sigmoid(b + Z @ w)
        grad_w = Z.T @ (p - y) / n
        grad_b = float(np.mean(p - y))
        if penalty == "l2":
            grad_w = grad_w + 2.0 * lam * w
            w = w - step * grad_w
        else:
            w = w - step * grad_w
            w = np.sign(w) * np.maximum(np.abs(w) - step * lam, 0.0)
        b -= step * grad_b
        eps = 1e-12
        p = np.clip(sigmoid(b + Z @ w), eps, 1 - eps)
        obj = -np.mean(y * np.log(p) + (1 - y) * np.log(1 - p))
        obj += lam * (np.sum(np.abs(w)) if penalty == "l1" else np.sum(w ** 2))
        if abs(prev_obj - obj) < tol:
            break
        prev_obj = obj

    w_orig = w / sd
    b_orig = b - float(np.sum(w * mu / sd))
    return LinearParams(intercept=b_orig, weights=w_orig, penalty=penalty, C=C)


class LogisticModel(TrainedModel):
    algorithm = "logistic"

    def __init__(self, params: LinearParams, feature_names):
        super().__init__(feature_names)
        self.params = params

    @classmethod
    def fit(cls, X, y, spec: ModelSpec, feature_names) -> "LogisticModel":
        h = spec.hyperparameters
        params = fit_logistic(X, y, penalty=h["penalty"], C=h["C"],
                              max_iter=h["max_iter"], tol=h["tol"])
        return cls(params, feature_names)

    def predict_proba_values(self, values: np.ndarray) -> np.ndarray:
        return sigmoid(self.params.intercept + values @ self.params.weights)

    def params_dict(self) -> dict:
        return {
            "intercept": self.params.intercept,
            "weights": self.params.weights.tolist(),
            "penalty": self.params.penalty,
            "C": self.params.C,
        }

    @classmethod
    def from_params_dict(cls, d, feature_names):
        return cls(LinearParams(d["intercept"], np.array(d["weights"]),
                                d["penalty"], d["C"]), feature_names)
