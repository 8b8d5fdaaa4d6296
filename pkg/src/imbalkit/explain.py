"""Model-agnostic attributions (Shapley, LIME) and model-specific importances."""

from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .learners.base import TrainedModel, child_rng, predict_proba
from .learners.forest import RandomForestModel
from .learners.gbt import GbtModel
from .metrics import evaluate, roc_auc

__all__ = [
    "Attribution",
    "LimeConfig",
    "SurrogateFit",
    "ImportanceReport",
    "ExplainError",
    "shapley_exact",
    "shapley_sampled",
    "lime_explain",
    "impurity_importance",
    "gbt_importances",
    "permutation_importance",
]

MAX_EXACT_FEATURES = 15


class ExplainError(ValueError):
    pass


@dataclass(frozen=True)
class Attribution:
    values: np.ndarray        # per-feature phi
    base_value: float         # expected prediction over the background
    prediction: float
    method: str


@dataclass(frozen=True)
class SurrogateFit:
    coefficients: np.ndarray
    intercept: float
    weighted_r2: float
    kernel_weights: np.ndarray


@dataclass(frozen=True)
class ImportanceReport:
    scores: np.ndarray        # nonnegative per-feature scores
    method: str
    raw_scores: np.ndarray | None = None

    def normalized(self) -> np.ndarray:
        total = self.scores.sum()
        return self.scores / total if total > 0 else self.scores


def _coalition_values(predict, x, background, masks):
    """v(S) for each subset mask: mean prediction with features outside S
    replaced by background-row values (interventional replacement)."""
    x = np.asarray(x, dtype=float)
    bg = np.asarray(background, dtype=float)
    n_bg, d = bg.shape
    out = np.empty(len(masks))
    for i, mask in enumerate(masks):
        hybrid = bg.copy()
        idx = [j for j in range(d) if mask >> j & 1]
        if idx:
            hybrid[:, idx] = x[idx]
        out[i] = float(np.mean(predict(hybrid)))
    return out


def shapley_exact(predict, x, background, max_features: int = MAX_EXACT_FEATURES
                  ) -> Attribution:
    """Exact Shapley attribution by subset enumeration.

    phi_j averages v(S + j) - v(S) over all subsets S of the other features,
    weighted |S|!(d-|S|-1)!/d!.
    """
    x = np.asarray(x, dtype=float)
    bg = np.atleast_2d(np.asarray(background, dtype=float))
    if bg.shape[0] == 0:
        raise ExplainError("background must be nonempty")
    d = x.size
    if d > max_features:
        raise ExplainError(
            f"{d} features exceed the exact limit {max_features}; use shapley_sampled"
        )
    masks = list(range(1 << d))
    v = _coalition_values(predict, x, bg, masks)
    fact = [math.factorial(k) for k in range(d + 1)]
    phi = np.zeros(d)
    for mask in masks:
        s = bin(mask).count("1")
        for j in range(d):
            if mask >> j & 1:
                continue
            w = fact[s] * fact[d - s - 1] / fact[d]
            phi[j] += w * (v[mask | (1 << j)] - v[mask])
    prediction = float(np.asarray(predict(x[None, :]))[0])
    return Attribution(values=phi, base_value=float(v[0]), prediction=prediction,
                       method="shapley-exact")


def shapley_sampled(predict, x, background, n_permutations: int, seed: int = 0
                    ) -> Attribution:
    """Permutation-sampling Shapley estimator.

    When n_permutations is a multiple of d! (d small), orderings are
    enumerated in full blocks, so complete coverage reproduces the exact
    values; otherwise the remainder is sampled uniformly.
    """
    if n_permutations < 1:
        raise ExplainError("n_permutations must be >= 1")
    x = np.asarray(x, dtype=float)
    bg = np.atleast_2d(np.asarray(background, dtype=float))
    d = x.size
    rng = child_rng(seed, 40)
    perms = []
    if d <= 7:
        all_perms = list(itertools.permutations(range(d)))
        full, rem = divmod(n_permutations, len(all_perms))
        perms.extend(all_perms * full)
        perms.extend(tuple(rng.permutation(d)) for _ in range(rem))
    else:
        perms.extend(tuple(rng.permutation(d)) for _ in range(n_permutations))

    cache: dict[int, float] = {}

    def v(mask: int) -> float:
        if mask not in cache:
            cache[mask] = _coalition_values(predict, x, bg, [mask])[0]
        return cache[mask]

    phi = np.zeros(d)
    for perm in perms:
        mask = 0
        prev = v(0)
        for j in perm:
            mask |= 1 << int(j)
            cur = v(mask)
            phi[j] += cur - prev
            prev = cur
    phi /= len(perms)
    prediction = float(np.asarray(predict(x[None, :]))[0])
    return Attribution(values=phi, base_value=v(0), prediction=prediction,
                       method="shapley-sampled")


@dataclass(frozen=True)
class LimeConfig:
    sigma: float
    n_samples: int
    ridge: float = 1e-3
    column_kinds: tuple[str, ...] = ()        # "continuous" or "categorical" per column
    column_stds: np.ndarray | None = None
    column_means: np.ndarray | None = None
    # per categorical column index: (codes, probabilities)
    categorical_marginals: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.sigma <= 0:
            raise ExplainError("sigma must be positive")

    @classmethod
    def from_training(cls, X, column_kinds=None, n_samples: int = 1000,
                      sigma: float | None = None, ridge: float = 1e-3) -> "LimeConfig":
        X = np.asarray(X, dtype=float)
        d = X.shape[1]
        kinds = tuple(column_kinds) if column_kinds else ("continuous",) * d
        if sigma is None:
            sigma = 0.75 * math.sqrt(d)
        stds = X.std(axis=0)
        marginals = {}
        for j, kind in enumerate(kinds):
            if kind == "categorical":
                codes, counts = np.unique(X[:, j], return_counts=True)
                marginals[j] = (codes, counts / counts.sum())
        if n_samples < d + 1:
            raise ExplainError("n_samples must be at least d + 1")
        return cls(sigma=sigma, n_samples=n_samples, ridge=ridge, column_kinds=kinds,
                   column_stds=stds, column_means=X.mean(axis=0),
                   categorical_marginals=marginals)


def lime_explain(predict, x, config: LimeConfig, seed: int = 0) -> SurrogateFit:
    """Weighted-ridge local surrogate around one instance.

    Perturbations: Gaussian noise scaled by training std for continuous
    columns, marginal resampling for categorical ones. Kernel weights are
    exp(-||z - x||^2 / sigma^2) on standardized columns.
    """
    x = np.asarray(x, dtype=float)
    d = x.size
    rng = child_rng(seed, 41)
    stds = config.column_stds if config.column_stds is not None else np.ones(d)
    stds = np.where(stds > 0, stds, 1.0)
    kinds = config.column_kinds or ("continuous",) * d

    Z = np.tile(x, (config.n_samples, 1))
    for j, kind in enumerate(kinds):
        if kind == "categorical" and j in config.categorical_marginals:
            codes, probs = config.categorical_marginals[j]
            Z[:, j] = rng.choice(codes, size=config.n_samples, p=probs)
        else:
            Z[:, j] = x[j] + rng.standard_normal(config.n_samples) * stds[j]
    Z[0] = x  # anchor the instance itself

    dist2 = np.sum(((Z - x) / stds) ** 2, axis=1)
    w = np.exp(-dist2 / (config.sigma ** 2))
    y = np.asarray(predict(Z), dtype=float)

    lam = config.ridge
    for attempt in range(6):
        try:
            coef, intercept = _weighted_ridge(Z, y, w, lam)
            break
        except np.linalg.LinAlgError:
            lam *= 100.0
            warnings.warn(f"singular LIME design; ridge raised to {lam}", stacklevel=2)
    else:
        raise ExplainError("LIME surrogate fit failed even with raised ridge")

    y_hat = Z @ coef + intercept
    y_bar = np.sum(w * y) / np.sum(w)
    ss_res = np.sum(w * (y - y_hat) ** 2)
    ss_tot = np.sum(w * (y - y_bar) ** 2)
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return SurrogateFit(coefficients=coef, intercept=float(intercept),
                        weighted_r2=float(r2), kernel_weights=w)


def _weighted_ridge(Z, y, w, lam):
    n, d = Z.shape
    A = np.column_stack([Z, np.ones(n)])
    WA = A * w[:, None]
    gram = A.T @ WA
    reg = np.eye(d + 1) * lam
    reg[d, d] = 0.0  # intercept unpenalized
    beta = np.linalg.solve(gram + reg, A.T @ (w * y))
    return beta[:d], beta[d]


def impurity_importance(model: RandomForestModel) -> ImportanceReport:
    """Total sample-weighted impurity decrease per feature, summed over trees."""
    if not isinstance(model, RandomForestModel):
        raise ExplainError("impurity importance requires a random-forest model")
    d = len(model.feature_names)
    scores = np.zeros(d)

    def walk(node):
        if node.is_leaf:
            return
        dec = (node.n_samples * node.impurity
               - node.left.n_samples * node.left.impurity
               - node.right.n_samples * node.right.impurity)
        scores[node.feature] += dec
        walk(node.left)
        walk(node.right)

    for root in model.trees:
        walk(root)
    return ImportanceReport(scores=np.maximum(scores, 0.0), method="impurity")


def gbt_importances(model: GbtModel) -> tuple[ImportanceReport, ImportanceReport,
                                              ImportanceReport]:
    """(split-count, total-gain, per-iteration mean loss reduction) reports."""
    if not isinstance(model, GbtModel):
        raise ExplainError("gbt importances require a gbt model")
    d = len(model.feature_names)
    counts = np.zeros(d)
    gains = np.zeros(d)
    for rec in model.split_records:
        counts[rec.feature] += 1
        gains[rec.feature] += rec.gain
    n_iter = max(len(model.trees), 1)
    loss_reduction = gains / n_iter
    return (
        ImportanceReport(scores=counts, method="split-count"),
        ImportanceReport(scores=gains, method="gain"),
        ImportanceReport(scores=loss_reduction, method="loss-reduction"),
    )


def permutation_importance(model: TrainedModel, data, metric: str = "accuracy",
                           n_repeats: int = 5, seed: int = 0,
                           predict=None) -> ImportanceReport:
    """Baseline-metric drop after shuffling each column, averaged over repeats.

    Negative raw drops are clamped to 0 in `scores`; raw values are retained.
    """
    values = data.values
    y = data.target

    def score(vals):
        probs = predict(vals) if predict is not None else predict_proba(model, vals)
        if metric == "accuracy":
            return float(np.mean((probs >= 0.5).astype(int) == y))
        if metric == "auc":
            return roc_auc(probs, y)
        raise ExplainError(f"unknown metric {metric!r}")

    baseline = score(values)
    d = values.shape[1]
    raw = np.zeros(d)
    for j in range(d):
        drops = []
        for r in range(n_repeats):
            rng = child_rng(seed, 42, j, r)
            shuffled = values.copy()
            shuffled[:, j] = rng.permutation(shuffled[:, j])
            drops.append(baseline - score(shuffled))
        raw[j] = float(np.mean(drops))
    return ImportanceReport(scores=np.maximum(raw, 0.0), method="permutation",
                            raw_scores=raw)
