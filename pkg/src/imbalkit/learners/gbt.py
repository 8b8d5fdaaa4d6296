"""Gradient-boosted trees on logistic loss with second-order leaf values.

One implementation covers the boosted-tree family: L2 leaf regularization,
optional histogram-binned split candidates, and optional ordered target
statistics for integer-coded categorical columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import LearnerError, ModelSpec, TrainedModel, child_rng
from .linear import sigmoid

__all__ = ["GbtModel", "SplitRecord", "ordered_target_statistics"]


def ordered_target_statistics(column, target, permutation, prior: float,
                              smoothing: float = 1.0) -> np.ndarray:
    """Leakage-resistant categorical encoding from a random permutation.

    For the row at permutation position t, the encoding is
    (sum of targets of strictly earlier rows with the same category +
    smoothing * prior) / (count of those rows + smoothing).
    """
    col = np.asarray(column)
    y = np.asarray(target, dtype=float)
    perm = np.asarray(permutation)
    if perm.shape != col.shape or sorted(perm.tolist()) != list(range(col.size)):
        raise LearnerError("permutation must be a bijection over the rows")
    if smoothing <= 0:
        raise LearnerError("smoothing must be positive")
    out = np.empty(col.size, dtype=float)
    sums: dict = {}
    counts: dict = {}
    for t in range(col.size):
        r = perm[t]
        c = col[r]
        s = sums.get(c, 0.0)
        k = counts.get(c, 0)
        out[r] = (s + smoothing * prior) / (k + smoothing)
        sums[c] = s + y[r]
        counts[c] = k + 1
    return out


@dataclass
class SplitRecord:
    tree: int
    feature: int
    gain: float


@dataclass
class _RegNode:
    feature: int = -1           # -1 marks a leaf
    threshold: float = 0.0
    value: float = 0.0
    left: "_RegNode | None" = None
    right: "_RegNode | None" = None

    def to_dict(self) -> dict:
        if self.feature < 0:
            return {"value": self.value}
        return {"feature": self.feature, "threshold": self.threshold,
                "left": self.left.to_dict(), "right": self.right.to_dict()}

    @classmethod
    def from_dict(cls, d) -> "_RegNode":
        if "value" in d and "feature" not in d:
            return cls(value=d["value"])
        return cls(feature=d["feature"], threshold=d["threshold"],
                   left=cls.from_dict(d["left"]), right=cls.from_dict(d["right"]))


def _candidate_thresholds(col: np.ndarray, bins: int) -> np.ndarray:
    """Split candidates are midpoints of consecutive distinct values; histogram
    mode (bins > 0) keeps an evenly spaced subset, so a bin budget covering all
    distinct values reproduces the exact candidate set."""
    uniq = np.unique(col)
    if uniq.size < 2:
        return np.empty(0)
    mids = 0.5 * (uniq[:-1] + uniq[1:])
    if bins and mids.size > bins:
        keep = np.unique(np.linspace(0, mids.size - 1, bins).round().astype(int))
        mids = mids[keep]
    return mids


def _build_reg_tree(X, g, h, candidates, lam, max_depth, min_samples_split,
                    records, tree_idx, depth=0):
    G, H = g.sum(), h.sum()
    node = _RegNode(value=-G / (H + lam))
    n = g.size
    if depth >= max_depth or n < max(2, min_samples_split):
        return node
    parent_score = G * G / (H + lam)
    best_gain = 0.0
    best = None
    for j in range(X.shape[1]):
        cands = candidates[j]
        if cands.size == 0:
            continue
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        gp = np.cumsum(g[order])
        hp = np.cumsum(h[order])
        pos = np.searchsorted(xs, cands, side="right")
        valid = (pos > 0) & (pos < n)
        if not np.any(valid):
            continue
        pv = pos[valid] - 1
        GL = gp[pv]
        HL = hp[pv]
        GR = G - GL
        HR = H - HL
        gains = 0.5 * (GL**2 / (HL + lam) + GR**2 / (HR + lam) - parent_score)
        k = int(np.argmax(gains))
        gain = float(gains[k])
        if gain > best_gain + 1e-15:
            best_gain = gain
            best = (j, float(cands[valid][k]))
    if best is None or best_gain <= 1e-12:
        return node
    j, thr = best
    records.append(SplitRecord(tree=tree_idx, feature=j, gain=best_gain))
    mask = X[:, j] <= thr
    node.feature = j
    node.threshold = thr
    node.left = _build_reg_tree(X[mask], g[mask], h[mask], candidates, lam,
                                max_depth, min_samples_split, records, tree_idx, depth + 1)
    node.right = _build_reg_tree(X[~mask], g[~mask], h[~mask], candidates, lam,
                                 max_depth, min_samples_split, records, tree_idx, depth + 1)
    return node


def _reg_predict(root: _RegNode, X: np.ndarray) -> np.ndarray:
    out = np.empty(X.shape[0])
    for i in range(X.shape[0]):
        node = root
        while node.feature >= 0:
            node = node.left if X[i, node.feature] <= node.threshold else node.right
        out[i] = node.value
    return out


class GbtModel(TrainedModel):
    algorithm = "gbt"

    def __init__(self, trees, base_log_odds, learning_rate, l2_leaf_reg,
                 split_records, n_train, feature_names,
                 cat_encoders=None):
        super().__init__(feature_names)
        self.trees = trees
        self.base_log_odds = base_log_odds
        self.learning_rate = learning_rate
        self.l2_leaf_reg = l2_leaf_reg
        self.split_records = split_records
        self.n_train = n_train
        # feature index -> {"prior": float, "stats": {code: stat}}
        self.cat_encoders = cat_encoders or {}

    @classmethod
    def fit(cls, X, y, spec: ModelSpec, feature_names) -> "GbtModel":
        h = spec.hyperparameters
        if h["n_estimators"] < 0 or h["max_depth"] < 1:
            raise LearnerError("degenerate gbt spec")
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n = y.size
        lam = float(h["l2_leaf_reg"])

        cat_encoders = {}
        if h["categorical_handling"] == "ordered-target-stats":
            X = X.copy()
            prior = float(y.mean())
            a = float(h["target_stat_smoothing"])
            for j in h["categorical_features"]:
                rng = child_rng(spec.seed, 2, int(j))
                perm = rng.permutation(n)
                stats = {}
                col = X[:, j]
                for code in np.unique(col):
                    m = col == code
                    stats[float(code)] = (y[m].sum() + a * prior) / (m.sum() + a)
                X[:, j] = ordered_target_statistics(col, y, perm, prior, a)
                cat_encoders[int(j)] = {"prior": prior, "stats": stats}
        elif h["categorical_handling"] != "plain-codes":
            raise LearnerError(f"unknown categorical_handling {h['categorical_handling']!r}")

        prevalence = float(np.clip(y.mean(), 1e-12, 1 - 1e-12))
        base = float(np.log(prevalence / (1.0 - prevalence)))
        candidates = [_candidate_thresholds(X[:, j], int(h["bins"])) for j in range(X.shape[1])]

        raw = np.full(n, base)
        trees = []
        records: list[SplitRecord] = []
        lr = float(h["learning_rate"])
        for t in range(h["n_estimators"]):
            p = sigmoid(raw)
            g = p - y
            hess = p * (1.0 - p)
            root = _build_reg_tree(X, g, hess, candidates, lam, h["max_depth"],
                                   h["min_samples_split"], records, t)
            trees.append(root)
            raw = raw + lr * _reg_predict(root, X)
        return cls(trees, base, lr, lam, records, n, feature_names, cat_encoders)

    def _transform(self, values: np.ndarray) -> np.ndarray:
        if not self.cat_encoders:
            return values
        values = np.asarray(values, dtype=float).copy()
        for j, enc in self.cat_encoders.items():
            col = values[:, j]
            out = np.full(col.size, enc["prior"])
            for code, stat in enc["stats"].items():
                out[col == code] = stat
            values[:, j] = out
        return values

    def raw_score(self, values: np.ndarray) -> np.ndarray:
        values = self._transform(values)
        acc = np.full(values.shape[0], self.base_log_odds)
        for root in self.trees:
            acc += self.learning_rate * _reg_predict(root, values)
        return acc

    def predict_proba_values(self, values: np.ndarray) -> np.ndarray:
        return sigmoid(self.raw_score(values))

    def params_dict(self) -> dict:
        return {
            "trees": [t.to_dict() for t in self.trees],
            "base_log_odds": self.base_log_odds,
            "learning_rate": self.learning_rate,
            "l2_leaf_reg": self.l2_leaf_reg,
            "n_train": self.n_train,
            "split_records": [[r.tree, r.feature, r.gain] for r in self.split_records],
            "cat_encoders": {
                str(j): {"prior": e["prior"],
                         "stats": {repr(k): v for k, v in e["stats"].items()}}
                for j, e in self.cat_encoders.items()
            },
        }

    @classmethod
    def from_params_dict(cls, d, feature_names):
        encs = {
            int(j): {"prior": e["prior"],
                     "stats": {float(k): v for k, v in e["stats"].items()}}
            for j, e in d.get("cat_encoders", {}).items()
        }
        return cls(
            [_RegNode.from_dict(t) for t in d["trees"]],
            d["base_log_odds"], d["learning_rate"], d["l2_leaf_reg"],
            [SplitRecord(*r) for r in d["split_records"]],
            d["n_train"], feature_names, encs,
        )
