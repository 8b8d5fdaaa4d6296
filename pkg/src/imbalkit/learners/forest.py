"""Bootstrap-aggregated forest of entropy decision trees."""

from __future__ import annotations

import numpy as np

from .base import LearnerError, ModelSpec, TrainedModel, child_rng
from .tree import TreeNode, best_entropy_split, entropy_impurity, tree_predict

__all__ = ["RandomForestModel"]


def _build_rf_tree(X, y, max_depth, min_samples_split, max_features, rng, depth=0):
    n = y.size
    pos = int(y.sum())
    node = TreeNode(n_samples=n, impurity=entropy_impurity((n - pos, pos)), value=pos / n)
    if depth >= max_depth or n < min_samples_split or node.impurity == 0.0:
        return node
    d = X.shape[1]
    feats = np.sort(rng.choice(d, size=min(max_features, d), replace=False))
    split = best_entropy_split(X[:, feats], y)
    if split is None:
        return node
    j_local, thr, _ = split
    j = int(feats[j_local])
    mask = X[:, j] <= thr
    node.feature = j
    node.threshold = thr
    node.left = _build_rf_tree(X[mask], y[mask], max_depth, min_samples_split,
                               max_features, rng, depth + 1)
    node.right = _build_rf_tree(X[~mask], y[~mask], max_depth, min_samples_split,
                                max_features, rng, depth + 1)
    return node


class RandomForestModel(TrainedModel):
    """Probability = arithmetic mean of member-tree leaf probabilities."""

    algorithm = "random-forest"

    def __init__(self, trees: list[TreeNode], feature_names):
        super().__init__(feature_names)
        self.trees = trees

    @classmethod
    def fit(cls, X, y, spec: ModelSpec, feature_names) -> "RandomForestModel":
        h = spec.hyperparameters
        n_estimators = h["n_estimators"]
        if n_estimators < 1:
            raise LearnerError("n_estimators must be >= 1")
        d = X.shape[1]
        mf = h["max_features"]
        if mf == "sqrt":
            max_features = max(1, int(np.sqrt(d)))
        elif mf == "all":
            max_features = d
        else:
            max_features = int(mf)
        n = X.shape[0]
        trees = []
        for t in range(n_estimators):
            rng = child_rng(spec.seed, 1, t)
            sample = rng.integers(0, n, size=n)  # bootstrap with replacement
            trees.append(_build_rf_tree(X[sample], y[sample], h["max_depth"], 2,
                                        max_features, rng))
        return cls(trees, feature_names)

    def predict_proba_values(self, values: np.ndarray) -> np.ndarray:
        acc = np.zeros(values.shape[0])
        for root in self.trees:
            acc += tree_predict(root, values)
        return acc / len(self.trees)

    def params_dict(self) -> dict:
        return {"trees": [t.to_dict() for t in self.trees]}

    @classmethod
    def from_params_dict(cls, d, feature_names):
        return cls([TreeNode.from_dict(t) for t in d["trees"]], feature_names)
