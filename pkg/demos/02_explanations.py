"""Walkthrough: explaining a trained model globally and locally.

Trains a gradient-boosted model on the synthetic survey, then compares
split-count/gain importances, permutation importance, sampled Shapley
attributions, and a LIME surrogate for one test instance.

Run with:  python demos/02_explanations.py
"""

import numpy as np

from imbalkit import label_encode, smote, stratified_split
from imbalkit.explain import (
    LimeConfig,
    gbt_importances,
    lime_explain,
    permutation_importance,
    shapley_sampled,
)
from imbalkit.learners.base import ModelSpec, fit_model, predict_proba
from imbalkit.synth import synthetic_dataset


def top(names, scores, k=5):
    order = np.argsort(-np.asarray(scores))[:k]
    return ", ".join(f"{names[i]}={scores[i]:.3f}" for i in order)


def main():
    matrix, _ = label_encode(synthetic_dataset(n=1200, seed=7))
    train, test = stratified_split(matrix, 0.2, seed=0)
    train = smote(train, seed=0)
    names = list(train.column_names)

    model = fit_model(ModelSpec("gbt", {"n_estimators": 80, "learning_rate": 0.1}), train)
    predict = lambda X: predict_proba(model, X)

    splits, gains, _ = gbt_importances(model)
    print("top split-count:", top(names, splits.scores))
    print("top gain:      ", top(names, gains.scores))

    perm = permutation_importance(model, test, metric="auc", n_repeats=3, seed=0)
    print("top permutation:", top(names, perm.scores))

    background = train.values[:30]
    x = test.values[0]
    att = shapley_sampled(predict, x, background, n_permutations=60, seed=0)
    print(f"\ninstance 0: prediction {att.prediction:.3f}, "
          f"baseline {att.base_value:.3f}")
    print("top |Shapley|: ", top(names, np.abs(att.values)))
    # attributions always reconcile with the prediction
    print(f"sum(phi) = {att.values.sum():+.4f} "
          f"(prediction - baseline = {att.prediction - att.base_value:+.4f})")

    config = LimeConfig.from_training(train.values, n_samples=500)
    fit = lime_explain(predict, x, config, seed=0)
    print(f"\nLIME weighted R2 = {fit.weighted_r2:.3f}")
    print("top |LIME coef|:", top(names, np.abs(fit.coefficients)))


if __name__ == "__main__":
    main()
