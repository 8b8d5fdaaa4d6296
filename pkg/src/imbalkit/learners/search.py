"""Randomized hyperparameter search scored by stratified k-fold accuracy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..data import EncodedMatrix
from .base import LearnerError, ModelSpec, child_rng

__all__ = ["SearchSpace", "CandidateScore", "sample_spec", "tune_random_search"]

# a search space maps hyperparameter name -> one of
#   list of values                    (uniform choice)
#   ("uniform", lo, hi)               (float)
#   ("loguniform", lo, hi)            (float, log scale)
#   ("randint", lo, hi)               (integer, hi exclusive)
SearchSpace = dict


@dataclass(frozen=True)
class CandidateScore:
    spec: ModelSpec
    mean_accuracy: float
    fold_accuracies: tuple[float, ...]


def sample_spec(algorithm: str, space: SearchSpace, rng, seed: int) -> ModelSpec:
    hyper = {}
    for key, dist in space.items():
        if isinstance(dist, (list, tuple)) and dist and dist[0] in (
                "uniform", "loguniform", "randint"):
            kind, lo, hi = dist
            if kind == "uniform":
                hyper[key] = float(rng.uniform(lo, hi))
            elif kind == "loguniform":
                hyper[key] = float(np.exp(rng.uniform(np.log(lo), np.log(hi))))
            else:
                hyper[key] = int(rng.integers(lo, hi))
        elif isinstance(dist, (list, tuple)):
            hyper[key] = dist[int(rng.integers(0, len(dist)))]
        else:
            hyper[key] = dist
    return ModelSpec(algorithm, hyper, seed)


def tune_random_search(algorithm: str, space: SearchSpace, train: EncodedMatrix,
                       n_iter: int = 10, folds: int = 10, seed: int = 0,
                       resampler=None) -> tuple[ModelSpec, list[CandidateScore]]:
    """Sample n_iter specs, score each by mean stratified k-fold accuracy
    (resampling only inside fold-training partitions), return the argmax.
    Ties break toward the earliest-sampled candidate."""
    from ..validation import cross_validate

    if not space:
        raise LearnerError("empty search space")
    rng = child_rng(seed, 20)
    scores: list[CandidateScore] = []
    best = None
    for i in range(n_iter):
        spec = sample_spec(algorithm, space, rng, seed)
        run = cross_validate(spec, train, folds=folds, resampler=resampler,
                             seed=int(child_rng(seed, 21).integers(0, 2**31)))
        acc = run.accuracies
        cand = CandidateScore(spec, float(acc.mean()), tuple(float(a) for a in acc))
        scores.append(cand)
        if best is None or cand.mean_accuracy > best.mean_accuracy:
            best = cand
    return best.spec, scores
