"""Two-tier stacking: base classifiers under a logistic meta-learner trained
on out-of-fold base probabilities."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .data import EncodedMatrix, smote
from .learners.base import (
    LearnerError,
    ModelSpec,
    child_rng,
    deserialize_model,
    fit_model,
    predict_proba,
    serialize_model,
)
from .validation import SmoteSettings, stratified_folds

__all__ = ["StackingSpec", "StackedModel", "stack_fit", "stack_predict_proba",
           "serialize_stacked", "deserialize_stacked"]

STACK_FORMAT = "imbalkit-stacked-model"
STACK_VERSION = 1


@dataclass(frozen=True)
class StackingSpec:
    base_specs: tuple[ModelSpec, ...]
    meta_spec: ModelSpec = field(default_factory=lambda: ModelSpec("logistic"))
    oof_folds: int = 5
    seed: int = 0
    resampler: SmoteSettings | None = None

    def __post_init__(self):
        object.__setattr__(self, "base_specs", tuple(self.base_specs))
        if len(self.base_specs) < 1:
            raise LearnerError("need at least one base spec")
        if self.meta_spec.algorithm != "logistic":
            raise LearnerError("the meta-learner must be logistic")
        if self.oof_folds < 2:
            raise LearnerError("oof_folds must be >= 2")


@dataclass
class StackedModel:
    base_models: list
    meta_model: object
    oof_matrix: np.ndarray            # (n_train, n_bases) held-out base probabilities
    oof_fold_assignment: np.ndarray   # fold index per training row (diagnostic)
    base_algorithms: tuple[str, ...]


def stack_fit(spec: StackingSpec, train: EncodedMatrix,
              base_fit=None) -> StackedModel:
    """Fit bases and meta-learner with out-of-fold meta features.

    Every row's meta feature comes from a fold model that never saw that row;
    resampling, when configured, is applied inside each fold-training
    partition only. Bases are refit on the full training set for inference.

    base_fit(spec, matrix) -> model overrides base training (test hook).
    """
    fit = base_fit or fit_model
    n = train.n_rows
    assignment = stratified_folds(train.target, spec.oof_folds, spec.seed)
    oof = np.empty((n, len(spec.base_specs)))
    for f in range(spec.oof_folds):
        val_mask = assignment == f
        fold_train = train.take(np.flatnonzero(~val_mask))
        if spec.resampler is not None:
            fold_seed = int(child_rng(spec.seed, 30, f).integers(0, 2**31))
            fold_train = smote(fold_train, k_neighbors=spec.resampler.k_neighbors,
                               seed=fold_seed, rounding=spec.resampler.rounding)
        fold_val = train.take(np.flatnonzero(val_mask))
        for b, base_spec in enumerate(spec.base_specs):
            try:
                model = fit(base_spec, fold_train)
            except Exception as exc:
                raise LearnerError(f"base {b} ({base_spec.algorithm}) failed: {exc}") from exc
            oof[val_mask, b] = predict_proba(model, fold_val)

    meta_train = EncodedMatrix(
        oof, train.target,
        tuple(f"base_{b}_{s.algorithm}" for b, s in enumerate(spec.base_specs)),
        train.row_ids,
    )
    meta_model = fit_model(spec.meta_spec, meta_train)

    full_train = train
    if spec.resampler is not None:
        full_seed = int(child_rng(spec.seed, 31).integers(0, 2**31))
        full_train = smote(full_train, k_neighbors=spec.resampler.k_neighbors,
                           seed=full_seed, rounding=spec.resampler.rounding)
    base_models = []
    for b, base_spec in enumerate(spec.base_specs):
        try:
            base_models.append(fit(base_spec, full_train))
        except Exception as exc:
            raise LearnerError(f"base {b} ({base_spec.algorithm}) failed: {exc}") from exc
    return StackedModel(base_models, meta_model, oof, assignment,
                        tuple(s.algorithm for s in spec.base_specs))


def stack_predict_proba(model: StackedModel, X) -> np.ndarray:
    """Meta-learner applied to the vector of base class-1 probabilities."""
    base_probs = np.column_stack([predict_proba(m, X) for m in model.base_models])
    return np.clip(model.meta_model.predict_proba_values(base_probs), 0.0, 1.0)


def serialize_stacked(model: StackedModel) -> dict:
    return {
        "format": STACK_FORMAT,
        "version": STACK_VERSION,
        "bases": [serialize_model(m) for m in model.base_models],
        "meta": serialize_model(model.meta_model),
        "oof_matrix": model.oof_matrix.tolist(),
        "oof_fold_assignment": model.oof_fold_assignment.tolist(),
    }


def deserialize_stacked(doc: dict) -> StackedModel:
    if doc.get("format") != STACK_FORMAT:
        raise LearnerError("not a stacked-model document")
    if doc.get("version") != STACK_VERSION:
        raise LearnerError(f"unsupported stacked-model version {doc.get('version')!r}")
    bases = [deserialize_model(d) for d in doc["bases"]]
    return StackedModel(bases, deserialize_model(doc["meta"]),
                        np.array(doc["oof_matrix"], dtype=float),
                        np.array(doc["oof_fold_assignment"], dtype=np.int64),
                        tuple(m.algorithm for m in bases))
