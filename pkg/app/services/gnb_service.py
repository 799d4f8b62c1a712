"""Gaussian naive Bayes over the five energy categories."""
import json
import logging
import math
from collections.abc import Sequence
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from app.core.errors import CorruptModel, EmptyTrainingSet, FormatVersionMismatch, ModelIoError
from app.schemas.dataset import CLASS_COUNT, BinScheme, FeatureVector, LabeledSample, SplitConfig
from app.schemas.model import MODEL_FORMAT_VERSION, GnbModel, ModelMeta
from app.schemas.power import GeoQuery

logger = logging.getLogger(__name__)

VARIANCE_SMOOTHING = 1e-9
ABSOLUTE_VARIANCE_FLOOR = 1e-12
LOG_2PI = math.log(2 * math.pi)

MODEL_FILE_KEYS = ("format_version", "priors", "means", "variances", "bin_edges", "bin_names", "meta")


def variance_floor(features: np.ndarray) -> float:
    """Get 1e-9 × the largest pooled feature variance, or 1e-12 if all are 0."""
    pooled = np.sort(features, axis=0).var(axis=0)
    largest = float(pooled.max())
    return VARIANCE_SMOOTHING * largest if largest > 0 else ABSOLUTE_VARIANCE_FLOOR


def fit(
    train: Sequence[LabeledSample],
    bins: BinScheme,
    query: GeoQuery | None = None,
    split: SplitConfig | None = None,
    fitted_at: str | None = None,
) -> GnbModel:
    """
    Fit class priors and per-class Gaussian parameters.

    Variances are population variances floored at variance_floor. Classes
    absent from training get prior 0. Columns are sorted before reduction so
    the result does not depend on sample order.

    Args:
        train: Labelled training samples
        bins: Bin scheme the labels came from
        query: Query echoed into metadata
        split: Split configuration echoed into metadata
        fitted_at: Timestamp recorded in metadata

    Returns:
        Fitted model

    Raises:
        EmptyTrainingSet: If train is empty
    """
    if not train:
        raise EmptyTrainingSet("Cannot fit on an empty training set")

    features = np.array([s.features.as_tuple() for s in train], dtype=float)
    labels = np.array([s.label for s in train], dtype=int)
    floor = variance_floor(features)
    n_features = features.shape[1]

    priors, means, variances = [], [], []
    for k in range(CLASS_COUNT):
        class_features = np.sort(features[labels == k], axis=0)
        n_k = class_features.shape[0]
        priors.append(n_k / len(train))
        if n_k == 0:
            means.append((0.0,) * n_features)
            variances.append((floor,) * n_features)
            continue
        means.append(tuple(float(m) for m in class_features.mean(axis=0)))
        variances.append(tuple(float(v) for v in np.maximum(class_features.var(axis=0), floor)))

    model = GnbModel(
        priors=tuple(priors),
        means=tuple(means),
        variances=tuple(variances),
        bins=bins,
        meta=ModelMeta(
            query=query,
            split=split,
            fitted_at=fitted_at,
            variance_floor=floor,
            n_train=len(train),
        ),
    )
    logger.info(
        "Fitted GNB on %d samples, class counts %s",
        len(train),
        [int((labels == k).sum()) for k in range(CLASS_COUNT)],
    )
    return model


def gaussian_log_pdf(x: float, mean: float, variance: float) -> float:
    """Log of the normal density N(x; mean, variance)."""
    return -0.5 * (LOG_2PI + math.log(variance)) - (x - mean) ** 2 / (2 * variance)


def _log_joint_matrix(model: GnbModel, features: np.ndarray) -> np.ndarray:
    """Log joint for a batch: (n_samples, n_features) -> (n_samples, n_classes)."""
    means = np.asarray(model.means)
    variances = np.asarray(model.variances)
    priors = np.asarray(model.priors)

    diff = features[:, None, :] - means[None, :, :]
    log_likelihood = (
        -0.5 * (LOG_2PI + np.log(variances))[None, :, :]
        - diff ** 2 / (2 * variances)[None, :, :]
    ).sum(axis=2)

    with np.errstate(divide="ignore"):
        log_priors = np.log(priors)
    return np.where(priors > 0, log_priors + log_likelihood, -np.inf)


def _as_array(features: Sequence[FeatureVector]) -> np.ndarray:
    return np.array([f.as_tuple() for f in features], dtype=float).reshape(-1, 3)


def log_joint(model: GnbModel, f: FeatureVector) -> tuple[float, ...]:
    """Get ln P(C_k) + Σ ln p(x_i | C_k) per class; -inf for prior-0 classes."""
    return tuple(float(v) for v in _log_joint_matrix(model, _as_array([f]))[0])


def argmax_lowest(values: Sequence[float]) -> int:
    """Index of the maximum; ties go to the lowest index."""
    return int(np.argmax(np.asarray(values)))


def predict(model: GnbModel, f: FeatureVector) -> int:
    return argmax_lowest(log_joint(model, f))


def predict_many(model: GnbModel, features: Sequence[FeatureVector]) -> list[int]:
    if not features:
        return []
    return [int(k) for k in np.argmax(_log_joint_matrix(model, _as_array(features)), axis=1)]


def predict_proba(model: GnbModel, f: FeatureVector) -> tuple[float, ...]:
    """Get posteriors: log joint normalised with the max-shift trick."""
    joint = np.asarray(log_joint(model, f))
    shifted = np.exp(joint - joint.max())
    return tuple(float(p) for p in shifted / shifted.sum())


def model_to_document(model: GnbModel) -> dict:
    return {
        "format_version": MODEL_FORMAT_VERSION,
        "priors": list(model.priors),
        "means": [list(row) for row in model.means],
        "variances": [list(row) for row in model.variances],
        "bin_edges": list(model.bins.edges),
        "bin_names": list(model.bins.names),
        "meta": model.meta.model_dump(mode="json"),
    }


def save(model: GnbModel, path: Path) -> None:
    """
    Write the model as versioned JSON.

    Raises:
        ModelIoError: If the file cannot be written
    """
    text = json.dumps(model_to_document(model), indent=2, ensure_ascii=False) + "\n"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise ModelIoError(f"Cannot write model {path}: {e}") from e
    logger.info("Saved model to %s", path)


def load(path: Path) -> GnbModel:
    """
    Read a model written by save.

    Raises:
        ModelIoError: If the file cannot be read
        FormatVersionMismatch: If the file has another format version
        CorruptModel: If the document is malformed or breaks model invariants
    """
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ModelIoError(f"Cannot read model {path}: {e}") from e

    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise CorruptModel(f"Model {path} is not valid JSON: {e}") from e
    if not isinstance(document, dict):
        raise CorruptModel(f"Model {path} is not a JSON object")

    missing = [key for key in MODEL_FILE_KEYS if key not in document]
    if missing:
        raise CorruptModel(f"Model {path} lacks keys: {', '.join(missing)}")
    if document["format_version"] != MODEL_FORMAT_VERSION:
        raise FormatVersionMismatch(
            f"Model {path} has format_version {document['format_version']}, "
            f"expected {MODEL_FORMAT_VERSION}"
        )

    try:
        return GnbModel(
            priors=document["priors"],
            means=document["means"],
            variances=document["variances"],
            bins=BinScheme(edges=document["bin_edges"], names=document["bin_names"]),
            meta=ModelMeta(**document["meta"]),
        )
    except (ValidationError, TypeError) as e:
        raise CorruptModel(f"Model {path} violates model invariants: {e}") from e


class GaussianNB:
    """Estimator-style wrapper around fit / predict / predict_proba."""

    def __init__(self, model: GnbModel | None = None):
        self.model = model

    def fit(self, train: Sequence[LabeledSample], bins: BinScheme, **meta) -> "GaussianNB":
        self.model = fit(train, bins, **meta)
        return self

    def _fitted(self) -> GnbModel:
        if self.model is None:
            raise EmptyTrainingSet("Model is not fitted")
        return self.model

    def predict(self, features: Sequence[FeatureVector]) -> list[int]:
        return predict_many(self._fitted(), features)

    def predict_proba(self, features: Sequence[FeatureVector]) -> list[tuple[float, ...]]:
        return [predict_proba(self._fitted(), f) for f in features]
