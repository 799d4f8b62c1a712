"""Gaussian naive Bayes model schemas."""
import math

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.dataset import CLASS_COUNT, FEATURE_NAMES, BinScheme, SplitConfig
from app.schemas.power import GeoQuery

MODEL_FORMAT_VERSION = 1


class ModelMeta(BaseModel):
    """Provenance of a fitted model."""

    model_config = ConfigDict(frozen=True)

    format_version: int = MODEL_FORMAT_VERSION
    query: GeoQuery | None = None
    split: SplitConfig | None = None
    fitted_at: str | None = Field(None, description="ISO-8601 timestamp of the fit")
    variance_floor: float = Field(..., gt=0)
    feature_names: tuple[str, ...] = FEATURE_NAMES
    n_train: int = Field(0, ge=0)


class GnbModel(BaseModel):
    """Fitted Gaussian naive Bayes classifier over the five energy categories."""

    model_config = ConfigDict(frozen=True)

    priors: tuple[float, ...]
    means: tuple[tuple[float, ...], ...]
    variances: tuple[tuple[float, ...], ...]
    bins: BinScheme
    meta: ModelMeta

    @model_validator(mode="after")
    def _check_invariants(self) -> "GnbModel":
        n_features = len(self.meta.feature_names)
        if len(self.priors) != CLASS_COUNT:
            raise ValueError(f"Expected {CLASS_COUNT} priors, got {len(self.priors)}")
        if any(not math.isfinite(p) or p < 0 for p in self.priors):
            raise ValueError("Priors must be finite and non-negative")
        if abs(math.fsum(self.priors) - 1.0) > 1e-12:
            raise ValueError(f"Priors sum to {math.fsum(self.priors)}, not 1")
        for name, matrix in (("means", self.means), ("variances", self.variances)):
            if len(matrix) != CLASS_COUNT or any(len(row) != n_features for row in matrix):
                raise ValueError(f"{name} must be a {CLASS_COUNT}x{n_features} matrix")
            if any(not math.isfinite(v) for row in matrix for v in row):
                raise ValueError(f"{name} contains non-finite values")
        floor = self.meta.variance_floor
        if any(v < floor for row in self.variances for v in row):
            raise ValueError(f"Variance below floor {floor}")
        return self

    @property
    def classes_seen(self) -> tuple[int, ...]:
        """Class indices with non-zero prior."""
        return tuple(k for k, p in enumerate(self.priors) if p > 0)
