"""Evaluation schemas."""
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.schemas.dataset import CLASS_COUNT


class ConfusionMatrix(BaseModel):
    """Counts indexed [actual][predicted]."""

    model_config = ConfigDict(frozen=True)

    counts: tuple[tuple[int, ...], ...]

    @field_validator("counts")
    @classmethod
    def _square_non_negative(
        cls, value: tuple[tuple[int, ...], ...]
    ) -> tuple[tuple[int, ...], ...]:
        if len(value) != CLASS_COUNT or any(len(row) != CLASS_COUNT for row in value):
            raise ValueError(f"Confusion matrix must be {CLASS_COUNT}x{CLASS_COUNT}")
        if any(c < 0 for row in value for c in row):
            raise ValueError("Confusion counts must be non-negative")
        return value

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.counts)

    @property
    def trace(self) -> int:
        return sum(self.counts[k][k] for k in range(CLASS_COUNT))


class SweepEntry(BaseModel):
    """Accuracy of one location for one period."""

    model_config = ConfigDict(frozen=True)

    latitude: float
    longitude: float
    period: str
    n_test: int = Field(..., gt=0)
    accuracy: float = Field(..., ge=0, le=1)
    confusion: ConfusionMatrix | None = None


class SkippedLocation(BaseModel):
    """Location that produced no evaluation, with the reason."""

    model_config = ConfigDict(frozen=True)

    latitude: float
    longitude: float
    period: str
    reason: str


class SweepReport(BaseModel):
    """Per-location accuracies of one period with axis averages."""

    model_config = ConfigDict(frozen=True)

    period: str
    entries: tuple[SweepEntry, ...]
    lat_averages: dict[float, float]
    lon_averages: dict[float, float]
    overall_average: float | None = None
    skipped: tuple[SkippedLocation, ...] = ()


class SweepOutcome(BaseModel):
    """Held-out accuracies on the training period and accuracies on the next period."""

    model_config = ConfigDict(frozen=True)

    held_out: SweepReport
    cross_period: SweepReport
