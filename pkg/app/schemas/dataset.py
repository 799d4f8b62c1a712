"""Dataset schemas."""
import math
from datetime import date

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.config import settings
from app.schemas.types import CompactDate

CATEGORY_NAMES: tuple[str, ...] = ("very low", "low", "moderate", "high", "very high")
FEATURE_NAMES: tuple[str, ...] = ("t_avg", "kt", "s_mod")
CLASS_COUNT = len(CATEGORY_NAMES)


class FeatureVector(BaseModel):
    """Classifier input: temperature, clearness index, module-plane irradiance."""

    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    t_avg: float = Field(..., description="Daily mean temperature, °C", examples=[24.5])
    kt: float = Field(..., ge=0, le=1, description="Clearness index", examples=[0.5])
    s_mod: float = Field(
        ..., ge=0, description="Module-plane irradiance, kWh/m²/day", examples=[6.78]
    )

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.t_avg, self.kt, self.s_mod)


class AssembledRow(BaseModel):
    """Complete day with derived features and PVE, not yet labelled."""

    model_config = ConfigDict(frozen=True)

    date: date
    features: FeatureVector
    pve: float = Field(..., ge=0, description="Photovoltaic energy, kWh")


class LabeledSample(AssembledRow):
    """Assembled row with its energy category."""

    label: int = Field(..., ge=0, lt=CLASS_COUNT)

    @property
    def label_name(self) -> str:
        return CATEGORY_NAMES[self.label]


class BinScheme(BaseModel):
    """Five ordered energy categories separated by four kWh edges."""

    model_config = ConfigDict(frozen=True)

    edges: tuple[float, float, float, float]
    names: tuple[str, str, str, str, str] = CATEGORY_NAMES

    @field_validator("edges")
    @classmethod
    def _increasing(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if not all(math.isfinite(e) for e in value):
            raise ValueError(f"Bin edges must be finite: {value}")
        if any(lo >= hi for lo, hi in zip(value, value[1:])):
            raise ValueError(f"Bin edges must be strictly increasing: {value}")
        return value

    @field_validator("names")
    @classmethod
    def _fixed_names(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if tuple(value) != CATEGORY_NAMES:
            raise ValueError(f"Bin names must be {list(CATEGORY_NAMES)}")
        return value


class SplitConfig(BaseModel):
    """Seeded train/test split parameters."""

    model_config = ConfigDict(frozen=True)

    test_ratio: float = Field(0.35, gt=0, lt=1, description="Fraction held out for testing")
    seed: int = Field(
        default_factory=lambda: settings.SPLIT_SEED,
        ge=0,
        lt=2**64,
        description="Shuffle seed",
    )


class Period(BaseModel):
    """Inclusive date range."""

    model_config = ConfigDict(frozen=True)

    start: CompactDate
    end: CompactDate

    @model_validator(mode="after")
    def _ordered(self) -> "Period":
        if self.start > self.end:
            raise ValueError(f"start {self.start} is after end {self.end}")
        return self

    @classmethod
    def calendar_year(cls, year: int) -> "Period":
        return cls(start=date(year, 1, 1), end=date(year, 12, 31))

    @property
    def label(self) -> str:
        return f"{self.start:%Y%m%d}-{self.end:%Y%m%d}"


class TrainingSet(BaseModel):
    """Labelled split produced from one period's rows."""

    model_config = ConfigDict(frozen=True)

    scheme: BinScheme
    train: tuple[LabeledSample, ...]
    test: tuple[LabeledSample, ...]
    dropped: int = 0
