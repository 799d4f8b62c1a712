"""POWER API schemas."""
from datetime import date
from enum import Enum

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.schemas.types import CompactDate

DEFAULT_PARAMETERS: tuple[str, ...] = ("T2M", "ALLSKY_KT", "ALLSKY_SFC_SW_DWN")


class FetchSource(str, Enum):
    """Where a POWER body came from."""
    LIVE = "live"
    FIXTURE = "fixture"


class GeoQuery(BaseModel):
    """Coordinates, period and parameters of one POWER request."""

    model_config = ConfigDict(frozen=True)

    latitude: float = Field(..., ge=-90, le=90, description="Latitude", examples=[38.499])
    longitude: float = Field(..., ge=-180, le=180, description="Longitude", examples=[43.365])
    start: CompactDate = Field(..., description="First day, inclusive", examples=["20160101"])
    end: CompactDate = Field(..., description="Last day, inclusive", examples=["20170102"])
    parameters: tuple[str, ...] = Field(
        DEFAULT_PARAMETERS,
        min_length=1,
        description="POWER parameter identifiers, in request order",
    )

    @field_validator("parameters")
    @classmethod
    def _unique_parameters(cls, value: tuple[str, ...]) -> tuple[str, ...]:
        if len(set(value)) != len(value):
            raise ValueError(f"Duplicate POWER parameters: {','.join(value)}")
        if any(not p.strip() for p in value):
            raise ValueError("Empty POWER parameter identifier")
        return value

    @model_validator(mode="after")
    def _ordered_period(self) -> "GeoQuery":
        if self.start > self.end:
            raise ValueError(f"start {self.start} is after end {self.end}")
        return self


class RawResponse(BaseModel):
    """Unparsed POWER response body."""

    model_config = ConfigDict(frozen=True)

    url: str
    body: bytes
    source: FetchSource


class DailyRecord(BaseModel):
    """One day of raw POWER values; None marks a missing value."""

    model_config = ConfigDict(frozen=True)

    date: date
    t_avg: float | None = Field(None, description="Daily mean temperature, °C")
    kt: float | None = Field(None, ge=0, le=1, description="Clearness index")
    s_horiz: float | None = Field(
        None, ge=0, description="All-sky horizontal irradiance, kWh/m²/day"
    )
    extras: dict[str, float | None] = Field(
        default_factory=dict, description="Values of additionally requested parameters"
    )

    @property
    def is_complete(self) -> bool:
        """True when no field is missing."""
        return None not in (self.t_avg, self.kt, self.s_horiz)


class FetchSummary(BaseModel):
    """Counts reported after fetching a period."""

    url: str
    source: FetchSource
    cassette: str
    days_fetched: int
    days_missing: int
