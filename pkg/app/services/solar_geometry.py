"""Solar geometry for the module-plane irradiance feature."""
import math
from datetime import date

from pydantic import BaseModel, ConfigDict, Field, model_validator

MAX_DECLINATION_DEG = 23.45
SOLAR_NOON_OFFSET_MIN = 40
DEGREES_PER_MINUTE = 0.25
DEFAULT_HOUR_ANGLE_DEG = SOLAR_NOON_OFFSET_MIN * DEGREES_PER_MINUTE
DEFAULT_ELEVATION_FLOOR_DEG = 10.0

# sin at multiples of 30°, exact where radians() rounding would miss by an ulp
_EXACT_SINES = {0.0: 0.0, 30.0: 0.5, 90.0: 1.0, 150.0: 0.5, 180.0: 0.0,
                210.0: -0.5, 270.0: -1.0, 330.0: -0.5}


def sin_deg(angle: float) -> float:
    """Sine of an angle in degrees."""
    reduced = angle % 360.0
    if reduced in _EXACT_SINES:
        return _EXACT_SINES[reduced]
    return math.sin(math.radians(angle))


class SolarPosition(BaseModel):
    """Sun position for one latitude, day and hour angle (degrees)."""

    model_config = ConfigDict(frozen=True)

    latitude: float = Field(..., ge=-90, le=90)
    declination: float = Field(..., ge=-MAX_DECLINATION_DEG, le=MAX_DECLINATION_DEG)
    hour_angle: float
    elevation: float = Field(..., ge=-90, le=90)

    @model_validator(mode="after")
    def _consistent(self) -> "SolarPosition":
        lat = math.radians(self.latitude)
        decl = math.radians(self.declination)
        expected = (
            math.sin(lat) * math.sin(decl)
            + math.cos(lat) * math.cos(decl) * math.cos(math.radians(self.hour_angle))
        )
        if abs(math.sin(math.radians(self.elevation)) - expected) > 1e-12:
            raise ValueError("Elevation inconsistent with latitude, declination and hour angle")
        return self


def day_of_year(day: date) -> int:
    """Get the ordinal day in the year, 1..366."""
    return day.timetuple().tm_yday


def solar_declination(n: int) -> float:
    """
    Calculate solar declination with Cooper's formula.

    Args:
        n: Day of year

    Returns:
        Declination in degrees, within ±23.45
    """
    return MAX_DECLINATION_DEG * math.sin(math.radians(360.0 * (284 + n) / 365.0))


def solar_elevation(latitude: float, declination: float, hour_angle: float) -> float:
    """
    Calculate the sun's elevation above the horizon.

    Args:
        latitude: Latitude in degrees
        declination: Solar declination in degrees
        hour_angle: Hour angle in degrees, positive after solar noon

    Returns:
        Elevation in degrees
    """
    lat = math.radians(latitude)
    decl = math.radians(declination)
    sin_alpha = (
        math.sin(lat) * math.sin(decl)
        + math.cos(lat) * math.cos(decl) * math.cos(math.radians(hour_angle))
    )
    return math.degrees(math.asin(max(-1.0, min(1.0, sin_alpha))))


def solar_position(
    latitude: float, day: date, hour_angle: float = DEFAULT_HOUR_ANGLE_DEG
) -> SolarPosition:
    """Get declination and elevation for a latitude on a day."""
    declination = solar_declination(day_of_year(day))
    return SolarPosition(
        latitude=latitude,
        declination=declination,
        hour_angle=hour_angle,
        elevation=solar_elevation(latitude, declination, hour_angle),
    )


def module_irradiance(
    s_horiz: float,
    elevation: float,
    floor_deg: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> float:
    """
    Convert horizontal irradiance to the panel-normal equivalent.

    S_mod = S_horiz / sin(max(elevation, floor)); the floor also applies
    when the sun is below the horizon.

    Args:
        s_horiz: Horizontal irradiance, kWh/m²/day
        elevation: Solar elevation in degrees
        floor_deg: Minimum elevation used in the division

    Returns:
        Module-plane irradiance, kWh/m²/day
    """
    if s_horiz < 0:
        raise ValueError(f"Horizontal irradiance must be non-negative, got {s_horiz}")
    if s_horiz == 0:
        return 0.0
    return s_horiz / sin_deg(max(elevation, floor_deg))
