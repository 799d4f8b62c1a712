"""Unit tests for solar geometry."""
import math
from datetime import date, timedelta

import numpy as np
import pytest

from app.services.solar_geometry import (DEFAULT_HOUR_ANGLE_DEG, MAX_DECLINATION_DEG,
                                         day_of_year, module_irradiance, sin_deg,
                                         solar_declination, solar_elevation, solar_position)


@pytest.mark.parametrize(
    "day, expected",
    [
        (date(2016, 1, 1), 1),
        (date(2016, 12, 31), 366),
        (date(2017, 3, 1), 60),
        (date(2017, 12, 31), 365),
    ],
)
def test_day_of_year(day, expected):
    assert day_of_year(day) == expected


def test_declination_equinox_and_solstice():
    assert abs(solar_declination(81)) < 0.5
    assert solar_declination(172) == pytest.approx(23.45, abs=0.2)


def test_declination_new_year():
    assert solar_declination(1) == pytest.approx(-23.01, abs=0.05)


def test_declination_bounded_and_periodic():
    for n in range(1, 367):
        assert abs(solar_declination(n)) <= MAX_DECLINATION_DEG
    assert solar_declination(10) == pytest.approx(solar_declination(375), abs=1e-12)


def test_elevation_equator_noon_at_equinox():
    assert solar_elevation(0, 0, 0) == pytest.approx(90.0)


def test_elevation_pole_at_equinox():
    assert solar_elevation(90, 0, 0) == pytest.approx(0.0, abs=1e-9)


def test_elevation_van_winter_matches_closed_form():
    """Test elevation against a direct evaluation of the arcsin formula."""
    lat, decl, h = math.radians(38.499), math.radians(-23.0), math.radians(10.0)
    expected = math.degrees(math.asin(
        math.sin(lat) * math.sin(decl) + math.cos(lat) * math.cos(decl) * math.cos(h)
    ))

    assert solar_elevation(38.499, -23.0, 10.0) == pytest.approx(expected, abs=1e-12)
    assert 27.0 < expected < 28.0


def test_default_hour_angle_is_1240_solar_time():
    """Test 12:40 solar time maps to a 10° hour angle."""
    assert DEFAULT_HOUR_ANGLE_DEG == 10.0


def test_solar_position_is_consistent():
    position = solar_position(38.499, date(2017, 6, 21))

    assert position.hour_angle == 10.0
    assert position.declination == pytest.approx(solar_declination(172))
    assert position.elevation == pytest.approx(
        solar_elevation(38.499, position.declination, 10.0)
    )


def test_polar_night_elevation_is_negative():
    position = solar_position(80.0, date(2016, 12, 21))

    assert position.elevation < 0


def test_sin_deg_exact_values():
    assert sin_deg(30) == 0.5
    assert sin_deg(90) == 1.0
    assert sin_deg(45) == pytest.approx(math.sqrt(2) / 2)


@pytest.mark.parametrize(
    "s_horiz, elevation, expected",
    [
        (5.0, 90.0, 5.0),
        (5.0, 30.0, 10.0),
        (0.0, 45.0, 0.0),
        (0.0, -20.0, 0.0),
    ],
)
def test_module_irradiance(s_horiz, elevation, expected):
    assert module_irradiance(s_horiz, elevation) == expected


def test_module_irradiance_floor_below_horizon():
    """Test low and negative elevations use the 10° floor."""
    at_floor = module_irradiance(2.0, 10.0)

    assert module_irradiance(2.0, 3.0) == at_floor
    assert module_irradiance(2.0, -15.0) == at_floor
    assert at_floor == pytest.approx(2.0 / math.sin(math.radians(10.0)))


def test_module_irradiance_rejects_negative():
    with pytest.raises(ValueError):
        module_irradiance(-0.1, 45.0)


def test_solar_position_consistent_on_random_inputs():
    rng = np.random.default_rng(23)
    for _ in range(1000):
        latitude = float(rng.uniform(-90, 90))
        day = date(2016, 1, 1) + timedelta(days=int(rng.integers(0, 731)))
        hour_angle = float(rng.uniform(-180, 180))

        position = solar_position(latitude, day, hour_angle)

        assert -MAX_DECLINATION_DEG <= position.declination <= MAX_DECLINATION_DEG
        assert -90 <= position.elevation <= 90


def test_noon_maximises_elevation():
    rng = np.random.default_rng(29)
    for _ in range(500):
        latitude = float(rng.uniform(-90, 90))
        declination = float(rng.uniform(-MAX_DECLINATION_DEG, MAX_DECLINATION_DEG))
        noon = solar_elevation(latitude, declination, 0.0)

        for hour_angle in rng.uniform(-90, 90, size=10):
            assert solar_elevation(latitude, declination, float(hour_angle)) <= noon + 1e-12


@pytest.mark.parametrize("s_horiz", [0.5, 4.2, 7.9])
def test_module_irradiance_non_increasing_in_elevation(s_horiz):
    values = [module_irradiance(s_horiz, float(e)) for e in np.linspace(10, 90, 321)]

    assert all(later <= earlier for earlier, later in zip(values, values[1:]))
