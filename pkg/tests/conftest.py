"""Pytest configuration and fixtures for unit tests."""
import json
import math
from collections.abc import Callable
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from app.core.config import POWER_V1_TEMPLATE
from app.schemas.dataset import BinScheme, CLASS_COUNT
from app.schemas.model import GnbModel, ModelMeta
from app.schemas.power import FetchSource
from app.services.power_client import (PowerClient, build_power_url, cassette_path, make_query,
                                       write_cassette)
from app.services.solar_geometry import sin_deg, solar_position

FIXTURES_DIR = Path(__file__).parent / "fixtures"

VAN = (38.499, 43.365)
TELANGANA = (17.84, 78.2, "20160101", "20170102")

Series = dict[str, dict[date, float]]


def day_range(start: date, end: date) -> list[date]:
    return [start + timedelta(days=i) for i in range((end - start).days + 1)]


def power_body(series: Series) -> bytes:
    """Build a POWER JSON body from per-parameter {date: value} maps."""
    parameter = {
        name: {f"{day:%Y%m%d}": value for day, value in values.items()}
        for name, values in series.items()
    }
    document = {
        "type": "FeatureCollection",
        "features": [{"type": "Feature", "properties": {"parameter": parameter}}],
    }
    return json.dumps(document).encode("utf-8")


def climate_series(
    start: date,
    end: date,
    latitude: float = VAN[0],
    seed: int = 2016,
    missing_days: tuple[date, ...] = (),
) -> Series:
    """
    Synthetic daily T2M / ALLSKY_KT / ALLSKY_SFC_SW_DWN with a seasonal cycle.

    Values are rounded to 2 decimals like POWER; missing_days get -999 for T2M.
    """
    rng = np.random.default_rng(seed)
    hemisphere = 1.0 if latitude >= 0 else -1.0
    series: Series = {"T2M": {}, "ALLSKY_KT": {}, "ALLSKY_SFC_SW_DWN": {}}
    for day in day_range(start, end):
        n = day.timetuple().tm_yday
        season = hemisphere * math.sin(2 * math.pi * (n - 80) / 365)
        t_avg = 9 + 13 * season + rng.normal(0, 2.5)
        kt = float(np.clip(0.58 + 0.08 * season + rng.normal(0, 0.08), 0.05, 0.85))
        s_horiz = kt * (9.5 + 4.5 * season)

        series["T2M"][day] = -999.0 if day in missing_days else round(t_avg, 2)
        series["ALLSKY_KT"][day] = round(kt, 2)
        series["ALLSKY_SFC_SW_DWN"][day] = round(s_horiz, 2)
    return series


CLASS_T_AVG = tuple(10.0 + 5 * k for k in range(CLASS_COUNT))
CLASS_KT = tuple(0.3 + 0.1 * k for k in range(CLASS_COUNT))
CLASS_S_MOD = tuple(5.0 + 10 * k for k in range(CLASS_COUNT))
PERFECT_EDGES = (2.0, 4.0, 6.0, 8.0)


def separable_series(start: date, end: date, latitude: float = 0.0) -> Series:
    """
    Days cycling through five classes, with S_mod = 5, 15, 25, 35, 45 exactly
    recoverable after the elevation division (PVE at 0.2 efficiency = 1, 3, 5, 7, 9).
    """
    series: Series = {"T2M": {}, "ALLSKY_KT": {}, "ALLSKY_SFC_SW_DWN": {}}
    for i, day in enumerate(day_range(start, end)):
        k = i % CLASS_COUNT
        elevation = solar_position(latitude, day).elevation
        series["T2M"][day] = CLASS_T_AVG[k]
        series["ALLSKY_KT"][day] = CLASS_KT[k]
        series["ALLSKY_SFC_SW_DWN"][day] = CLASS_S_MOD[k] * sin_deg(max(elevation, 10.0))
    return series


def record_cassette(
    cassette_dir: Path,
    latitude: float,
    longitude: float,
    start: str | date,
    end: str | date,
    body: bytes,
) -> Path:
    """Write a cassette for the default-template URL of a query."""
    url = build_power_url(make_query(latitude, longitude, start, end), POWER_V1_TEMPLATE)
    path = cassette_path(cassette_dir, url)
    write_cassette(path, url, body)
    return path


@pytest.fixture
def cassette_dir(tmp_path) -> Path:
    path = tmp_path / "cassettes"
    path.mkdir()
    return path


@pytest.fixture
def record(cassette_dir) -> Callable[..., Path]:
    """Return a helper that records a cassette into the temporary directory."""
    def _record(latitude, longitude, start, end, body: bytes) -> Path:
        return record_cassette(cassette_dir, latitude, longitude, start, end, body)
    return _record


@pytest.fixture
def fixture_client(cassette_dir) -> PowerClient:
    return PowerClient(
        base_url=POWER_V1_TEMPLATE, mode=FetchSource.FIXTURE, cassette_dir=cassette_dir
    )


@pytest.fixture
def snippet_body() -> bytes:
    return (FIXTURES_DIR / "power_snippet.json").read_bytes()


@pytest.fixture
def van_2016(record) -> Path:
    """Cassette with a synthetic Van 2016 year."""
    series = climate_series(date(2016, 1, 1), date(2016, 12, 31))
    return record(*VAN, "20160101", "20161231", power_body(series))


@pytest.fixture
def van_2017(record) -> Path:
    series = climate_series(date(2017, 1, 1), date(2017, 12, 31), seed=2017)
    return record(*VAN, "20170101", "20171231", power_body(series))


@pytest.fixture
def perfect_model() -> GnbModel:
    """Hand-built model whose classes match separable_series exactly."""
    return GnbModel(
        priors=(0.2,) * CLASS_COUNT,
        means=tuple(
            (CLASS_T_AVG[k], CLASS_KT[k], CLASS_S_MOD[k]) for k in range(CLASS_COUNT)
        ),
        variances=((1.0, 0.01, 4.0),) * CLASS_COUNT,
        bins=BinScheme(edges=PERFECT_EDGES),
        meta=ModelMeta(variance_floor=1e-9),
    )


@pytest.fixture
def symmetric_model() -> GnbModel:
    """Model with identical classes: every prediction is a five-way tie."""
    return GnbModel(
        priors=(0.2,) * CLASS_COUNT,
        means=((20.0, 0.5, 6.0),) * CLASS_COUNT,
        variances=((1.0, 1.0, 1.0),) * CLASS_COUNT,
        bins=BinScheme(edges=PERFECT_EDGES),
        meta=ModelMeta(variance_floor=1e-9),
    )
