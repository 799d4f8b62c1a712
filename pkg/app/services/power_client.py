"""NASA POWER client: URL construction, cassette record/replay and parsing."""
import hashlib
import json
import logging
import math
from datetime import date, datetime
from pathlib import Path
from typing import Any

import httpx
from pydantic import ValidationError

from app.core.config import POWER_V1_TEMPLATE, settings
from app.core.errors import FixtureMissing, HttpStatus, InvalidQuery, NetworkError, ParseError
from app.schemas.power import (DEFAULT_PARAMETERS, DailyRecord, FetchSource,
                               FetchSummary, GeoQuery, RawResponse)
from app.utils.text_utils import format_decimal

logger = logging.getLogger(__name__)

PARAMETER_FIELDS = {
    "T2M": "t_avg",
    "ALLSKY_KT": "kt",
    "ALLSKY_SFC_SW_DWN": "s_horiz",
}
"""POWER identifiers stored in dedicated DailyRecord fields; others go to extras."""

_PLACEHOLDERS = ("[features]", "[begin]", "[end]", "[latitude]", "[longitude]")


def make_query(
    latitude: float,
    longitude: float,
    start: date | str | int,
    end: date | str | int,
    parameters: list[str] | tuple[str, ...] | None = None,
) -> GeoQuery:
    """
    Build a validated GeoQuery.

    Raises:
        InvalidQuery: If coordinates, period or parameters are invalid
    """
    try:
        return GeoQuery(
            latitude=latitude,
            longitude=longitude,
            start=start,
            end=end,
            parameters=tuple(parameters) if parameters else DEFAULT_PARAMETERS,
        )
    except ValidationError as e:
        errors = "; ".join(
            f"{'.'.join(str(p) for p in err['loc']) or 'query'}: {err['msg']}"
            for err in e.errors()
        )
        raise InvalidQuery(errors) from e


def build_power_url(query: GeoQuery, base: str = POWER_V1_TEMPLATE) -> str:
    """
    Substitute a query into the POWER v1 URL template.

    A base without placeholders is treated as an endpoint override: the v1
    query string is appended to it unchanged, after `&` when the override
    already carries a query string of its own.

    Args:
        query: Validated query
        base: URL template or endpoint override

    Returns:
        Request URL
    """
    if not isinstance(query, GeoQuery):
        raise InvalidQuery(f"Expected GeoQuery, got {type(query).__name__}")

    template = base
    if not any(p in base for p in _PLACEHOLDERS):
        query_string = POWER_V1_TEMPLATE.split("?", 1)[1]
        if "?" in base.rstrip("?"):
            template = base.rstrip("&") + query_string
        else:
            template = base.rstrip("?") + "?" + query_string

    return (
        template.replace("[features]", ",".join(query.parameters))
        .replace("[begin]", f"{query.start:%Y%m%d}")
        .replace("[end]", f"{query.end:%Y%m%d}")
        .replace("[latitude]", format_decimal(query.latitude))
        .replace("[longitude]", format_decimal(query.longitude))
    )


def cassette_key(url: str) -> str:
    """Get the cassette key: SHA-256 hex digest of the full URL."""
    return hashlib.sha256(url.encode("utf-8")).hexdigest()


def cassette_path(cassette_dir: Path, url: str) -> Path:
    return Path(cassette_dir) / f"{cassette_key(url)}.cassette"


def write_cassette(path: Path, url: str, body: bytes) -> None:
    """Write a cassette: URL line, blank line, raw body."""
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(url.encode("utf-8") + b"\n\n" + body)


def read_cassette(path: Path, url: str) -> bytes:
    """
    Read the body stored in a cassette.

    Raises:
        FixtureMissing: If the cassette does not exist or belongs to another URL
    """
    if not path.exists():
        raise FixtureMissing(url, str(path))

    content = path.read_bytes()
    header, sep, body = content.partition(b"\n\n")
    if not sep or header.decode("utf-8", errors="replace") != url:
        logger.warning("Cassette %s does not record %s", path, url)
        raise FixtureMissing(url, str(path))
    return body


async def fetch_daily(
    query: GeoQuery,
    mode: FetchSource | str,
    cassette_dir: Path,
    base: str = POWER_V1_TEMPLATE,
    timeout: float = 30,
    transport: httpx.AsyncBaseTransport | None = None,
) -> RawResponse:
    """
    Fetch the POWER body for a query, live or from a cassette.

    Live mode makes a single attempt and records a cassette on success.

    Args:
        query: Validated query
        mode: live or fixture
        cassette_dir: Directory holding cassettes
        base: URL template or endpoint override
        timeout: Request timeout in seconds
        transport: Optional httpx transport (tests use MockTransport)

    Returns:
        RawResponse with the body bytes

    Raises:
        FixtureMissing: Fixture mode without a recorded cassette
        NetworkError: Live request failed
        HttpStatus: Live request returned a non-success status
    """
    mode = FetchSource(mode)
    url = build_power_url(query, base)
    path = cassette_path(cassette_dir, url)

    if mode == FetchSource.FIXTURE:
        body = read_cassette(path, url)
        logger.info("Replayed cassette %s (%d bytes)", path.name, len(body))
        return RawResponse(url=url, body=body, source=FetchSource.FIXTURE)

    logger.info("Fetching POWER: lat=%s, lon=%s, %s..%s",
                query.latitude, query.longitude, query.start, query.end)
    try:
        async with httpx.AsyncClient(timeout=timeout, transport=transport) as client:
            response = await client.get(url)
    except httpx.TimeoutException as e:
        logger.warning("POWER timeout for %s", url)
        raise NetworkError(f"Timeout after {timeout}s: {url}") from e
    except httpx.TransportError as e:
        logger.warning("POWER transport error for %s: %s", url, e)
        raise NetworkError(f"{type(e).__name__}: {e}") from e

    if not response.is_success:
        logger.warning("POWER HTTP error: %s - %s", response.status_code, response.text[:200])
        raise HttpStatus(response.status_code, url)

    body = response.content
    write_cassette(path, url, body)
    logger.info("Recorded cassette %s (%d bytes)", path.name, len(body))
    return RawResponse(url=url, body=body, source=FetchSource.LIVE)


def _descend(node: Any, key: str | int, path: str) -> tuple[Any, str]:
    child_path = f"{path}[{key}]" if isinstance(key, int) else f"{path}.{key}"
    try:
        return node[key], child_path
    except (KeyError, IndexError, TypeError):
        raise ParseError(child_path, "Missing node")


def parse_power_response(
    resp: RawResponse, sentinel: float = -999.0
) -> list[DailyRecord]:
    """
    Parse a POWER JSON body into daily records.

    One record per date in the union of all parameter maps, sorted by date.
    Sentinel values and dates absent from a parameter map become None.

    Args:
        resp: Raw response
        sentinel: Missing-value marker used by POWER

    Returns:
        Records in strictly increasing date order

    Raises:
        ParseError: With the JSON path of the first offending node
    """
    try:
        tree = json.loads(resp.body)
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ParseError("$", f"Invalid JSON: {e}")

    features, path = _descend(tree, "features", "$")
    first, path = _descend(features, 0, path)
    properties, path = _descend(first, "properties", path)
    parameter_maps, path = _descend(properties, "parameter", path)
    if not isinstance(parameter_maps, dict):
        raise ParseError(path, "Expected an object of parameter maps")

    days: dict[date, dict[str, float | None]] = {}
    for name, series in parameter_maps.items():
        series_path = f"{path}.{name}"
        if not isinstance(series, dict):
            raise ParseError(series_path, "Expected an object keyed by yyyymmdd")
        for day_key, value in series.items():
            value_path = f"{series_path}.{day_key}"
            try:
                day = datetime.strptime(day_key, "%Y%m%d").date()
            except ValueError:
                raise ParseError(value_path, "Invalid yyyymmdd key")
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise ParseError(value_path, f"Expected a number, got {value!r}")
            if not math.isfinite(value):
                raise ParseError(value_path, "Non-finite value")
            days.setdefault(day, {})[name] = None if value == sentinel else float(value)

    records = []
    for day in sorted(days):
        values = days[day]
        fields = {field: values.get(name) for name, field in PARAMETER_FIELDS.items()}
        extras = {name: v for name, v in values.items() if name not in PARAMETER_FIELDS}
        try:
            records.append(DailyRecord(date=day, extras=extras, **fields))
        except ValidationError as e:
            field = e.errors()[0]["loc"][0]
            name = {f: n for n, f in PARAMETER_FIELDS.items()}.get(field, str(field))
            raise ParseError(
                f"{path}.{name}.{day:%Y%m%d}", e.errors()[0]["msg"]
            )

    missing = sum(1 for r in records if not r.is_complete)
    logger.info("Parsed %d daily records (%d with missing fields)", len(records), missing)
    return records


class PowerClient:
    """POWER access bound to one configuration."""

    def __init__(
        self,
        base_url: str | None = None,
        mode: FetchSource | str | None = None,
        cassette_dir: Path | None = None,
        timeout: float | None = None,
        sentinel: float | None = None,
        transport: httpx.AsyncBaseTransport | None = None,
    ):
        """Initialize client; unset arguments fall back to settings."""
        self.base_url = base_url or settings.POWER_BASE_URL
        self.mode = FetchSource(mode or settings.FETCH_MODE)
        self.cassette_dir = Path(cassette_dir or settings.CASSETTE_DIR)
        self.timeout = timeout if timeout is not None else settings.POWER_TIMEOUT
        self.sentinel = sentinel if sentinel is not None else settings.POWER_MISSING_SENTINEL
        self.transport = transport

    def build_url(self, query: GeoQuery) -> str:
        return build_power_url(query, self.base_url)

    async def fetch(self, query: GeoQuery) -> RawResponse:
        return await fetch_daily(
            query,
            self.mode,
            self.cassette_dir,
            base=self.base_url,
            timeout=self.timeout,
            transport=self.transport,
        )

    async def fetch_records(self, query: GeoQuery) -> list[DailyRecord]:
        """Fetch and parse one query."""
        return parse_power_response(await self.fetch(query), self.sentinel)

    async def fetch_summary(self, query: GeoQuery) -> tuple[FetchSummary, list[DailyRecord]]:
        """Fetch, parse and count fetched and incomplete days."""
        resp = await self.fetch(query)
        records = parse_power_response(resp, self.sentinel)
        summary = FetchSummary(
            url=resp.url,
            source=resp.source,
            cassette=str(cassette_path(self.cassette_dir, resp.url)),
            days_fetched=len(records),
            days_missing=sum(1 for r in records if not r.is_complete),
        )
        return summary, records
