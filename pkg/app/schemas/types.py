"""Types for schemas."""
from datetime import date, datetime
from typing import Annotated, Any

from pydantic import BeforeValidator


def _parse_compact_date(value: Any) -> Any:
    """Accept yyyymmdd strings or integers as dates; pass anything else through."""
    if isinstance(value, int) and not isinstance(value, bool):
        value = str(value)
    if isinstance(value, str):
        value = value.strip()
        if len(value) == 8 and value.isdigit():
            return datetime.strptime(value, "%Y%m%d").date()
    return value


CompactDate = Annotated[date, BeforeValidator(_parse_compact_date)]
