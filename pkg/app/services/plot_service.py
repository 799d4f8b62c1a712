"""Feature time series export (CSV and single-line SVG charts)."""
import csv
import logging
from collections.abc import Sequence
from datetime import date
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.dates as mdates  # noqa: E402
import matplotlib.pyplot as plt  # noqa: E402

from app.schemas.power import DailyRecord
from app.utils.text_utils import format_decimal

logger = logging.getLogger(__name__)

SERIES = {
    "t_avg": "Average temperature (°C)",
    "kt": "Clearness index",
    "s_horiz": "Horizontal irradiance (kWh/m²/day)",
}


def series_points(records: Sequence[DailyRecord], field: str) -> list[tuple[date, float]]:
    """Get (date, value) pairs of one field, skipping missing days."""
    return [(r.date, getattr(r, field)) for r in records if getattr(r, field) is not None]


def write_series_csv(points: Sequence[tuple[date, float]], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("date", "value"))
        for day, value in points:
            writer.writerow((day.isoformat(), format_decimal(value)))


def write_series_svg(points: Sequence[tuple[date, float]], title: str, path: Path) -> None:
    """Draw one series as a line chart over its dates."""
    fig, ax = plt.subplots(figsize=(10, 3.5))
    try:
        if points:
            days, values = zip(*points)
            ax.plot(days, values, linewidth=0.8)
        ax.set_title(title)
        ax.xaxis.set_major_formatter(mdates.DateFormatter("%Y-%m"))
        ax.grid(True, alpha=0.3)
        fig.autofmt_xdate()
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", bbox_inches="tight")
    finally:
        plt.close(fig)


def export_feature_series(
    records: Sequence[DailyRecord], out_dir: Path, svg: bool = False
) -> dict[str, int]:
    """
    Write t_avg.csv, kt.csv and s_horiz.csv (and .svg charts when asked).

    Returns:
        Row count per series
    """
    counts = {}
    for field, title in SERIES.items():
        points = series_points(records, field)
        write_series_csv(points, out_dir / f"{field}.csv")
        if svg:
            write_series_svg(points, title, out_dir / f"{field}.svg")
        counts[field] = len(points)

    logger.info("Exported feature series to %s: %s", out_dir, counts)
    return counts
