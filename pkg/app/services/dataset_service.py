"""Dataset assembly: cleaning, features, PVE targets, bins and split."""
import bisect
import csv
import logging
import math
from collections.abc import Sequence
from pathlib import Path
from typing import TypeVar

import numpy as np

from app.core.errors import DegenerateTarget, EmptyDataset, InvalidInput, TooFewSamples
from app.schemas.dataset import (CATEGORY_NAMES, AssembledRow, BinScheme, FeatureVector,
                                 LabeledSample, SplitConfig, TrainingSet)
from app.schemas.power import DailyRecord
from app.services.solar_geometry import (DEFAULT_ELEVATION_FLOOR_DEG, DEFAULT_HOUR_ANGLE_DEG,
                                         module_irradiance, solar_position)
from app.utils.shuffle import seeded_permutation
from app.utils.text_utils import format_decimal

logger = logging.getLogger(__name__)

T = TypeVar("T")

BIN_PERCENTILES = (20.0, 40.0, 60.0, 80.0)
MIN_SPLIT_SAMPLES = 10
SAMPLES_CSV_HEADER = ("date", "t_avg", "kt", "s_mod", "pve", "label")


def assemble(
    records: Sequence[DailyRecord],
    latitude: float,
    panel_efficiency: float = 0.20,
    panel_area: float = 1.0,
    hour_angle: float = DEFAULT_HOUR_ANGLE_DEG,
    elevation_floor: float = DEFAULT_ELEVATION_FLOOR_DEG,
) -> tuple[list[AssembledRow], int]:
    """
    Drop incomplete days and derive S_mod and PVE for the rest.

    Args:
        records: Daily records in increasing date order
        latitude: Site latitude in degrees
        panel_efficiency: Panel efficiency, fraction
        panel_area: Panel area, m²
        hour_angle: Hour angle used for the elevation, degrees
        elevation_floor: Minimum elevation used for S_mod, degrees

    Returns:
        Tuple of (rows in date order, dropped_count)

    Raises:
        EmptyDataset: If no complete record remains
    """
    if any(a.date >= b.date for a, b in zip(records, records[1:])):
        raise InvalidInput("Records must be in strictly increasing date order")

    rows: list[AssembledRow] = []
    dropped = 0
    for record in records:
        if not record.is_complete:
            dropped += 1
            continue
        position = solar_position(latitude, record.date, hour_angle)
        s_mod = module_irradiance(record.s_horiz, position.elevation, elevation_floor)
        rows.append(
            AssembledRow(
                date=record.date,
                features=FeatureVector(t_avg=record.t_avg, kt=record.kt, s_mod=s_mod),
                pve=s_mod * panel_efficiency * panel_area,
            )
        )

    logger.info("Assembled %d rows, dropped %d incomplete", len(rows), dropped)
    if not rows:
        raise EmptyDataset(f"All {len(records)} records dropped for missing values")
    return rows, dropped


def fit_bins(pve_values: Sequence[float]) -> BinScheme:
    """
    Fit quintile edges on training PVE values.

    Edges are the 20/40/60/80 percentiles with linear interpolation between
    order statistics.

    Raises:
        DegenerateTarget: Fewer than 5 distinct values, or tied percentiles
    """
    values = np.asarray(pve_values, dtype=float)
    distinct = np.unique(values).size
    if distinct < len(CATEGORY_NAMES):
        raise DegenerateTarget(
            f"Need at least {len(CATEGORY_NAMES)} distinct PVE values, got {distinct}"
        )

    edges = tuple(float(e) for e in np.percentile(values, BIN_PERCENTILES, method="linear"))
    if any(lo >= hi for lo, hi in zip(edges, edges[1:])):
        raise DegenerateTarget(f"PVE quintiles are not distinct: {edges}")

    logger.info("Fitted bin edges (kWh): %s", ", ".join(f"{e:.4f}" for e in edges))
    return BinScheme(edges=edges)


def apply_bins(scheme: BinScheme, pve: float) -> int:
    """Get the category index; values on an edge go to the lower bin."""
    return bisect.bisect_left(scheme.edges, pve)


def bin_interval(scheme: BinScheme, index: int) -> tuple[float | None, float | None]:
    """Get (lower, upper) kWh bounds of a category; None marks an open end."""
    lo = scheme.edges[index - 1] if index > 0 else None
    hi = scheme.edges[index] if index < len(scheme.edges) else None
    return lo, hi


def label_samples(rows: Sequence[AssembledRow], scheme: BinScheme) -> list[LabeledSample]:
    return [
        LabeledSample(
            date=row.date,
            features=row.features,
            pve=row.pve,
            label=apply_bins(scheme, row.pve),
        )
        for row in rows
    ]


def split(samples: Sequence[T], cfg: SplitConfig) -> tuple[list[T], list[T]]:
    """
    Shuffle with the seeded LCG and cut into train and test.

    The first ceil(N * (1 - test_ratio)) shuffled items form the training set.

    Raises:
        TooFewSamples: Fewer than 10 samples
    """
    n = len(samples)
    if n < MIN_SPLIT_SAMPLES:
        raise TooFewSamples(f"Need at least {MIN_SPLIT_SAMPLES} samples to split, got {n}")

    n_train = math.ceil(round(n * (1 - cfg.test_ratio), 9))
    shuffled = seeded_permutation(samples, cfg.seed)
    return shuffled[:n_train], shuffled[n_train:]


def prepare_training(rows: Sequence[AssembledRow], cfg: SplitConfig) -> TrainingSet:
    """Split rows, fit bins on the training part only and label both parts."""
    train_rows, test_rows = split(rows, cfg)
    scheme = fit_bins([row.pve for row in train_rows])
    return TrainingSet(
        scheme=scheme,
        train=tuple(label_samples(train_rows, scheme)),
        test=tuple(label_samples(test_rows, scheme)),
    )


def write_samples_csv(samples: Sequence[LabeledSample], path: Path) -> None:
    """Write labelled samples as date,t_avg,kt,s_mod,pve,label."""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(SAMPLES_CSV_HEADER)
        for s in samples:
            writer.writerow([
                s.date.isoformat(),
                format_decimal(s.features.t_avg),
                format_decimal(s.features.kt),
                format_decimal(s.features.s_mod),
                format_decimal(s.pve),
                s.label_name,
            ])
