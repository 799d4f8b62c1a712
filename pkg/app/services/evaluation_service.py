"""Evaluation: confusion matrices, accuracy and sweep reports."""
import csv
import json
import logging
import statistics
from collections import defaultdict
from collections.abc import Iterable, Sequence
from pathlib import Path

from app.core.errors import EmptyMatrix, EmptyTestSet
from app.schemas.dataset import CLASS_COUNT, LabeledSample
from app.schemas.evaluation import (ConfusionMatrix, SkippedLocation, SweepEntry,
                                    SweepOutcome, SweepReport)
from app.schemas.model import GnbModel
from app.services.gnb_service import predict_many
from app.utils.text_utils import format_decimal

logger = logging.getLogger(__name__)

# Rows = actual, columns = predicted; 2016-17 model on 2017-18 at Van, Turkey
REFERENCE_CONFUSION = (
    (27, 3, 0, 0, 0),
    (0, 70, 6, 0, 0),
    (0, 3, 62, 2, 0),
    (0, 0, 1, 68, 3),
    (0, 0, 0, 3, 117),
)
REFERENCE_ACCURACY_BAND = (0.90607, 0.96124)

DEFAULT_SWEEP_LATITUDES = (-60.0, -30.0, 40.0, 72.0)
DEFAULT_SWEEP_LONGITUDES = (-150.0, -75.0, 90.0, 140.0)

REPORT_CSV_HEADER = ("lat", "lon", "period", "n_test", "accuracy")


def confusion_from_labels(actual: Sequence[int], predicted: Sequence[int]) -> ConfusionMatrix:
    """Count (actual, predicted) pairs."""
    if len(actual) != len(predicted):
        raise ValueError(f"{len(actual)} actual labels vs {len(predicted)} predictions")
    counts = [[0] * CLASS_COUNT for _ in range(CLASS_COUNT)]
    for a, p in zip(actual, predicted):
        counts[a][p] += 1
    return ConfusionMatrix(counts=tuple(tuple(row) for row in counts))


def confusion(model: GnbModel, test: Sequence[LabeledSample]) -> ConfusionMatrix:
    """
    Evaluate a model on labelled samples.

    Raises:
        EmptyTestSet: If test is empty
    """
    if not test:
        raise EmptyTestSet("Cannot evaluate on an empty test set")
    predicted = predict_many(model, [s.features for s in test])
    return confusion_from_labels([s.label for s in test], predicted)


def accuracy(cm: ConfusionMatrix) -> float:
    """
    Get trace / total, the multiclass form of (TP + TN) / (TP + TN + FP + FN).

    Raises:
        EmptyMatrix: If the matrix has no counts
    """
    total = cm.total
    if total == 0:
        raise EmptyMatrix("Accuracy of an empty confusion matrix")
    return cm.trace / total


def adjacent_error_fraction(cm: ConfusionMatrix) -> float:
    """Get the share of misclassifications landing one category away; 1.0 with no errors."""
    errors = cm.total - cm.trace
    if errors == 0:
        return 1.0
    adjacent = sum(
        cm.counts[i][j]
        for i in range(CLASS_COUNT)
        for j in range(CLASS_COUNT)
        if abs(i - j) == 1
    )
    return adjacent / errors


def axis_averages(entries: Iterable[SweepEntry], axis: str) -> dict[float, float]:
    """Get the mean accuracy per latitude or longitude, keys in ascending order."""
    groups: dict[float, list[float]] = defaultdict(list)
    for entry in entries:
        groups[getattr(entry, axis)].append(entry.accuracy)
    return {key: statistics.fmean(groups[key]) for key in sorted(groups)}


def build_report(
    period: str,
    entries: Iterable[SweepEntry],
    skipped: Iterable[SkippedLocation] = (),
) -> SweepReport:
    """Sort entries by (lat, lon) and compute axis and overall averages."""
    ordered = tuple(sorted(entries, key=lambda e: (e.latitude, e.longitude)))
    return SweepReport(
        period=period,
        entries=ordered,
        lat_averages=axis_averages(ordered, "latitude"),
        lon_averages=axis_averages(ordered, "longitude"),
        overall_average=statistics.fmean(e.accuracy for e in ordered) if ordered else None,
        skipped=tuple(sorted(skipped, key=lambda s: (s.latitude, s.longitude))),
    )


def write_report_csv(report: SweepReport, path: Path) -> int:
    """
    Write lat,lon,period,n_test,accuracy rows; skipped locations get n_test 0
    and accuracy "skipped".

    Returns:
        Number of data rows written
    """
    rows = [
        (e.latitude, e.longitude, e.period, str(e.n_test), format_decimal(e.accuracy))
        for e in report.entries
    ] + [
        (s.latitude, s.longitude, s.period, "0", "skipped")
        for s in report.skipped
    ]
    rows.sort(key=lambda r: (r[0], r[1]))

    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(REPORT_CSV_HEADER)
        for lat, lon, *rest in rows:
            writer.writerow([format_decimal(lat), format_decimal(lon), *rest])
    return len(rows)


def report_summary(outcome: SweepOutcome) -> dict:
    """Get a JSON-ready summary with averages and per-location matrices."""
    def _report(report: SweepReport) -> dict:
        return {
            "period": report.period,
            "overall_average": report.overall_average,
            "lat_averages": {format_decimal(k): v for k, v in report.lat_averages.items()},
            "lon_averages": {format_decimal(k): v for k, v in report.lon_averages.items()},
            "entries": [e.model_dump(mode="json") for e in report.entries],
            "skipped": [s.model_dump(mode="json") for s in report.skipped],
        }

    return {
        "held_out": _report(outcome.held_out),
        "cross_period": _report(outcome.cross_period),
    }


def write_report_summary(outcome: SweepOutcome, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report_summary(outcome), indent=2) + "\n", encoding="utf-8")
