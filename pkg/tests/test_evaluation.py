"""Unit tests for evaluation metrics and sweep reports."""
import json
import statistics
from datetime import date, timedelta

import pytest

from app.core.errors import EmptyMatrix, EmptyTestSet
from app.schemas.dataset import BinScheme, FeatureVector, LabeledSample
from app.schemas.evaluation import ConfusionMatrix, SkippedLocation, SweepEntry, SweepOutcome
from app.services.evaluation_service import (REFERENCE_ACCURACY_BAND, REFERENCE_CONFUSION,
                                             accuracy, adjacent_error_fraction, axis_averages,
                                             build_report, confusion, confusion_from_labels,
                                             report_summary, write_report_csv)
from app.services.gnb_service import fit
from app.utils.text_utils import format_percent
from tests.conftest import CLASS_KT, CLASS_S_MOD, CLASS_T_AVG


def _diagonal(n: int = 4) -> ConfusionMatrix:
    return ConfusionMatrix(counts=[[n if i == j else 0 for j in range(5)] for i in range(5)])


def _entry(lat: float, lon: float, acc: float, period: str = "20160101-20161231") -> SweepEntry:
    return SweepEntry(latitude=lat, longitude=lon, period=period, n_test=100, accuracy=acc)


def _separable_samples() -> list[LabeledSample]:
    return [
        LabeledSample(
            date=date(2017, 1, 1) + timedelta(days=i),
            features=FeatureVector(
                t_avg=CLASS_T_AVG[i % 5], kt=CLASS_KT[i % 5], s_mod=CLASS_S_MOD[i % 5]
            ),
            pve=CLASS_S_MOD[i % 5] * 0.2,
            label=i % 5,
        )
        for i in range(25)
    ]


def test_reference_matrix_accuracy():
    """Test the published Van matrix: 344 of 365 predictions correct."""
    cm = ConfusionMatrix(counts=REFERENCE_CONFUSION)

    assert cm.total == 365
    assert cm.trace == 344
    assert accuracy(cm) == 344 / 365
    assert format_percent(accuracy(cm)) == "94.2465%"
    assert REFERENCE_ACCURACY_BAND[0] <= accuracy(cm) <= REFERENCE_ACCURACY_BAND[1]


def test_reference_matrix_errors_are_adjacent():
    cm = ConfusionMatrix(counts=REFERENCE_CONFUSION)

    assert cm.total - cm.trace == 21
    assert adjacent_error_fraction(cm) == 1.0


def test_diagonal_matrix():
    cm = _diagonal()

    assert accuracy(cm) == 1.0
    assert adjacent_error_fraction(cm) == 1.0


def test_zero_diagonal_matrix():
    cm = ConfusionMatrix(counts=[[0 if i == j else 1 for j in range(5)] for i in range(5)])

    assert accuracy(cm) == 0.0


def test_corner_only_errors():
    counts = [[3 if i == j else 0 for j in range(5)] for i in range(5)]
    counts[0][4] = 2
    counts[4][0] = 1

    assert adjacent_error_fraction(ConfusionMatrix(counts=counts)) == 0.0


def test_accuracy_empty_matrix():
    with pytest.raises(EmptyMatrix):
        accuracy(_diagonal(0))


def test_confusion_matrix_rejects_bad_shape():
    with pytest.raises(ValueError):
        ConfusionMatrix(counts=[[1, 2], [3, 4]])
    with pytest.raises(ValueError):
        ConfusionMatrix(counts=[[-1] * 5] * 5)


def test_confusion_from_labels_orientation():
    """Test rows are actual and columns predicted."""
    cm = confusion_from_labels([0, 0, 3], [1, 0, 4])

    assert cm.counts[0][1] == 1
    assert cm.counts[0][0] == 1
    assert cm.counts[3][4] == 1
    assert cm.total == 3


def test_confusion_from_labels_length_mismatch():
    with pytest.raises(ValueError):
        confusion_from_labels([0, 1], [0])


def test_perfect_model_gives_diagonal(perfect_model):
    samples = _separable_samples()

    cm = confusion(perfect_model, samples)

    assert cm.counts == _diagonal(5).counts
    assert accuracy(cm) == 1.0
    assert format_percent(accuracy(cm)) == "100.0000%"


def test_constant_predictor_single_column():
    samples = _separable_samples()
    constant = fit([s.model_copy(update={"label": 2}) for s in samples],
                   BinScheme(edges=(2.0, 4.0, 6.0, 8.0)))

    cm = confusion(constant, samples)

    assert [sum(row[j] for row in cm.counts) for j in range(5)] == [0, 0, 25, 0, 0]


def test_confusion_empty_test_set(perfect_model):
    with pytest.raises(EmptyTestSet):
        confusion(perfect_model, [])


def test_axis_average_exact():
    entries = [_entry(40, -75, 0.9), _entry(40, 90, 0.8)]

    averages = axis_averages(entries, "latitude")

    assert averages == {40: statistics.fmean([0.9, 0.8])}
    assert averages[40] == pytest.approx(0.85)


def test_build_report_single_location():
    report = build_report("20160101-20161231", [_entry(72, 140, 0.77)])

    assert report.lat_averages == {72: 0.77}
    assert report.lon_averages == {140: 0.77}
    assert report.overall_average == 0.77


def test_build_report_sorted_and_order_independent():
    entries = [_entry(40, 90, 0.9), _entry(-60, 140, 0.7), _entry(40, -75, 0.8),
               _entry(-60, -150, 1.0)]

    forward = build_report("p", entries)
    backward = build_report("p", list(reversed(entries)))

    assert forward == backward
    assert [(e.latitude, e.longitude) for e in forward.entries] == [
        (-60, -150), (-60, 140), (40, -75), (40, 90)
    ]
    assert list(forward.lat_averages) == [-60, 40]
    assert forward.overall_average == statistics.fmean([1.0, 0.7, 0.8, 0.9])


def test_build_report_all_skipped():
    skipped = [SkippedLocation(latitude=72, longitude=140, period="p", reason="EmptyDataset")]

    report = build_report("p", [], skipped)

    assert report.overall_average is None
    assert report.lat_averages == {}
    assert len(report.skipped) == 1


def test_write_report_csv_with_skipped(tmp_path):
    report = build_report(
        "20170101-20171231",
        [_entry(40, 90, 0.95, "20170101-20171231")],
        [SkippedLocation(latitude=-60, longitude=-150, period="20170101-20171231",
                         reason="FixtureMissing")],
    )
    path = tmp_path / "sweep.csv"

    rows = write_report_csv(report, path)

    assert rows == 2
    assert path.read_text(encoding="utf-8").splitlines() == [
        "lat,lon,period,n_test,accuracy",
        "-60,-150,20170101-20171231,0,skipped",
        "40,90,20170101-20171231,100,0.95",
    ]


def test_report_summary_is_json_ready():
    held = build_report("a", [_entry(40, 90, 0.9, "a")])
    cross = build_report("b", [_entry(40, 90, 0.8, "b")])

    summary = report_summary(SweepOutcome(held_out=held, cross_period=cross))

    decoded = json.loads(json.dumps(summary))
    assert decoded["held_out"]["overall_average"] == 0.9
    assert decoded["cross_period"]["lat_averages"] == {"40": 0.8}
    assert decoded["cross_period"]["entries"][0]["period"] == "b"
