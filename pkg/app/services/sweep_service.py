"""Multi-location sweep: train on one period, evaluate held-out and on the next."""
import asyncio
import logging
from collections.abc import Sequence

from pydantic import BaseModel, ConfigDict
from tqdm import tqdm

from app.core.config import settings
from app.core.errors import (DegenerateTarget, EmptyDataset, EmptyTestSet, FixtureMissing,
                             LocationError, PredictorError, TooFewSamples)
from app.schemas.dataset import Period
from app.schemas.evaluation import SkippedLocation, SweepEntry, SweepOutcome
from app.services.evaluation_service import build_report
from app.services.power_client import make_query
from app.services.predictor_service import PredictorService

logger = logging.getLogger(__name__)

SKIPPABLE_ERRORS = (EmptyDataset, DegenerateTarget, TooFewSamples, EmptyTestSet, FixtureMissing)
"""Insufficient data at a location: reported as skipped instead of failing the sweep."""


class LocationOutcome(BaseModel):
    """Held-out and cross-period results of one grid point."""

    model_config = ConfigDict(frozen=True)

    held_out: SweepEntry | SkippedLocation
    cross_period: SweepEntry | SkippedLocation


def _skipped(lat: float, lon: float, period: Period, reason: str) -> SkippedLocation:
    return SkippedLocation(latitude=lat, longitude=lon, period=period.label, reason=reason)


async def evaluate_location(
    service: PredictorService,
    latitude: float,
    longitude: float,
    train_period: Period,
    eval_period: Period,
) -> LocationOutcome:
    """
    Train at one location and evaluate held-out and cross-period accuracy.

    Raises:
        LocationError: On failures other than insufficient data
    """
    parameters = service.parameters
    try:
        trained = await service.train(
            make_query(latitude, longitude, train_period.start, train_period.end, parameters)
        )
    except SKIPPABLE_ERRORS as e:
        logger.warning("Skipping (%s, %s) for %s: %s", latitude, longitude, train_period.label, e)
        reason = f"{type(e).__name__}: {e}"
        return LocationOutcome(
            held_out=_skipped(latitude, longitude, train_period, reason),
            cross_period=_skipped(latitude, longitude, eval_period, f"no model ({reason})"),
        )
    except PredictorError as e:
        raise LocationError(latitude, longitude, e) from e

    held_out = SweepEntry(
        latitude=latitude,
        longitude=longitude,
        period=train_period.label,
        n_test=trained.confusion.total,
        accuracy=trained.accuracy,
        confusion=trained.confusion,
    )

    try:
        evaluated = await service.evaluate(
            trained.model,
            make_query(latitude, longitude, eval_period.start, eval_period.end, parameters),
        )
    except SKIPPABLE_ERRORS as e:
        logger.warning("Skipping (%s, %s) for %s: %s", latitude, longitude, eval_period.label, e)
        return LocationOutcome(
            held_out=held_out,
            cross_period=_skipped(latitude, longitude, eval_period, f"{type(e).__name__}: {e}"),
        )
    except PredictorError as e:
        raise LocationError(latitude, longitude, e) from e

    return LocationOutcome(
        held_out=held_out,
        cross_period=SweepEntry(
            latitude=latitude,
            longitude=longitude,
            period=eval_period.label,
            n_test=evaluated.n_samples,
            accuracy=evaluated.accuracy,
            confusion=evaluated.confusion,
        ),
    )


async def sweep(
    latitudes: Sequence[float],
    longitudes: Sequence[float],
    train_period: Period,
    eval_period: Period,
    service: PredictorService | None = None,
    concurrency: int | None = None,
    progress: bool = False,
) -> SweepOutcome:
    """
    Run every (latitude, longitude) pair of the grid.

    Locations are processed concurrently; reports are sorted by (lat, lon)
    so the outcome does not depend on completion order.

    Args:
        latitudes: Grid latitudes
        longitudes: Grid longitudes
        train_period: Period to fit on (held-out accuracy)
        eval_period: Period to evaluate the stored model on
        service: Predictor service carrying fetch mode and split settings
        concurrency: Maximum locations in flight
        progress: Show a tqdm progress bar

    Returns:
        Held-out and cross-period reports
    """
    service = service or PredictorService()
    semaphore = asyncio.Semaphore(concurrency or settings.SWEEP_CONCURRENCY)
    grid = [(lat, lon) for lat in latitudes for lon in longitudes]

    with tqdm(total=len(grid), desc="Sweep", unit="location", disable=not progress) as bar:
        async def _run(lat: float, lon: float) -> LocationOutcome:
            async with semaphore:
                outcome = await evaluate_location(service, lat, lon, train_period, eval_period)
            bar.update(1)
            return outcome

        outcomes = await asyncio.gather(*(_run(lat, lon) for lat, lon in grid))

    def _split(results: list[SweepEntry | SkippedLocation]):
        entries = [r for r in results if isinstance(r, SweepEntry)]
        skipped = [r for r in results if isinstance(r, SkippedLocation)]
        return entries, skipped

    held_entries, held_skipped = _split([o.held_out for o in outcomes])
    cross_entries, cross_skipped = _split([o.cross_period for o in outcomes])

    logger.info(
        "Sweep over %d locations: %d evaluated, %d skipped",
        len(grid), len(held_entries), len(held_skipped),
    )
    return SweepOutcome(
        held_out=build_report(train_period.label, held_entries, held_skipped),
        cross_period=build_report(eval_period.label, cross_entries, cross_skipped),
    )
