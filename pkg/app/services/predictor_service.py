"""Predictor service: POWER data to trained model, evaluation and predictions."""
import logging
from collections.abc import Sequence

from app.core.config import settings
from app.core.errors import InvalidInput
from app.schemas.dataset import AssembledRow, FeatureVector, SplitConfig
from app.schemas.model import GnbModel
from app.schemas.power import DailyRecord, GeoQuery
from app.schemas.predictor import EvaluationResult, Prediction, TrainResult
from app.services import dataset_service, evaluation_service, gnb_service
from app.services.power_client import PowerClient

logger = logging.getLogger(__name__)


def format_prediction(name: str, lower: float | None, upper: float | None) -> str:
    """Format a category as in "high (0.85-1.32 kWh)"; open ends use < and >."""
    if lower is None:
        return f"{name} (<{upper:.2f} kWh)"
    if upper is None:
        return f"{name} (>{lower:.2f} kWh)"
    return f"{name} ({lower:.2f}-{upper:.2f} kWh)"


def predict_category(model: GnbModel, features: FeatureVector) -> Prediction:
    """Predict a category with its stored bin interval."""
    index = gnb_service.predict(model, features)
    lower, upper = dataset_service.bin_interval(model.bins, index)
    name = model.bins.names[index]
    return Prediction(
        index=index,
        name=name,
        lower_kwh=lower,
        upper_kwh=upper,
        probabilities=gnb_service.predict_proba(model, features),
        formatted=format_prediction(name, lower, upper),
    )


class PredictorService:
    """Service wiring POWER retrieval, dataset assembly and the classifier."""

    def __init__(
        self,
        client: PowerClient | None = None,
        split_config: SplitConfig | None = None,
        panel_efficiency: float | None = None,
        panel_area: float | None = None,
        parameters: list[str] | None = None,
    ):
        """Initialize predictor service; unset arguments fall back to settings."""
        self.client = client or PowerClient()
        self.split_config = split_config or SplitConfig(test_ratio=settings.SPLIT_TEST_RATIO)
        self.panel_efficiency = (
            panel_efficiency if panel_efficiency is not None else settings.PANEL_EFFICIENCY
        )
        self.panel_area = panel_area if panel_area is not None else settings.PANEL_AREA
        self.parameters = parameters or settings.power_parameters
        if not 0 < self.panel_efficiency <= 1:
            raise InvalidInput(f"Panel efficiency must be in (0, 1], got {self.panel_efficiency}")
        if self.panel_area <= 0:
            raise InvalidInput(f"Panel area must be positive, got {self.panel_area}")

    async def load_rows(self, query: GeoQuery) -> tuple[list[AssembledRow], int]:
        """
        Fetch a period and assemble complete rows.

        Returns:
            Tuple of (rows, dropped_count)
        """
        records = await self.client.fetch_records(query)
        return self.assemble_records(records, query.latitude)

    def assemble_records(
        self, records: Sequence[DailyRecord], latitude: float
    ) -> tuple[list[AssembledRow], int]:
        """Assemble fetched records with this service's panel and solar settings."""
        return dataset_service.assemble(
            records,
            latitude,
            panel_efficiency=self.panel_efficiency,
            panel_area=self.panel_area,
            hour_angle=settings.HOUR_ANGLE_DEG,
            elevation_floor=settings.ELEVATION_FLOOR_DEG,
        )

    async def train(self, query: GeoQuery) -> TrainResult:
        """
        Fit a model on a period and evaluate it on the held-out split.

        Raises:
            EmptyDataset, TooFewSamples, DegenerateTarget: On unusable data
        """
        rows, dropped = await self.load_rows(query)
        training = dataset_service.prepare_training(rows, self.split_config).model_copy(
            update={"dropped": dropped}
        )
        model = gnb_service.GaussianNB().fit(
            training.train,
            training.scheme,
            query=query,
            split=self.split_config,
            fitted_at=settings.MODEL_FITTED_AT or f"{rows[-1].date.isoformat()}T00:00:00+00:00",
        ).model
        cm = evaluation_service.confusion(model, training.test)
        acc = evaluation_service.accuracy(cm)

        logger.info(
            "Trained at (%s, %s): %d train, %d test, held-out accuracy %.4f",
            query.latitude, query.longitude, len(training.train), len(training.test), acc,
        )
        return TrainResult(model=model, training=training, confusion=cm, accuracy=acc)

    async def evaluate(self, model: GnbModel, query: GeoQuery) -> EvaluationResult:
        """
        Apply a stored model to a new period, labelling with its stored bins.

        Raises:
            EmptyDataset: If the period has no complete day
        """
        rows, dropped = await self.load_rows(query)
        samples = dataset_service.label_samples(rows, model.bins)
        cm = evaluation_service.confusion(model, samples)
        acc = evaluation_service.accuracy(cm)

        logger.info(
            "Evaluated at (%s, %s) on %d days: accuracy %.4f",
            query.latitude, query.longitude, len(samples), acc,
        )
        return EvaluationResult(
            confusion=cm,
            accuracy=acc,
            adjacent_error_fraction=evaluation_service.adjacent_error_fraction(cm),
            n_samples=len(samples),
            dropped=dropped,
        )
