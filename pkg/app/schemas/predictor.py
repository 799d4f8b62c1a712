"""Predictor schemas."""
from pydantic import BaseModel, ConfigDict, Field

from app.schemas.dataset import FeatureVector, Period, TrainingSet
from app.schemas.evaluation import ConfusionMatrix
from app.schemas.model import GnbModel
from app.schemas.types import CompactDate


class TrainResult(BaseModel):
    """Model fitted on one period and its held-out evaluation."""

    model_config = ConfigDict(frozen=True)

    model: GnbModel
    training: TrainingSet
    confusion: ConfusionMatrix
    accuracy: float


class EvaluationResult(BaseModel):
    """A stored model applied to a new period."""

    model_config = ConfigDict(frozen=True)

    confusion: ConfusionMatrix
    accuracy: float
    adjacent_error_fraction: float
    n_samples: int
    dropped: int


class Prediction(BaseModel):
    """Predicted category with its kWh interval and posteriors."""

    model_config = ConfigDict(frozen=True)

    index: int
    name: str
    lower_kwh: float | None
    upper_kwh: float | None
    probabilities: tuple[float, ...]
    formatted: str = Field(..., examples=["high (0.85-1.32 kWh)"])


class TrainRequest(BaseModel):
    """Form fields of the training panel."""

    latitude: float = Field(..., ge=-90, le=90, description="Latitude", examples=[17.84])
    longitude: float = Field(..., ge=-180, le=180, description="Longitude", examples=[78.2])
    start: CompactDate = Field(..., description="Start (yyyymmdd)", examples=["20160101"])
    end: CompactDate = Field(..., description="End (yyyymmdd)", examples=["20170102"])


class TrainResponse(BaseModel):
    """Outcome of training through the API."""

    model_config = ConfigDict(protected_namespaces=())

    model_path: str
    n_train: int
    n_test: int
    dropped: int
    accuracy: float = Field(..., description="Held-out accuracy, fraction", examples=[0.942465])
    accuracy_percent: str = Field(..., examples=["94.2465%"])
    bin_edges: tuple[float, ...]


class PredictRequest(FeatureVector):
    """Form fields of the user predictions panel."""


class SweepRequest(BaseModel):
    """Grid and periods of a multi-location sweep."""

    latitudes: tuple[float, ...]
    longitudes: tuple[float, ...]
    train_period: Period
    eval_period: Period
