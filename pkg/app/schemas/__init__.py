"""Pydantic schemas."""
from app.schemas.dataset import (CATEGORY_NAMES, AssembledRow, BinScheme, FeatureVector,
                                 LabeledSample, Period, SplitConfig, TrainingSet)
from app.schemas.evaluation import (ConfusionMatrix, SkippedLocation, SweepEntry, SweepOutcome,
                                    SweepReport)
from app.schemas.model import GnbModel, ModelMeta
from app.schemas.power import DailyRecord, FetchSource, FetchSummary, GeoQuery
from app.schemas.predictor import (EvaluationResult, Prediction, PredictRequest, SweepRequest,
                                   TrainRequest, TrainResponse, TrainResult)

__all__ = [
    "CATEGORY_NAMES",
    "AssembledRow",
    "BinScheme",
    "FeatureVector",
    "LabeledSample",
    "Period",
    "SplitConfig",
    "TrainingSet",
    "ConfusionMatrix",
    "SkippedLocation",
    "SweepEntry",
    "SweepOutcome",
    "SweepReport",
    "GnbModel",
    "ModelMeta",
    "DailyRecord",
    "FetchSource",
    "FetchSummary",
    "GeoQuery",
    "EvaluationResult",
    "Prediction",
    "PredictRequest",
    "SweepRequest",
    "TrainRequest",
    "TrainResponse",
    "TrainResult",
]
