"""FastAPI dependencies."""
from pathlib import Path

from app.core.config import settings
from app.services.predictor_service import PredictorService


def get_predictor_service() -> PredictorService:
    """
    Dependency to get the predictor service.

    Fetch mode, cassettes and split settings come from application settings;
    tests override this dependency to point at temporary cassettes.
    """
    return PredictorService()


def get_model_path() -> Path:
    """Dependency to get the path of the served model file."""
    return settings.MODEL_PATH
