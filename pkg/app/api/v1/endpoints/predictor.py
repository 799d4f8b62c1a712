"""Predictor API endpoints."""
import logging
from pathlib import Path

from fastapi import APIRouter, Depends, HTTPException, status

from app.core.errors import (FixtureMissing, HttpStatus, InvalidInput, InvalidQuery,
                             NetworkError, PredictorError)
from app.dependencies import get_model_path, get_predictor_service
from app.schemas.evaluation import SweepOutcome
from app.schemas.predictor import (Prediction, PredictRequest, SweepRequest, TrainRequest,
                                   TrainResponse)
from app.services import gnb_service
from app.services.power_client import make_query
from app.services.predictor_service import PredictorService, predict_category
from app.services.sweep_service import sweep
from app.utils.text_utils import format_percent

router = APIRouter(prefix="/predictor", tags=["predictor"])

logger = logging.getLogger(__name__)


def _http_error(e: PredictorError) -> HTTPException:
    """Map a pipeline error to an HTTP error response."""
    if isinstance(e, (InvalidQuery, InvalidInput)):
        code = status.HTTP_400_BAD_REQUEST
    elif isinstance(e, (NetworkError, HttpStatus, FixtureMissing)):
        code = status.HTTP_502_BAD_GATEWAY
    elif e.exit_code == 3:
        code = status.HTTP_422_UNPROCESSABLE_ENTITY
    else:
        code = status.HTTP_500_INTERNAL_SERVER_ERROR
    return HTTPException(status_code=code, detail=str(e))


@router.post(
    "/train",
    response_model=TrainResponse,
    status_code=status.HTTP_200_OK,
    summary="Train a model for a location and period",
    description=(
        "Fetch daily POWER data for the location, split it with the configured seed, "
        "fit the classifier and store the model served by /predict."
    ),
)
async def train(
    request: TrainRequest,
    service: PredictorService = Depends(get_predictor_service),
    model_path: Path = Depends(get_model_path),
) -> TrainResponse:
    """
    Train and store a model.

    - **latitude**, **longitude**: Site coordinates
    - **start**, **end**: Training period (yyyymmdd)
    """
    try:
        query = make_query(
            request.latitude, request.longitude, request.start, request.end, service.parameters
        )
        result = await service.train(query)
        gnb_service.save(result.model, model_path)
    except PredictorError as e:
        logger.warning("Training failed: %s", e)
        raise _http_error(e)
    except Exception as e:
        logger.error("Unexpected error in train: %s", e, exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Internal server error during training",
        )

    return TrainResponse(
        model_path=str(model_path),
        n_train=len(result.training.train),
        n_test=len(result.training.test),
        dropped=result.training.dropped,
        accuracy=result.accuracy,
        accuracy_percent=format_percent(result.accuracy),
        bin_edges=result.model.bins.edges,
    )


@router.post(
    "/predict",
    response_model=Prediction,
    status_code=status.HTTP_200_OK,
    summary="Predict the PVE category of one day",
    description=(
        "Classify one day's average temperature, clearness index and module-plane "
        "irradiance with the model stored by /train."
    ),
)
async def predict(
    request: PredictRequest,
    model_path: Path = Depends(get_model_path),
) -> Prediction:
    """
    Predict a category with the stored model.

    - **t_avg**: Average temperature, °C
    - **kt**: Clearness index
    - **s_mod**: Module irradiance, kWh/m²/day
    """
    if not model_path.exists():
        raise HTTPException(
            status_code=status.HTTP_404_NOT_FOUND,
            detail="No trained model; call /predictor/train first",
        )
    try:
        model = gnb_service.load(model_path)
        return predict_category(model, request)
    except PredictorError as e:
        logger.error("Cannot load model %s: %s", model_path, e)
        raise _http_error(e)
    except Exception as e:
        logger.error("Unexpected error in predict: %s", e, exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Internal server error during prediction",
        )


@router.post(
    "/sweep",
    response_model=SweepOutcome,
    status_code=status.HTTP_200_OK,
    summary="Held-out and cross-period accuracy over a location grid",
)
async def run_sweep(
    request: SweepRequest,
    service: PredictorService = Depends(get_predictor_service),
) -> SweepOutcome:
    try:
        return await sweep(
            request.latitudes,
            request.longitudes,
            request.train_period,
            request.eval_period,
            service=service,
        )
    except PredictorError as e:
        logger.warning("Sweep failed: %s", e)
        raise _http_error(e)
    except Exception as e:
        logger.error("Unexpected error in sweep: %s", e, exc_info=True)
        raise HTTPException(
            status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
            detail="Internal server error during sweep",
        )
