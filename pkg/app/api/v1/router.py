"""API v1 router."""
from fastapi import APIRouter

from app.api.v1.endpoints import predictor

api_router = APIRouter(prefix="/v1")

api_router.include_router(predictor.router)
