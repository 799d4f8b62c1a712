"""FastAPI application."""
import logging
import time
from contextlib import asynccontextmanager

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware

from app.api.v1.router import api_router
from app.core.config import settings

logger = logging.getLogger(__name__)


@asynccontextmanager
async def lifespan(app: FastAPI):
    """Application lifespan events."""
    logger.info("Application starting up...")
    logger.info("  - fetch mode: %s", settings.FETCH_MODE)
    logger.info("  - cassette dir: %s", settings.CASSETTE_DIR)
    logger.info("  - model path: %s", settings.MODEL_PATH)

    yield

    logger.info("Application shutting down...")


app = FastAPI(
    lifespan=lifespan,
    title=settings.APP_NAME,
    description=(
        "Daily photovoltaic energy category prediction from NASA POWER weather data\n\n"
        "## Main features:\n"
        "- Train a Gaussian naive Bayes model for a location and period\n"
        "- Predict one of five energy categories from temperature, clearness and irradiance\n"
        "- Held-out and cross-period accuracy over a location grid\n"
    ),
    version="0.1.0",
    docs_url="/docs",
    redoc_url="/redoc",
    openapi_url="/openapi.json",
)


@app.middleware("http")
async def add_request_timing(request: Request, call_next):
    """Add request timing and logging."""
    start_time = time.time()

    response = await call_next(request)

    process_time = (time.time() - start_time) * 1000
    response.headers["X-Process-Time"] = f"{process_time:.2f}ms"

    if process_time > 1000:
        logger.warning(
            "SLOW REQUEST: %s %s took %.2fms", request.method, request.url.path, process_time
        )
    elif request.url.path.startswith("/api/"):
        logger.info("%s %s completed in %.2fms", request.method, request.url.path, process_time)

    return response


app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_methods=["*"],
    allow_headers=["*"],
)

app.include_router(api_router, prefix="/api")


@app.get("/", tags=["Root"])
async def root():
    """Root endpoint."""
    return {
        "message": settings.APP_NAME,
        "docs": "/docs",
        "version": "0.1.0",
    }


@app.get("/health", tags=["Health"])
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy", "model_loaded": settings.MODEL_PATH.exists()}
