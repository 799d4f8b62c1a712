from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

POWER_V1_TEMPLATE = (
    "https://power.larc.nasa.gov/cgi-bin/v1/DataAccess.py?"
    "&request=execute&identifier=SinglePoint&parameters=[features]"
    "&startDate=[begin]&endDate=[end]&userCommunity=SSE&tempAverage=DAILY"
    "&outputList=CSV&lat=[latitude]&lon=[longitude]"
)


class Settings(BaseSettings):
    """Application settings."""

    APP_NAME: str = "Categorical PVE Predictor"
    DEBUG: bool = False
    LOG_LEVEL: str = "INFO"

    POWER_BASE_URL: str = POWER_V1_TEMPLATE
    POWER_PARAMETERS: str = "T2M,ALLSKY_KT,ALLSKY_SFC_SW_DWN"
    POWER_TIMEOUT: int = 30
    POWER_MISSING_SENTINEL: float = -999.0

    FETCH_MODE: str = "fixture"
    """live: hit POWER and record a cassette; fixture: replay cassettes only."""
    CASSETTE_DIR: Path = Path("cassettes")

    SPLIT_SEED: int = 2016
    SPLIT_TEST_RATIO: float = 0.35

    PANEL_EFFICIENCY: float = 0.20
    PANEL_AREA: float = 1.0

    # Solar geometry: 12:40 local solar time
    HOUR_ANGLE_DEG: float = 10.0
    ELEVATION_FLOOR_DEG: float = 10.0

    SWEEP_CONCURRENCY: int = 4

    MODEL_PATH: Path = Path("model.json")
    MODEL_FITTED_AT: str | None = None
    """Fixed fit timestamp; unset uses the last training day so reruns stay byte-identical."""

    model_config = SettingsConfigDict(
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )

    @property
    def power_parameters(self) -> list[str]:
        """Get POWER parameter identifiers as an ordered list."""
        return [p.strip() for p in self.POWER_PARAMETERS.split(",") if p.strip()]


settings = Settings()
