"""Predictor exceptions.

Every error carries the CLI exit code it maps to:
0 success, 1 usage, 2 network/fixture, 3 data, 4 model.
"""


class PredictorError(Exception):
    """Base exception for the predictor pipeline."""

    exit_code: int = 1


class InvalidQuery(PredictorError):
    """GeoQuery invariants violated."""

    exit_code = 1


class InvalidInput(PredictorError):
    """User supplied feature or configuration values out of range."""

    exit_code = 1


class NetworkError(PredictorError):
    """Live request failed before a response was received."""

    exit_code = 2


class FixtureMissing(PredictorError):
    """No cassette recorded for the requested URL."""

    exit_code = 2

    def __init__(self, url: str, path: str):
        super().__init__(f"No cassette for {url} (expected {path})")
        self.url = url
        self.path = path


class HttpStatus(PredictorError):
    """POWER answered with a non-success status."""

    exit_code = 2

    def __init__(self, code: int, url: str):
        super().__init__(f"HTTP {code} for {url}")
        self.code = code
        self.url = url


class ParseError(PredictorError):
    """POWER body does not have the expected JSON tree."""

    exit_code = 3

    def __init__(self, path: str, message: str):
        super().__init__(f"{message} at {path}")
        self.path = path


class EmptyDataset(PredictorError):
    """Every record was dropped for missing values."""

    exit_code = 3


class DegenerateTarget(PredictorError):
    """Fewer than five distinct PVE values to derive bins from."""

    exit_code = 3


class TooFewSamples(PredictorError):
    """Not enough samples to split."""

    exit_code = 3


class EmptyTrainingSet(PredictorError):
    exit_code = 3


class EmptyTestSet(PredictorError):
    exit_code = 3


class EmptyMatrix(PredictorError):
    exit_code = 3


class ModelIoError(PredictorError):
    """Model file could not be read or written."""

    exit_code = 4


class FormatVersionMismatch(PredictorError):
    exit_code = 4


class CorruptModel(PredictorError):
    """Model file parsed but violates model invariants."""

    exit_code = 4


class LocationError(PredictorError):
    """Failure while processing one sweep location."""

    def __init__(self, latitude: float, longitude: float, cause: PredictorError):
        super().__init__(f"({latitude}, {longitude}): {cause}")
        self.latitude = latitude
        self.longitude = longitude
        self.cause = cause
        self.exit_code = cause.exit_code
