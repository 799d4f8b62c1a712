"""
Command-line entry point for the categorical PVE predictor.

Usage:
    poetry run python -m app.cli fetch --lat 17.84 --lon 78.2 --start 20160101 --end 20170102
    poetry run python -m app.cli train --lat 38.499 --lon 43.365 --start 20160101 --end 20161231 --model van.json
    poetry run python -m app.cli predict --model van.json --t-avg 24.5 --kt 0.5 --s-mod 6.78
    poetry run python -m app.cli evaluate --model van.json --lat 38.499 --lon 43.365 --start 20170101 --end 20171231
    poetry run python -m app.cli sweep --out sweep/
    poetry run python -m app.cli plot-data --lat 17.84 --lon 78.2 --start 20160101 --end 20161231 --out plots/
"""
import argparse
import asyncio
import json
import logging
import sys
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from app.core.config import settings
from app.core.errors import (DegenerateTarget, EmptyDataset, InvalidInput, InvalidQuery,
                             PredictorError)
from app.schemas.dataset import CATEGORY_NAMES, FeatureVector, Period, SplitConfig
from app.schemas.evaluation import ConfusionMatrix
from app.schemas.power import FetchSource
from app.services import dataset_service, evaluation_service, gnb_service, plot_service
from app.services.power_client import PowerClient, make_query
from app.services.predictor_service import PredictorService, predict_category
from app.services.sweep_service import sweep
from app.utils.text_utils import format_decimal, format_percent

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FETCH = 2

CONFIG_FILE_KEYS = {
    "cassette-dir": "cassette_dir",
    "base-url": "base_url",
    "mode": "mode",
    "seed": "seed",
    "test-ratio": "test_ratio",
    "efficiency": "panel_efficiency",
    "area": "panel_area",
    "parameters": "parameters",
}
"""Config file keys are the flag names; underscores are accepted too."""


class CliConfig(BaseModel):
    """Resolved configuration of one CLI run."""

    model_config = ConfigDict(frozen=True)

    cassette_dir: Path = Field(default_factory=lambda: settings.CASSETTE_DIR)
    base_url: str = Field(default_factory=lambda: settings.POWER_BASE_URL)
    mode: FetchSource = Field(default_factory=lambda: FetchSource(settings.FETCH_MODE))
    seed: int = Field(default_factory=lambda: settings.SPLIT_SEED, ge=0, lt=2**64)
    test_ratio: float = Field(default_factory=lambda: settings.SPLIT_TEST_RATIO, gt=0, lt=1)
    panel_efficiency: float = Field(default_factory=lambda: settings.PANEL_EFFICIENCY, gt=0, le=1)
    panel_area: float = Field(default_factory=lambda: settings.PANEL_AREA, gt=0)
    parameters: tuple[str, ...] = Field(
        default_factory=lambda: tuple(settings.power_parameters), min_length=1
    )

    def client(self) -> PowerClient:
        return PowerClient(base_url=self.base_url, mode=self.mode, cassette_dir=self.cassette_dir)

    def predictor(self) -> PredictorService:
        return PredictorService(
            client=self.client(),
            split_config=SplitConfig(test_ratio=self.test_ratio, seed=self.seed),
            panel_efficiency=self.panel_efficiency,
            panel_area=self.panel_area,
            parameters=list(self.parameters),
        )


def _read_config_file(path: Path) -> dict[str, Any]:
    try:
        document = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidInput(f"Cannot read config file {path}: {e}") from e
    if not isinstance(document, dict):
        raise InvalidInput(f"Config file {path} must contain a JSON object")

    values = {}
    for key, value in document.items():
        field = CONFIG_FILE_KEYS.get(key.replace("_", "-"), key)
        if field not in CliConfig.model_fields:
            raise InvalidInput(f"Unknown config key {key!r} in {path}")
        values[field] = value
    return values


def resolve_config(args: argparse.Namespace) -> CliConfig:
    """
    Merge settings, the optional config file and explicit flags, in that order.

    Raises:
        InvalidInput: On an unreadable file or out-of-range values
    """
    values: dict[str, Any] = {}
    if getattr(args, "config", None):
        values.update(_read_config_file(Path(args.config)))

    flags = {
        "cassette_dir": args.cassette_dir,
        "base_url": args.base_url,
        "mode": args.mode,
        "seed": args.seed,
        "test_ratio": args.test_ratio,
        "panel_efficiency": args.efficiency,
        "panel_area": args.area,
        "parameters": args.parameters.split(",") if args.parameters else None,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if isinstance(values.get("parameters"), str):
        values["parameters"] = values["parameters"].split(",")

    try:
        return CliConfig(**values)
    except ValidationError as e:
        raise InvalidInput(_describe(e)) from e


def _describe(e: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}" for err in e.errors()
    )


def format_confusion(cm: ConfusionMatrix) -> str:
    """Render a confusion matrix, rows = actual, columns = predicted."""
    width = max(len(n) for n in CATEGORY_NAMES) + 2
    lines = ["actual \\ predicted".ljust(width) + "".join(n.rjust(width) for n in CATEGORY_NAMES)]
    for name, row in zip(CATEGORY_NAMES, cm.counts):
        lines.append(name.ljust(width) + "".join(str(c).rjust(width) for c in row))
    return "\n".join(lines)


def _query(args: argparse.Namespace, config: CliConfig):
    return make_query(args.lat, args.lon, args.start, args.end, list(config.parameters))


def _period(value: str) -> Period:
    start, sep, end = value.partition("-")
    if not sep:
        raise argparse.ArgumentTypeError(f"Expected yyyymmdd-yyyymmdd, got {value!r}")
    try:
        return Period(start=start, end=end)
    except ValidationError as e:
        raise argparse.ArgumentTypeError(_describe(e))


def _float_list(value: str) -> list[float]:
    try:
        return [float(v) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers, got {value!r}")


async def cmd_fetch(args: argparse.Namespace, config: CliConfig) -> int:
    """
    Fetch (or replay) a period and report fetched and incomplete days.

    A query that cannot be sent counts as a failed fetch (exit 2).
    """
    try:
        query = _query(args, config)
    except InvalidQuery as e:
        print(f"Error: cannot fetch: {e}", file=sys.stderr)
        return EXIT_FETCH

    summary, _ = await config.client().fetch_summary(query)
    print(f"URL: {summary.url}")
    print(f"Source: {summary.source.value}")
    print(f"Cassette: {summary.cassette}")
    print(f"Days fetched: {summary.days_fetched}")
    print(f"Days missing: {summary.days_missing}")
    return EXIT_OK


async def cmd_train(args: argparse.Namespace, config: CliConfig) -> int:
    """Train on a period, save the model and print the held-out accuracy."""
    result = await config.predictor().train(_query(args, config))
    gnb_service.save(result.model, Path(args.model))

    edges = ", ".join(format_decimal(e) for e in result.model.bins.edges)
    print(f"Dropped rows: {result.training.dropped}")
    print(f"Train size: {len(result.training.train)}")
    print(f"Test size: {len(result.training.test)}")
    print(f"Bin edges (kWh): {edges}")
    print(f"Accuracy: {format_percent(result.accuracy)}")
    print(f"Model: {args.model}")
    return EXIT_OK


async def cmd_predict(args: argparse.Namespace, config: CliConfig) -> int:
    """Predict the energy category of one day's features."""
    try:
        features = FeatureVector(t_avg=args.t_avg, kt=args.kt, s_mod=args.s_mod)
    except ValidationError as e:
        raise InvalidInput(_describe(e)) from e

    model = gnb_service.load(Path(args.model))
    print(predict_category(model, features).formatted)
    return EXIT_OK


async def cmd_evaluate(args: argparse.Namespace, config: CliConfig) -> int:
    """Apply a stored model to a period and print its confusion matrix."""
    model = gnb_service.load(Path(args.model))
    result = await config.predictor().evaluate(model, _query(args, config))

    print(format_confusion(result.confusion))
    print(f"Predictions: {result.confusion.total}")
    print(f"Dropped rows: {result.dropped}")
    print(f"Accuracy: {format_percent(result.accuracy)}")
    print(f"Adjacent-class errors: {format_percent(result.adjacent_error_fraction)}")
    return EXIT_OK


async def cmd_sweep(args: argparse.Namespace, config: CliConfig) -> int:
    """Run the location grid and write one CSV per period plus a JSON summary."""
    outcome = await sweep(
        args.lats,
        args.lons,
        args.train_period,
        args.eval_period,
        service=config.predictor(),
        progress=args.progress,
    )
    out_dir = Path(args.out)
    for report in (outcome.held_out, outcome.cross_period):
        path = out_dir / f"sweep_{report.period}.csv"
        rows = evaluation_service.write_report_csv(report, path)
        average = format_percent(report.overall_average) if report.overall_average is not None else "n/a"
        print(f"{report.period}: {len(report.entries)} evaluated, "
              f"{len(report.skipped)} skipped, average {average} -> {path} ({rows} rows)")
    evaluation_service.write_report_summary(outcome, out_dir / "sweep_summary.json")
    return EXIT_OK


async def cmd_plot_data(args: argparse.Namespace, config: CliConfig) -> int:
    """
    Export the T_avg, KT and horizontal irradiance series of a period, plus
    samples.csv with the assembled rows labelled by the period's own quintiles.
    """
    service = config.predictor()
    query = _query(args, config)
    records = await service.client.fetch_records(query)
    if not records:
        raise EmptyDataset(f"No data for {args.start}..{args.end}")

    out_dir = Path(args.out)
    counts = plot_service.export_feature_series(records, out_dir, svg=args.svg)
    for name, count in counts.items():
        print(f"{name}.csv: {count} rows")

    try:
        rows, _ = service.assemble_records(records, query.latitude)
        scheme = dataset_service.fit_bins([row.pve for row in rows])
    except (EmptyDataset, DegenerateTarget) as e:
        logger.warning("Not writing samples.csv: %s", e)
        return EXIT_OK
    samples = dataset_service.label_samples(rows, scheme)
    dataset_service.write_samples_csv(samples, out_dir / "samples.csv")
    print(f"samples.csv: {len(samples)} rows")
    return EXIT_OK


async def cmd_url(args: argparse.Namespace, config: CliConfig) -> int:
    print(config.client().build_url(_query(args, config)))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace, config: CliConfig) -> int:
    import uvicorn

    uvicorn.run("app.main:app", host=args.host, port=args.port)
    return EXIT_OK


class CliParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = CliParser(add_help=False)
    common.add_argument("--mode", choices=[s.value for s in FetchSource], help="live or fixture")
    common.add_argument("--cassette-dir", help="Cassette directory")
    common.add_argument("--base-url", help="POWER URL template or endpoint override")
    common.add_argument("--seed", type=int, help="Split seed")
    common.add_argument("--test-ratio", type=float, help="Held-out fraction")
    common.add_argument("--efficiency", type=float, help="Panel efficiency, fraction")
    common.add_argument("--area", type=float, help="Panel area, m²")
    common.add_argument("--parameters", help="Comma-separated POWER parameters")
    common.add_argument("--config", help="JSON config file with the same keys as the flags")
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging")

    location = CliParser(add_help=False)
    location.add_argument("--lat", type=float, required=True, help="Latitude")
    location.add_argument("--lon", type=float, required=True, help="Longitude")
    location.add_argument("--start", required=True, help="Start (yyyymmdd)")
    location.add_argument("--end", required=True, help="End (yyyymmdd)")

    parser = CliParser(prog="pve", description="Categorical photovoltaic energy predictor")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("fetch", parents=[common, location], help="Fetch a period")
    p.set_defaults(handler=cmd_fetch)

    p = commands.add_parser("train", parents=[common, location], help="Train a model")
    p.add_argument("--model", "--out", dest="model", required=True, help="Model output path")
    p.set_defaults(handler=cmd_train)

    p = commands.add_parser("predict", parents=[common], help="Predict a category")
    p.add_argument("--model", required=True, help="Model path")
    p.add_argument("--t-avg", type=float, required=True, help="Average temperature, °C")
    p.add_argument("--kt", type=float, required=True, help="Clearness index")
    p.add_argument("--s-mod", type=float, required=True, help="Module irradiance, kWh/m²/day")
    p.set_defaults(handler=cmd_predict)

    p = commands.add_parser("evaluate", parents=[common, location], help="Evaluate a model")
    p.add_argument("--model", required=True, help="Model path")
    p.set_defaults(handler=cmd_evaluate)

    p = commands.add_parser("sweep", parents=[common], help="Multi-location sweep")
    p.add_argument("--lats", type=_float_list,
                   default=list(evaluation_service.DEFAULT_SWEEP_LATITUDES))
    p.add_argument("--lons", type=_float_list,
                   default=list(evaluation_service.DEFAULT_SWEEP_LONGITUDES))
    p.add_argument("--train-period", type=_period, default=Period.calendar_year(2016),
                   help="yyyymmdd-yyyymmdd")
    p.add_argument("--eval-period", type=_period, default=Period.calendar_year(2017),
                   help="yyyymmdd-yyyymmdd")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--progress", action="store_true", help="Show a progress bar")
    p.set_defaults(handler=cmd_sweep)

    p = commands.add_parser("plot-data", parents=[common, location], help="Export feature series")
    p.add_argument("--out", required=True, help="Output directory")
    p.add_argument("--svg", action="store_true", help="Also write SVG charts")
    p.set_defaults(handler=cmd_plot_data)

    p = commands.add_parser("url", parents=[common, location], help="Print the POWER URL")
    p.set_defaults(handler=cmd_url)

    p = commands.add_parser("serve", parents=[common], help="Run the HTTP API")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    """Parse arguments, run a command and map errors to exit codes."""
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        config = resolve_config(args)
        if asyncio.iscoroutinefunction(args.handler):
            return asyncio.run(args.handler(args, config))
        return args.handler(args, config)
    except PredictorError as e:
        logger.debug("Command %s failed", args.command, exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
