"""
hifwatch command line: simulate, detect, evaluate and report.

Exit codes:
    0  success (also when no fault is found)
    1  any other hifwatch error
    2  invalid configuration or an existing output without --force
    3  malformed waveform, score or report file
    4  waveform sample rate differs from the configured one
    5  report and schedule describe different records
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import yaml

from hifwatch import __version__
from hifwatch.config.app_settings import AppSettings
from hifwatch.config.base_settings import ConfigKeyError, SettingsError
from hifwatch.config.logger_settings import LoggerSettings
from hifwatch.config.run_config import SECTIONS, load_run_config, resolve_config_path
from hifwatch.detector.evaluation import evaluate
from hifwatch.detector.pipeline import run_pipeline, waveform_digest
from hifwatch.detector.report_io import intervals_from_document, read_report, write_report, write_scores_csv
from hifwatch.errors import (
    HifwatchError,
    OutputExistsError,
    PipelineError,
    RecordMismatchError,
    SampleRateMismatchError,
    WaveformFormatError,
)
from hifwatch.havok.forcing import write_forcing_csv
from hifwatch.s2g.graph import write_graph_dump
from hifwatch.tools.plot_bundle import PlotBundle
from hifwatch.tools.report_tables import intervals_table, latency_table, metrics_table
from hifwatch.tracing.logger import flush_logging, get_module_logger, setup_logging
from hifwatch.tracing.logging_context import LoggingContext
from hifwatch.utils.file_utils import ensure_writable, write_document
from hifwatch.wavesim.models import EventSchedule
from hifwatch.wavesim.synthesizer import synthesize
from hifwatch.wavesim.waveform_io import read_waveform_csv, write_waveform_csv

from .manifest import Command, RunManifest

logger = get_module_logger()

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_CONFIG = 2
EXIT_FORMAT = 3
EXIT_SAMPLE_RATE = 4
EXIT_RECORD_MISMATCH = 5


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, PipelineError):
        return exit_code_for(error.cause)
    if isinstance(error, (SettingsError, OutputExistsError)):
        return EXIT_CONFIG
    if isinstance(error, WaveformFormatError):
        return EXIT_FORMAT
    if isinstance(error, SampleRateMismatchError):
        return EXIT_SAMPLE_RATE
    if isinstance(error, RecordMismatchError):
        return EXIT_RECORD_MISMATCH
    return EXIT_ERROR


def schedule_echo_path(waveform_csv: Path) -> Path:
    return waveform_csv.with_suffix(".schedule.yaml")


def output_stem(report_path: Path) -> Path:
    return report_path.with_suffix("") if report_path.suffix == ".json" else report_path


def load_schedule(source: str) -> Tuple[EventSchedule, Optional[Dict[str, Any]]]:
    """Schedule (and the record echo, when present) from a schedule echo, a run config or a preset."""
    path = resolve_config_path(source)
    try:
        data = yaml.safe_load(path.read_text(encoding="utf-8")) or {}
    except yaml.YAMLError as e:
        raise SettingsError(f"{path}: invalid YAML: {e}") from e
    if not isinstance(data, dict):
        raise SettingsError(f"{path}: top level must be a mapping")
    for key in data:
        if key not in SECTIONS and key != "record":
            raise ConfigKeyError(str(key))
    schedule = EventSchedule.from_mapping(data.get("schedule") or {}, key_path="schedule")
    return schedule, data.get("record")


def cmd_simulate(args: argparse.Namespace) -> int:
    config = load_run_config(args.config).with_seed(args.seed)
    output = Path(args.output)
    with LoggingContext(command=Command.SIMULATE.value, seed=config.sim.rng_seed):
        # outputs are checked before anything is written
        echo_path = schedule_echo_path(output)
        for target in (output, echo_path, RunManifest.path_for(output)):
            ensure_writable(target, args.force)
        waveform = synthesize(config.sim, config.schedule)
        write_waveform_csv(waveform, output, force=args.force)
        stored = read_waveform_csv(output)
        echo = {
            "record": {
                "input_digest": waveform_digest(stored),
                "sample_rate": float(stored.sample_rate),
                "n_samples": stored.n_samples,
                "t0": stored.t0,
            },
            "sim": config.sim.as_dict(),
            "schedule": config.schedule.as_dict(),
        }
        ensure_writable(echo_path, args.force).write_text(yaml.safe_dump(echo, sort_keys=True), encoding="utf-8")
        RunManifest(
            command=Command.SIMULATE,
            config_path=args.config,
            input_path=None,
            output_path=str(output),
            seed=config.sim.rng_seed,
            tool_version=__version__,
            extra_outputs=[str(echo_path)],
        ).write(force=args.force)
        logger.info(f"Simulated {waveform.n_samples} samples into {output}")
    return EXIT_OK


def cmd_detect(args: argparse.Namespace) -> int:
    config = load_run_config(args.config)
    output = Path(args.output)
    stem = output_stem(output)
    scores_path = stem.with_name(stem.name + ".scores.csv")
    forcing_path = stem.with_name(stem.name + ".forcing.csv")
    graph_path = stem.with_name(stem.name + ".graph.txt")
    targets = [output, scores_path, forcing_path, RunManifest.path_for(output)]
    if args.dump_graph:
        targets.append(graph_path)
    with LoggingContext(command=Command.DETECT.value):
        for target in targets:
            ensure_writable(target, args.force)
        waveform = read_waveform_csv(args.input)
        ground_truth = config.schedule if config.schedule.events else None
        report = run_pipeline(waveform, config.detector, ground_truth)
        write_report(report, output, force=args.force)
        write_scores_csv(report, scores_path, force=args.force)
        write_forcing_csv(report.forcing, forcing_path, config.detector.smoothing_window, force=args.force)
        extra = [str(scores_path), str(forcing_path)]
        if args.dump_graph and report.score_series.graph is not None:
            write_graph_dump(report.score_series.graph, graph_path, force=args.force)
            extra.append(str(graph_path))
        RunManifest(
            command=Command.DETECT,
            config_path=args.config,
            input_path=str(args.input),
            output_path=str(output),
            seed=None,
            tool_version=__version__,
            extra_outputs=extra,
        ).write(force=args.force)
        print(intervals_table(report.intervals))
    return EXIT_OK


def check_same_record(document: Dict[str, Any], schedule: EventSchedule, record: Optional[Dict[str, Any]]) -> None:
    """Raise ``RecordMismatchError`` when a report and a schedule cannot describe one record."""
    if record and record.get("input_digest") and record["input_digest"] != document["input_digest"]:
        raise RecordMismatchError("the report was computed on a different waveform than the schedule describes")
    report_record = document["record"]
    if record and record.get("sample_rate") and not math.isclose(
        float(record["sample_rate"]), float(report_record["sample_rate"]), rel_tol=1e-6
    ):
        raise RecordMismatchError("report and schedule sample rates differ")
    duration = float(report_record["duration"])
    late = [event.onset for event in schedule.events if event.onset >= duration]
    if late:
        raise RecordMismatchError(f"scheduled events at {late} s lie beyond the {duration} s record")


def cmd_evaluate(args: argparse.Namespace) -> int:
    if args.config is None:
        raise SettingsError("evaluate needs --config with the schedule (echo file, run config or preset)")
    with LoggingContext(command=Command.EVALUATE.value):
        document = read_report(args.input)
        schedule, record = load_schedule(args.config)
        check_same_record(document, schedule, record)
        detector = document.get("config") or {}
        result = evaluate(
            intervals_from_document(document),
            schedule,
            horizon=detector.get("max_latency"),
            system_frequency=float(detector.get("system_frequency", 60.0)),
            benign_window=float(detector.get("benign_window", 0.05)),
            t0=float(document["record"].get("t0", 0.0)),
        )
        metrics = {"input_digest": document["input_digest"], **result.as_dict()}
        if args.output:
            write_document(metrics, args.output, force=args.force)
            RunManifest(
                command=Command.EVALUATE,
                config_path=args.config,
                input_path=str(args.input),
                output_path=str(args.output),
                seed=None,
                tool_version=__version__,
            ).write(force=args.force)
        print(metrics_table(metrics))
        if metrics["matches"]:
            print()
            print(latency_table(metrics))
    return EXIT_OK


def cmd_report(args: argparse.Namespace) -> int:
    with LoggingContext(command=Command.REPORT.value):
        bundle = PlotBundle.from_scores(args.input, args.waveform).downsampled(args.downsample)
        written = bundle.write(args.output, force=args.force)
        RunManifest(
            command=Command.REPORT,
            config_path=args.config,
            input_path=str(args.input),
            output_path=str(args.output),
            seed=None,
            tool_version=__version__,
            extra_outputs=[str(p) for p in written.values()],
        ).write(force=args.force)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hifwatch", description="Arcing fault simulation and detection.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="run configuration YAML or preset name (case_a, case_b)")
    common.add_argument("--force", action="store_true", help="overwrite existing outputs")
    common.add_argument("--log-level", default=None, help="DEBUG, INFO, WARNING or ERROR")

    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="synthesize a labeled waveform CSV")
    simulate.add_argument("--output", required=True, help="waveform CSV to write")
    simulate.add_argument("--seed", type=int, default=None, help="noise seed (overrides sim.rng_seed)")
    simulate.set_defaults(handler=cmd_simulate)

    detect = commands.add_parser("detect", parents=[common], help="run the detection pipeline on a waveform")
    detect.add_argument("--input", required=True, help="waveform CSV")
    detect.add_argument("--output", required=True, help="report JSON to write")
    detect.add_argument("--dump-graph", action="store_true", help="also write the transition graph")
    detect.set_defaults(handler=cmd_detect)

    evaluation = commands.add_parser("evaluate", parents=[common], help="score a report against a schedule")
    evaluation.add_argument("--input", required=True, help="report JSON")
    evaluation.add_argument("--output", help="metrics JSON to write")
    evaluation.set_defaults(handler=cmd_evaluate)

    report = commands.add_parser("report", parents=[common], help="export plot-ready CSV series")
    report.add_argument("--input", required=True, help="score CSV written by detect")
    report.add_argument("--output", required=True, help="directory for the bundle")
    report.add_argument("--downsample", type=int, default=1, help="keep every d-th row")
    report.add_argument("--waveform", help="waveform CSV (default: taken from the detect manifest)")
    report.set_defaults(handler=cmd_report)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        app_settings = AppSettings.from_env()
        logger_settings = LoggerSettings.from_env(load_dotenv=False, log_level=app_settings.log_level)
        setup_logging(app_settings=app_settings, logger_settings=logger_settings, level=args.log_level, force=True)
        return args.handler(args)
    except (HifwatchError, SettingsError) as e:
        code = exit_code_for(e)
        logger.error(f"{args.command} failed: {e}")
        print(f"hifwatch {args.command}: {e}", file=sys.stderr)
        return code
    finally:
        flush_logging()


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
