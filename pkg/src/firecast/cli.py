"""CLI entry point for firecast."""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, Optional

from colorama import Fore, Style, init
from pydantic import ValidationError

from firecast.config.loader import load_config
from firecast.models.experiment import AblationGrid, ExperimentSpec
from firecast.models.sample import SampleSpec
from firecast.models.synthetic_config import SyntheticConfig
from firecast.services.ablation import AblationRunner
from firecast.services.checkpoint_store import load_checkpoint
from firecast.services.cube_store import read_cube, write_cube
from firecast.services.evaluator import BASELINE_NAMES, BaselineScorer, ModelScorer, evaluate
from firecast.services.experiment_runner import prepare_data, resolve_split, run_training
from firecast.services.map_exporter import predict_map, write_map_csv, write_pgm
from firecast.services.report_writer import append_reports
from firecast.services.sampler import enumerate_samples
from firecast.services.standardizer import cube_summary
from firecast.services.synthetic import SyntheticCubeGenerator
from firecast.utils.errors import ErrorCategory, FirecastError, FirecastValidationError
from firecast.utils.logging_config import get_logger, setup_logging
from firecast.utils.progress import timed_operation

# Initialize colorama for cross-platform color support
init(autoreset=True)

logger = get_logger(__name__)

MODEL_CHOICES = ["gru", "convlstm", "tgcn"]
SPLIT_CHOICES = ["train", "val", "test"]


class _UsageParser(argparse.ArgumentParser):
    """ArgumentParser that reports usage errors with exit code 1."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{Fore.RED}Error: {message}{Style.RESET_ALL}", file=sys.stderr)
        sys.exit(ErrorCategory.USAGE.exit_code)


def _handle_enhanced_error(error: Exception, operation: str) -> int:
    """
    Report an error to the user and map it to an exit code.

    Args:
        error: The exception that occurred
        operation: Description of the operation that failed

    Returns:
        Process exit code
    """
    logger.error(f"Error in {operation}: {error}")

    if isinstance(error, FirecastError):
        message = f"Error: {str(error)}"
        if error.suggestion:
            message += f" {error.suggestion}"
        print(f"{Fore.RED}{message}{Style.RESET_ALL}")

        # Log additional context for debugging
        if error.context:
            logger.debug(f"Error context: {error.context}")
        return error.category.exit_code

    if isinstance(error, ValidationError):
        print(f"{Fore.RED}Error: invalid configuration: {error}{Style.RESET_ALL}")
        return ErrorCategory.USAGE.exit_code

    print(f"{Fore.RED}Error {operation}: {str(error)}{Style.RESET_ALL}")
    return ErrorCategory.SYSTEM.exit_code


def _overrides(args, mapping: Dict[str, str]) -> Dict[str, Any]:
    """CLI flags that were given, renamed to config fields."""
    return {field: getattr(args, flag) for flag, field in mapping.items() if getattr(args, flag, None) is not None}


def _experiment_from_args(args) -> ExperimentSpec:
    """Config file values overridden by explicit flags."""
    base = load_config(args.config, ExperimentSpec) if args.config else ExperimentSpec()
    fields = base.model_dump()
    fields.update(_overrides(args, {
        "model": "model", "ts": "ts", "horizon": "h", "radius": "r", "k": "k",
        "seed": "seed", "cube": "cube", "out": "out",
    }))
    if args.epochs is not None:
        fields["train"] = base.train.with_epochs(args.epochs).model_dump()
    if args.k is None and fields["model"] == "tgcn":
        fields["k"] = min(fields["k"], (2 * fields["r"] + 1) ** 2)
    return ExperimentSpec.model_validate(fields)


def _print_summary(summary: Dict[str, Any]) -> None:
    years = summary["years"]
    span = f"{years[0]}-{years[-1]}" if years else "none"
    print(f"Grid: {summary['time_len']} steps x {summary['lat_len']} lat x {summary['lon_len']} lon")
    print(f"Cells: {summary['cells']} ({summary['land_cells']} on land)")
    print(f"Years: {span} ({len(years)})")
    print(f"Variables: {', '.join(summary['variables'])}")
    if "fire_rate" in summary:
        print(f"Fire events: {summary['fire_events']}, fire rate: {summary['fire_rate']:.6f}")


def _add_common_sample_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--ts", type=int, help="Timeseries length in 8-day steps")
    parser.add_argument("--horizon", type=int, help="Forecasting horizon in 8-day steps")
    parser.add_argument("--radius", type=int, help="Spatial window radius r")
    parser.add_argument("--k", type=int, help="Grid-graph neighbours per vertex, self included")
    parser.add_argument("--seed", type=int, help="Seed for every random stream")


def build_parser() -> argparse.ArgumentParser:
    parser = _UsageParser(
        description="""Seasonal wildfire forecasting toolkit

Examples:
  firecast gen-synthetic --out cube --seed 7          # Generate a synthetic datacube
  firecast cube-info --cube cube                      # Summarize a datacube
  firecast train --cube cube --model tgcn --radius 2  # Train a model
  firecast evaluate --checkpoint runs/checkpoint_best # Evaluate a checkpoint on the test year
  firecast evaluate --cube cube --baseline naive-any  # Evaluate a seasonal baseline
  firecast ablate --cube cube --radii 1 2 3 --workers 2
  firecast predict-map --checkpoint runs/checkpoint_best --t-idx 250 --out maps
        """,
        prog="firecast",
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--log-file", help="Log file (default: firecast.log or FIRECAST_LOG_FILE env var)")

    subparsers = parser.add_subparsers(dest="command", help="Available commands", parser_class=_UsageParser)

    gen = subparsers.add_parser("gen-synthetic", help="Generate a synthetic datacube")
    gen.add_argument("--config", help="SyntheticConfig JSON file")
    gen.add_argument("--seed", type=int, default=0, help="Generator seed (default: 0)")
    gen.add_argument("--years", type=int, help="Override the number of years")
    gen.add_argument("--lat", type=int, help="Override the number of latitude rows")
    gen.add_argument("--lon", type=int, help="Override the number of longitude columns")
    gen.add_argument("--out", required=True, help="Output cube directory")

    info = subparsers.add_parser("cube-info", help="Summarize a datacube")
    info.add_argument("--cube", required=True, help="Cube directory")

    train = subparsers.add_parser("train", help="Train a forecasting model")
    train.add_argument("--config", help="ExperimentSpec JSON file")
    train.add_argument("--cube", help="Cube directory")
    train.add_argument("--model", choices=MODEL_CHOICES, help="Architecture (default: gru)")
    _add_common_sample_args(train)
    train.add_argument("--epochs", type=int, help="Epochs; SGDR cycles are rescaled 1:3")
    train.add_argument("--out", help="Output directory (default: runs)")

    ev = subparsers.add_parser("evaluate", help="Evaluate a checkpoint or baseline, appending a results row")
    source = ev.add_mutually_exclusive_group(required=True)
    source.add_argument("--checkpoint", help="Checkpoint directory")
    source.add_argument("--baseline", choices=list(BASELINE_NAMES), help="Naive seasonal baseline")
    ev.add_argument("--cube", help="Cube directory (default: the checkpoint's cube)")
    ev.add_argument("--split", choices=SPLIT_CHOICES, default="test", help="Split to evaluate (default: test)")
    ev.add_argument("--results", default="results.csv", help="Results CSV to append to (default: results.csv)")
    _add_common_sample_args(ev)

    ablate = subparsers.add_parser("ablate", help="Run a sweep over models, ts, horizons and radii")
    ablate.add_argument("--config", help="AblationGrid JSON file")
    ablate.add_argument("--cube", help="Cube directory")
    ablate.add_argument("--models", "--model", nargs="+", choices=MODEL_CHOICES, help="Models to sweep")
    ablate.add_argument("--ts", nargs="+", type=int, help="Timeseries lengths to sweep")
    ablate.add_argument("--horizons", "--horizon", nargs="+", type=int, help="Horizons to sweep")
    ablate.add_argument("--radii", "--radius", nargs="+", type=int, help="Radii to sweep")
    ablate.add_argument("--k", type=int, help="Grid-graph neighbours for tgcn")
    ablate.add_argument("--epochs", type=int, help="Epochs per run")
    ablate.add_argument("--seed", type=int, help="Seed for every run")
    ablate.add_argument("--split", choices=SPLIT_CHOICES, default="test", help="Split to report (default: test)")
    ablate.add_argument("--workers", type=int, default=1, help="Concurrent runs (default: 1)")
    ablate.add_argument("--out", help="Sweep output directory (default: runs/ablation)")

    pm = subparsers.add_parser("predict-map", help="Export a confidence map for one time step")
    pm.add_argument("--checkpoint", required=True, help="Checkpoint directory")
    pm.add_argument("--cube", help="Cube directory (default: the checkpoint's cube)")
    pm.add_argument("--t-idx", type=int, required=True, help="Last input time index")
    pm.add_argument("--out", default="maps", help="Output directory for map.csv and map.pgm (default: maps)")

    return parser


def main(argv: Optional[list] = None):
    """Main CLI entry point."""
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(log_file=args.log_file)

    handlers = {
        "gen-synthetic": handle_gen_synthetic,
        "cube-info": handle_cube_info,
        "train": handle_train,
        "evaluate": handle_evaluate,
        "ablate": handle_ablate,
        "predict-map": handle_predict_map,
    }
    handler = handlers.get(args.command)
    if handler is None:
        parser.print_help()
        return
    code = handler(args)
    if code:
        sys.exit(code)


def handle_gen_synthetic(args) -> int:
    """Handle gen-synthetic command."""
    logger.info(f"Starting gen-synthetic: seed={args.seed}, out={args.out}")
    try:
        config = load_config(args.config, SyntheticConfig) if args.config else SyntheticConfig()
        overrides = _overrides(args, {"years": "years", "lat": "lat_len", "lon": "lon_len"})
        if overrides:
            config = SyntheticConfig.model_validate({**config.model_dump(), **overrides})
        generator = SyntheticCubeGenerator(config, args.seed)
        with timed_operation("synthetic cube generation"):
            cube = generator.generate()
            write_cube(cube, args.out, oracle=generator.oracle())
        print(f"{Fore.GREEN}Wrote synthetic cube to {args.out}{Style.RESET_ALL}")
        _print_summary(cube_summary(cube))
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "generating synthetic cube")


def handle_cube_info(args) -> int:
    """Handle cube-info command."""
    logger.info(f"Starting cube-info for {args.cube}")
    try:
        _print_summary(cube_summary(read_cube(args.cube)))
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "reading cube")


def handle_train(args) -> int:
    """Handle train command."""
    try:
        experiment = _experiment_from_args(args)
        if not experiment.cube:
            raise FirecastValidationError("no cube given; use --cube or set 'cube' in the config", field="cube")
        logger.info(f"Starting train: {experiment.model_dump_json()}")
        outcome = run_training(experiment)
        result = outcome.result
        last = result.log[-1]
        print(f"{Fore.GREEN}Trained {experiment.model} for {len(result.log)} epochs{Style.RESET_ALL}")
        print(f"Final loss: {last.train_loss:.6f}, best validation AUPRC: {result.best_val_auprc:.4f} "
              f"(epoch {result.best_epoch})")
        print(f"Outputs: {outcome.out_dir}")
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "training")


def handle_evaluate(args) -> int:
    """Handle evaluate command."""
    logger.info(f"Starting evaluate: checkpoint={args.checkpoint}, baseline={args.baseline}, split={args.split}")
    try:
        if args.checkpoint:
            checkpoint = load_checkpoint(args.checkpoint)
            experiment = checkpoint.experiment
            cube = read_cube(args.cube or experiment.cube)
            data = prepare_data(
                cube, experiment.sample_spec, experiment.split, experiment.negative_policy,
                experiment.seed, stats=checkpoint.stats,
            )
            scorer = ModelScorer(checkpoint.model, data.source)
            report = evaluate(scorer, data.splits.for_split(args.split), data.source.spec, args.split, experiment.seed)
        else:
            if not args.cube:
                raise FirecastValidationError("--cube is required for baselines", field="cube")
            cube = read_cube(args.cube)
            radius = args.radius or 0
            spec = SampleSpec(
                ts=args.ts or 12, h=args.horizon or 1, r=radius, k=min(args.k or 9, (2 * radius + 1) ** 2)
            )
            splits = enumerate_samples(cube, spec, resolve_split(cube, None), seed=args.seed or 0)
            scorer = BaselineScorer(args.baseline, cube, spec.h)
            report = evaluate(scorer, splits.for_split(args.split), spec, args.split, args.seed or 0)
        append_reports([report], args.results)
        print(f"{report.model} on {report.split}: AUPRC {report.auprc:.6f} "
              f"({report.n_pos} positives, {report.n_neg} negatives)")
        print(f"Appended to {args.results}")
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "evaluating")


def handle_ablate(args) -> int:
    """Handle ablate command."""
    try:
        grid = load_config(args.config, AblationGrid) if args.config else AblationGrid()
        base = grid.base.model_dump()
        base.update(_overrides(args, {"k": "k", "seed": "seed", "cube": "cube"}))
        if args.epochs is not None:
            base["train"] = grid.base.train.with_epochs(args.epochs).model_dump()
        fields = {**grid.model_dump(), "base": base}
        fields.update(_overrides(args, {"models": "models", "ts": "ts", "horizons": "horizons", "radii": "radii"}))
        grid = AblationGrid.model_validate(fields)
        if not grid.base.cube:
            raise FirecastValidationError("no cube given; use --cube or set 'base.cube' in the config", field="cube")
        out = Path(args.out or Path(grid.base.out) / "ablation")
        logger.info(f"Starting ablate: {len(grid.expand())} cells into {out}")
        runner = AblationRunner(grid, read_cube(grid.base.cube), out, workers=args.workers, split=args.split)
        reports = runner.run()
        failed = sum(1 for r in reports if r.status == "failed")
        print(f"{Fore.GREEN}Ran {len(reports)} ablation cells ({failed} failed){Style.RESET_ALL}")
        print(f"Results: {runner.results_path}")
        print(f"Pivot: {runner.pivot_path}")
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "running ablation")


def handle_predict_map(args) -> int:
    """Handle predict-map command."""
    logger.info(f"Starting predict-map: checkpoint={args.checkpoint}, t_idx={args.t_idx}")
    try:
        checkpoint = load_checkpoint(args.checkpoint)
        experiment = checkpoint.experiment
        cube = read_cube(args.cube or experiment.cube)
        data = prepare_data(
            cube, experiment.sample_spec, experiment.split, experiment.negative_policy,
            experiment.seed, stats=checkpoint.stats,
        )
        scores = predict_map(checkpoint.model, data.source, args.t_idx)
        out = Path(args.out)
        write_map_csv(scores, data.source, out / "map.csv")
        write_pgm(scores, data.cube.mask, out / "map.pgm")
        print(f"{Fore.GREEN}Wrote {out / 'map.csv'} and {out / 'map.pgm'}{Style.RESET_ALL}")
        return 0
    except Exception as e:
        return _handle_enhanced_error(e, "exporting prediction map")


if __name__ == "__main__":
    main()
