"""
Command line interface: qzeno <experiment> [options]
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from .analytic import Branch
from .core import SweepIOError, SystemParams, ZenoError
from .experiments import (
    DEFAULT_C0,
    DEFAULT_C0_GRID,
    DEFAULT_N_MAX,
    DEFAULT_TIME_POINTS,
    Experiment,
    SweepSpec,
    emit,
    run_sweep,
    run_validate,
)
from .utils import STDOUT, write_csv
from .validation import REPORT_COLUMNS

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_IO = 3

DEFAULT_CONFIG = Path.home() / ".qzeno" / "config.json"
LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
LOG_LEVELS = ('DEBUG', 'INFO', 'WARNING', 'ERROR')

DEFAULTS = {
    "g": 1.0,
    "n_max": DEFAULT_N_MAX,
    "time_points": DEFAULT_TIME_POINTS,
    "branch": Branch.PLUS.value,
    "workers": 1,
    "log_level": "WARNING",
}

SINGLE_STATE = {Experiment.ZENO_SWEEP, Experiment.BELL_PREP}


class UsageError(Exception):
    """Bad command line or config file"""


class ArgumentParser(argparse.ArgumentParser):
    """argparse exits with 2 on bad usage; usage errors here exit with 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def load_config(config_file: Optional[str] = None) -> dict:
    """
    Load configuration from a JSON file

    An explicit config_file must exist and parse; the default
    ~/.qzeno/config.json is optional.

    Raises:
        UsageError: if an explicit file is missing or either file is malformed
    """
    if config_file:
        path = Path(config_file)
        if not path.exists():
            raise UsageError(f"Config file not found: {config_file}")
    elif DEFAULT_CONFIG.exists():
        path = DEFAULT_CONFIG
    else:
        return {}

    try:
        with open(path, 'r') as f:
            config = json.load(f)
    except json.JSONDecodeError as e:
        raise UsageError(f"Error parsing config file {path}: {e}")
    except OSError as e:
        raise UsageError(f"Could not read config file {path}: {e}")

    if not isinstance(config, dict):
        raise UsageError(f"Config file {path} must hold a JSON object")
    logger.debug(f"Loaded config from {path}")
    return config


def float_list(text: str) -> List[float]:
    """Parse "0.1,0.2,0.3" """
    try:
        values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> ArgumentParser:
    common = ArgumentParser(add_help=False)
    state = common.add_argument_group("initial state")
    state.add_argument('--c0', type=float_list,
                       help='Initial concurrence(s), comma separated, in (0, 1]')
    state.add_argument('--alpha0', type=float, help='|alpha0| (needs --beta0; excludes --c0)')
    state.add_argument('--beta0', type=float, help='|beta0| (needs --alpha0; excludes --c0)')
    state.add_argument('--branch', choices=[b.value for b in Branch],
                       help='Root of |alpha0| fixed by c0 (default: plus)')

    grid = common.add_argument_group("grid")
    grid.add_argument('--n-max', type=int, help=f'Largest N (default: {DEFAULT_N_MAX})')
    grid.add_argument('--time-points', type=int,
                      help=f'Points on gt in [0, pi/2] (default: {DEFAULT_TIME_POINTS})')
    grid.add_argument('--g', type=float, help='Coupling rate (default: 1.0)')

    run = common.add_argument_group("run")
    run.add_argument('--out', default=STDOUT, help='Output CSV path, "-" for stdout (default)')
    run.add_argument('--workers', type=int, help='Threads computing sweep points (default: 1)')
    run.add_argument('--config', type=str,
                     help=f'JSON config file (default: {DEFAULT_CONFIG} if present)')
    run.add_argument('--log-level', choices=LOG_LEVELS)
    run.add_argument('-v', '--verbose', action='store_true', help='Same as --log-level INFO')

    parser = ArgumentParser(
        prog='qzeno',
        description='Zeno-like null measurements on a double Jaynes-Cummings qubit system',
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog='''
Examples:
  # C_N for both branches, N = 1..100, c0 = 0.8
  %(prog)s zeno-sweep --c0 0.8

  # Free-evolution concurrence surface, written to a file
  %(prog)s free-evolution --out free.csv

  # One measurement at t* on sqrt(0.9)|11> + sqrt(0.1)|00>
  %(prog)s bell-prep --alpha0 0.9486832980505138 --beta0 0.31622776601683794

  # Oracle vs closed-form invariant suite
  %(prog)s validate
        ''',
    )
    sub = parser.add_subparsers(dest='experiment', metavar='experiment', required=True)
    helps = {
        Experiment.ZENO_SWEEP: 'C_N (both branches) for tau = pi/(2gN)',
        Experiment.FREE_EVOLUTION: 'C_f over (gt, c0), closed form and oracle',
        Experiment.SINGLE_MEASUREMENT: 'C_1 after one null measurement at gt',
        Experiment.BELL_PREP: 'single measurement at t* leaving ab in a Bell state',
        Experiment.VALIDATE: 'run the oracle-vs-closed-form invariant suite',
    }
    for experiment, text in helps.items():
        sub.add_parser(experiment.value, parents=[common], help=text, description=text)
    return parser


def _setting(name: str, args: argparse.Namespace, config: dict):
    """CLI flag > config file > built-in default"""
    value = getattr(args, name, None)
    if value is not None:
        return value
    return config.get(name, DEFAULTS.get(name))


def _c0_grid(experiment: Experiment, args: argparse.Namespace, config: dict) -> List[float]:
    if args.c0 is not None:
        return args.c0
    if "c0" in config:
        value = config["c0"]
        return list(value) if isinstance(value, list) else [value]
    if experiment in SINGLE_STATE:
        return [DEFAULT_C0]
    return list(DEFAULT_C0_GRID)


def build_spec(args: argparse.Namespace, config: dict) -> SweepSpec:
    """
    Merge CLI flags and config into a SweepSpec

    Raises:
        UsageError: on conflicting or incomplete initial-state flags
        InvalidParameterError: on out-of-range values
    """
    experiment = Experiment(args.experiment)
    g = float(_setting("g", args, config))

    explicit = args.alpha0 is not None or args.beta0 is not None
    if explicit and args.c0 is not None:
        raise UsageError("Give the initial state either as --c0 or as --alpha0/--beta0, not both")
    if explicit and (args.alpha0 is None or args.beta0 is None):
        raise UsageError("--alpha0 and --beta0 must be given together")

    params = SystemParams(args.alpha0, args.beta0, g) if explicit else None
    c0_grid = _c0_grid(experiment, args, config) if params is None else [params.c0]
    if experiment in SINGLE_STATE and len(c0_grid) != 1:
        raise UsageError(f"{experiment.value} takes a single c0, got {len(c0_grid)}")

    try:
        branch = Branch(_setting("branch", args, config))
    except ValueError:
        raise UsageError(f"Unknown branch: {_setting('branch', args, config)}")

    return SweepSpec(
        experiment=experiment,
        c0_grid=tuple(c0_grid),
        branch=branch,
        n_max=int(_setting("n_max", args, config)),
        time_points=int(_setting("time_points", args, config)),
        g=g,
        output_path=args.out,
        params=params,
        workers=int(_setting("workers", args, config)),
    )


def configure_logging(level: str):
    """
    Raises:
        UsageError: if level is not one of LOG_LEVELS
    """
    if level not in LOG_LEVELS:
        raise UsageError(f"Unknown log level: {level} (choose from {', '.join(LOG_LEVELS)})")
    logging.basicConfig(level=getattr(logging, level), format=LOG_FORMAT,
                        stream=sys.stderr, force=True)


def run_validate_command(out: str) -> int:
    report = run_validate()
    write_csv(out, REPORT_COLUMNS, report.as_rows())
    for failure in report.failures:
        print(f"FAILED {failure.name}: {failure.max_deviation:.3e} > "
              f"{failure.tolerance:.0e} ({failure.detail})", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_VALIDATION


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point for CLI"""
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config)
        level = 'INFO' if args.verbose else _setting("log_level", args, config)
        configure_logging(str(level).upper())

        if args.experiment == Experiment.VALIDATE.value:
            return run_validate_command(args.out)

        spec = build_spec(args, config)
        logger.info(f"Running {spec.experiment.value} (g={spec.coupling}, workers={spec.workers})")
        emit(run_sweep(spec), spec.output_path)
        return EXIT_OK

    except SweepIOError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_IO
    except (UsageError, ZenoError, ValueError, TypeError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
