import argparse
from pathlib import Path
from typing import Sequence

from ..config.models import SuiteConfig
from ..harness.suites import SUITES
from ..harness.surface import CONSTRAINTS
from ..io.formats import load_json

CONFIG_FLAGS = ("seed", "samples", "tolerance", "n", "workers", "loglevel")


def parse_config(args: argparse.Namespace) -> SuiteConfig:
    """
    Merge the optional JSON config file with the global flags into the config model.

    Flags take precedence over the file, the file over the model defaults.

    :param args: Parsed arguments.
    :return: The config model.
    """
    config = {}
    if getattr(args, "config", None) is not None:
        config = load_json(args.config)
        if not isinstance(config, dict):
            raise ValueError(f"Config file {args.config} has to hold a JSON object.")
    overrides = {flag: getattr(args, flag) for flag in CONFIG_FLAGS if getattr(args, flag, None) is not None}
    return SuiteConfig(**{**config, **overrides})


def parse_args(argv: Sequence[str] | None = None) -> tuple[argparse.Namespace, SuiteConfig]:
    """
    Parse the command line.

    :param argv: Optional sequence of arguments to the argument parser.
    :return: The parsed arguments and the config model.
    """
    args = make_parser().parse_args(argv)
    return args, parse_config(args)


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps subcommand defaults from overwriting flags given before the subcommand
    flags = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS)
    flags.add_argument("--config", help="Path of a JSON config file.", type=Path)
    flags.add_argument("--seed", help="Seed of the per-sample random streams.", type=int)
    flags.add_argument("--samples", help="Number of Monte Carlo samples.", type=int)
    flags.add_argument("--tol", dest="tolerance", help="Violation tolerance.", type=float)
    flags.add_argument("-n", "--qubits", dest="n", help="Number of qubits for suites that take it.", type=int)
    flags.add_argument("--workers", help="Number of worker processes.", type=int)
    flags.add_argument("--loglevel", help="Level at which messages should be logged.", type=str.upper)
    return flags


def _tuple_arguments(parser: argparse.ArgumentParser) -> None:
    for name, help_text in (("x", "tau_B|C"), ("y", "tau_A|C"), ("z", "tau_A|B"), ("t", "tau_A|B|C")):
        parser.add_argument(name, help=help_text, type=float)


def make_parser() -> argparse.ArgumentParser:
    """
    Function to create ArgumentParser.

    :return: ArgumentParser
    """
    flags = _global_flags()
    parser = argparse.ArgumentParser(
        description="Tangles of multi-qubit states and the constraints they satisfy.", parents=[flags]
    )
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    tangles = commands.add_parser("tangles", parents=[flags], help="All subset tangles and 1-tangles of a ket.")
    tangles.add_argument("state", help="Path of a ket JSON file.", type=Path)

    ghz = commands.add_parser("ghz", parents=[flags], help="Closed-form tangles of GHZ-class parameters.")
    ghz.add_argument("params", help="Path of a params JSON file.", type=Path)

    check = commands.add_parser("check", parents=[flags], help="Evaluate the constraints at a tangle tuple.")
    _tuple_arguments(check)

    invert = commands.add_parser("invert", parents=[flags], help="GHZ-class parameters of a tangle tuple.")
    _tuple_arguments(invert)

    sample = commands.add_parser("sample", parents=[flags], help="Run a Monte Carlo suite.")
    sample.add_argument("suite", help="Suite name.", choices=sorted(SUITES))

    surface = commands.add_parser("surface", parents=[flags], help="Sample a constraint on a grid as CSV.")
    surface.add_argument("constraint", help="Constraint name.", choices=CONSTRAINTS)
    surface.add_argument("--grid", help="Path of a grid JSON file.", type=Path, default=None)
    surface.add_argument("--steps", help="Steps per axis of a cube grid.", type=int, default=50)
    surface.add_argument("--lo", help="Lower end of a cube grid.", type=float, default=0.0)
    surface.add_argument("--hi", help="Upper end of a cube grid.", type=float, default=1.0)
    surface.add_argument("--slices", help="Signed t^2 slices.", type=float, nargs="+", default=None)
    surface.add_argument("--output", help="Target .csv or .parquet file, stdout otherwise.", type=Path, default=None)

    canonical = commands.add_parser("canonical", parents=[flags], help="Normal form of a 3-qubit ket.")
    canonical.add_argument("state", help="Path of a ket JSON file, or of a normal-form file with --form.", type=Path)
    canonical.add_argument("--form", help="Read the file as a normal form instead of a ket.", action="store_true")

    monogamy = commands.add_parser("monogamy", parents=[flags], help="Strong-monogamy residuals of parameters.")
    monogamy.add_argument("params", help="Path of a params JSON file.", type=Path)

    roof = commands.add_parser("roof", parents=[flags], help="Brute-force roofs of a rank <= 2 density matrix.")
    roof.add_argument("density", help="Path of a density-matrix JSON file.", type=Path)
    roof.add_argument("--grid-points", help="Grid size per angle.", type=int, default=721)
    roof.add_argument("--three-term", help="Also search three-term decompositions.", action="store_true")
    roof.add_argument("--restarts", help="Restarts of the three-term search.", type=int, default=8)

    return parser
