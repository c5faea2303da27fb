"""
Command-line front end: parse flags, validate them into a RunConfig, run the command,
write the report and map the outcome to an exit status.

Exit codes: 0 every certified check passed, 1 a certified mismatch, 2 invalid input,
3 an engine error.
"""
import argparse
import sys
from typing import Callable, Dict, List, Optional

from pydantic import ValidationError

from tateforge.commands.catalog import cmd_catalog, cmd_hochschild
from tateforge.commands.chromatic import cmd_chromatic
from tateforge.commands.margolis import cmd_ext, cmd_margolis
from tateforge.commands.page import cmd_hfp_e3, cmd_tate_e3
from tateforge.commands.tower import cmd_tower
from tateforge.config import settings
from tateforge.exceptions import InvalidRunConfig, TateForgeError, UnsupportedId
from tateforge.logging_config import (
    ComputationEvents,
    get_logger,
    log_computation_event,
    log_error,
    set_command,
    set_run_id,
    setup_logging,
)
from tateforge.reports import Report, write_report
from tateforge.validators import RunConfig

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INVALID = 2
EXIT_ENGINE = 3

COMMANDS: Dict[str, Callable[[RunConfig], Report]] = {
    "margolis": cmd_margolis,
    "ext": cmd_ext,
    "tate-e3": cmd_tate_e3,
    "hfp-e3": cmd_hfp_e3,
    "tower": cmd_tower,
    "chromatic": cmd_chromatic,
    "catalog": cmd_catalog,
    "hochschild": cmd_hochschild,
}


RANGE_FLAGS = ("--cols", "--i-range")


def join_range_flags(argv: List[str]) -> List[str]:
    """Glue `--cols -6..6` into `--cols=-6..6`; argparse takes a bare leading '-' for a flag."""
    joined: List[str] = []
    it = iter(argv)
    for arg in it:
        value = next(it, None) if arg in RANGE_FLAGS else None
        joined.append(arg if value is None else f"{arg}={value}")
    return joined


class ArgumentError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so bad flags map to exit status 2."""

    def error(self, message):
        raise ArgumentError(message)


def _output_flags(p: argparse.ArgumentParser):
    p.add_argument("--max-degree", type=int, dest="max_degree", help="internal degree cap N")
    p.add_argument("--format", choices=["json", "tsv", "text"], default="text")
    p.add_argument("--output", help="write the report here instead of stdout")


def _height_flag(p: argparse.ArgumentParser, required: bool = True):
    p.add_argument("--n", required=required, help="chromatic height (or 'inf' for THH(HF_2))")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tateforge", description="Symbolic F_2 homology engine for Tate and fixed point spectral sequences")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("margolis", help="Margolis homology H(M;Q_m) of a space id")
    p.add_argument("--space", required=True)
    p.add_argument("--q", type=int, dest="m", required=True)
    _output_flags(p)

    p = sub.add_parser("ext", help="Ext over E(Q_m)")
    p.add_argument("--space", required=True)
    p.add_argument("--q", type=int, dest="m", required=True)
    p.add_argument("--s-max", type=int, dest="s_max", default=6)
    _output_flags(p)

    for name, helptext in (("tate-e3", "Tate E³ page"), ("hfp-e3", "homotopy fixed point E³ page")):
        p = sub.add_parser(name, help=helptext)
        _height_flag(p)
        p.add_argument("--cols", dest="columns", help="column range A..B")
        p.add_argument("--window", type=int)
        _output_flags(p)

    p = sub.add_parser("tower", help="Margolis homology along a truncation tower")
    p.add_argument("--side", choices=["tp", "tcminus"], default="tp")
    _height_flag(p)
    p.add_argument("--q", type=int, dest="m", required=True)
    p.add_argument("--i-range", dest="i_range", help="truncation range A..B")
    p.add_argument("--window", type=int)
    _output_flags(p)

    p = sub.add_parser("chromatic", help="vanishing table m -> verdicts for one height")
    _height_flag(p)
    p.add_argument("--m-max", type=int, dest="m_max", default=4)
    p.add_argument("--i-range", dest="i_range", help="truncation range A..B")
    p.add_argument("--window", type=int)
    _output_flags(p)

    p = sub.add_parser("catalog", help="JSON audit dump of a comodule")
    p.add_argument("--space", required=True)
    _output_flags(p)
    p.set_defaults(format="json")

    p = sub.add_parser("hochschild", help="bar-complex Hochschild homology oracle")
    p.add_argument("--algebra", required=True, choices=["y1", "z1sq", "ext1", "f2"])
    p.add_argument("--s-max", type=int, dest="s_max", default=6)
    _output_flags(p)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    data = {k: v for k, v in vars(args).items() if v is not None}
    n = data.pop("n", None)
    if n is not None:
        if str(n).lower() in {"inf", "infinity"}:
            data["n_inf"] = True
        else:
            try:
                data["n"] = int(n)
            except ValueError:
                raise InvalidRunConfig(f"--n must be an integer or 'inf', got {n!r}")
    if "max_degree" not in data and args.command == "hochschild":
        data["max_degree"] = settings.bar_max_degree
    return RunConfig(**data)


def run(config: RunConfig) -> Report:
    set_command(config.command)
    return COMMANDS[config.command](config)


def main(argv: Optional[List[str]] = None) -> int:
    setup_logging()
    run_id = set_run_id()
    try:
        args = build_parser().parse_args(join_range_flags(sys.argv[1:] if argv is None else argv))
        config = config_from_args(args)
    except (ArgumentError, ValidationError, InvalidRunConfig) as e:
        print(f"❌ invalid input: {e}", file=sys.stderr)
        return EXIT_INVALID

    log_computation_event(ComputationEvents.RUN_STARTED, run_id=run_id, command=config.command)
    try:
        report = run(config)
    except (InvalidRunConfig, UnsupportedId) as e:
        log_error(ComputationEvents.RUN_FAILED, e, command=config.command)
        print(f"❌ invalid input: {e.message}", file=sys.stderr)
        return EXIT_INVALID
    except TateForgeError as e:
        log_error(ComputationEvents.RUN_FAILED, e, command=config.command)
        print(f"❌ {e.__class__.__name__}: {e.message}", file=sys.stderr)
        return EXIT_ENGINE

    text = write_report(report, config.format, config.output)
    if not config.output:
        sys.stdout.write(text)
    log_computation_event(
        ComputationEvents.RUN_COMPLETED,
        command=config.command,
        verdicts=len(report.verdicts),
        failed=[v.name for v in report.failed],
    )
    return EXIT_MISMATCH if report.failed else EXIT_OK
