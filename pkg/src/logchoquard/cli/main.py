"""Command line interface.

Every subcommand exits with 0 when all its checks pass, 1 when one fails
(or a computation breaks down) and 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from ..constants import ProblemParams, constants_bundle, constants_checks
from ..errors import ConfigError, InputTypeError, LogChoquardError
from ..nonlinearity import verify_assumptions
from ..radial import (
    RadialField,
    gagliardo_seminorm,
    plateau_checks,
)
from ..verification import VerificationReport
from .config import RunConfig, parse_config
from .run import (
    RunDirectory,
    poisson_records,
    resolve,
    run_continuation,
    run_verify_all,
    solve,
)

logger = logging.getLogger(__name__)

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _exit_code(report: VerificationReport) -> int:
    for record in report.failures:
        logger.warning(
            "FAILED %s [%s]: measured %s, bound %s",
            record.check_id,
            record.anchor,
            record.measured,
            record.bound,
        )
    return EXIT_PASS if report.passed else EXIT_FAIL


def _cmd_constants(args) -> int:
    try:
        params = ProblemParams(N=args.N, s=args.s, tau=args.tau)
    except (*InputTypeError, LogChoquardError) as err:
        raise ConfigError(str(err)) from err
    report = constants_bundle(
        params, args.R, mu_form=args.mu_form, tol=args.tol
    )
    records = VerificationReport(constants_checks(params, report, args.tol))
    _emit(report.as_dict())
    return _exit_code(records)


def _cmd_check_f(args) -> int:
    config = parse_config(args.config)
    config, nl = resolve(config)
    audit = verify_assumptions(
        nl,
        config.problem,
        limit_threshold=config.nonlinearity.limit_threshold,
        mu_form=config.mu_form,
    )
    _emit({"lambda": nl.lam, **audit._asdict()})
    return _exit_code(VerificationReport(audit.records()))


def _cmd_seminorm(args) -> int:
    config = parse_config(args.config)
    params = config.problem
    if args.csv is not None:
        u = RadialField.from_csv(args.csv, order=config.grid.order)
        value = gagliardo_seminorm(u, params.s, params.N)
        _emit({"seminorm": value, "source": str(args.csv)})
        return EXIT_PASS
    records = plateau_checks(params, config.make_grid(), config.R)
    _emit({"R": config.R, "records": [r._asdict() for r in records]})
    return _exit_code(VerificationReport(records))


def _prepare(args) -> tuple[RunConfig, RunDirectory]:
    config = parse_config(args.config)
    return config, RunDirectory(args.run)


def _cmd_solve(args) -> int:
    config, directory = _prepare(args)
    config, nl = resolve(config)
    directory.write_config(config)
    result, records = solve(config, nl, args.mu, verbose=args.verbose)
    report = VerificationReport(records)
    directory.write_saddles([result])
    directory.write_levels([result])
    directory.write_report(report)
    _emit(result.as_dict())
    return _exit_code(report)


def _cmd_continue(args) -> int:
    config, directory = _prepare(args)
    config, nl = resolve(config)
    directory.write_config(config)
    out, records = run_continuation(config, nl, verbose=args.verbose)
    report = VerificationReport(records)
    directory.write_saddles(list(out.results))
    directory.write_levels(list(out.results))
    directory.write_field("u0", out.u0)
    directory.write_report(report)
    _emit({"levels": out.levels(), "log_residual": out.log_residual})
    return _exit_code(report)


def _cmd_poisson(args) -> int:
    directory = RunDirectory(args.run)
    config = directory.read_config()
    config, nl = resolve(config)
    u0 = directory.read_field("u0", order=config.grid.order)
    mu = min(config.continuation.schedule)
    potential, records = poisson_records(u0, nl, config, mu)
    directory.write_potential(potential)

    report = VerificationReport()
    path = directory.path / "report.json"
    if path.is_file():
        new_ids = {record.check_id for record in records}
        previous = VerificationReport.read(path)
        report.extend([r for r in previous if r.check_id not in new_ids])
    report.extend(records)
    directory.write_report(report)
    _emit(potential.as_dict())
    return _exit_code(VerificationReport(records))


def _cmd_verify_all(args) -> int:
    config = parse_config(args.config)
    report = run_verify_all(config, args.run, verbose=args.verbose)
    logger.info(
        "%d records, %d failures", len(report), len(report.failures)
    )
    return _exit_code(report)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="logchoquard",
        description=(
            "Constants, audits and mountain-pass solutions of the"
            " logarithmic fractional Choquard equation"
        ),
    )
    level = parser.add_mutually_exclusive_group()
    level.add_argument(
        "-v", "--verbose", action="count", default=0, help="debug logging"
    )
    level.add_argument(
        "-q", "--quiet", action="store_true", help="only log warnings"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    constants = commands.add_parser(
        "constants", help="explicit constants as JSON"
    )
    constants.add_argument("--N", type=int, required=True)
    constants.add_argument("--s", type=float, required=True)
    constants.add_argument("--tau", type=float, required=True)
    constants.add_argument("--R", type=float, default=1 / 3)
    constants.add_argument(
        "--mu-form", choices=["literal", "difference"], default="difference"
    )
    constants.add_argument("--tol", type=float, default=1e-10)
    constants.set_defaults(handler=_cmd_constants)

    check_f = commands.add_parser(
        "check-f", help="audit of the growth assumptions of f"
    )
    check_f.add_argument("--config", type=Path, required=True)
    check_f.set_defaults(handler=_cmd_check_f)

    seminorm = commands.add_parser(
        "seminorm", help="seminorm of the plateau or of a CSV field"
    )
    seminorm.add_argument("--config", type=Path, required=True)
    seminorm.add_argument("--csv", type=Path, default=None)
    seminorm.set_defaults(handler=_cmd_seminorm)

    solve = commands.add_parser("solve", help="saddle search at one mu")
    solve.add_argument("--config", type=Path, required=True)
    solve.add_argument("--mu", type=float, required=True)
    solve.add_argument("--run", type=Path, default=Path("run"))
    solve.set_defaults(handler=_cmd_solve)

    cont = commands.add_parser("continue", help="continuation as mu -> 0")
    cont.add_argument("--config", type=Path, required=True)
    cont.add_argument("--run", type=Path, default=Path("run"))
    cont.set_defaults(handler=_cmd_continue)

    poisson = commands.add_parser(
        "poisson", help="Poisson potential of the limit u0 of a run"
    )
    poisson.add_argument("--run", type=Path, required=True)
    poisson.set_defaults(handler=_cmd_poisson)

    verify = commands.add_parser("verify-all", help="every enabled check")
    verify.add_argument("--config", type=Path, required=True)
    verify.add_argument("--run", type=Path, default=Path("run"))
    verify.set_defaults(handler=_cmd_verify_all)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point of the ``logchoquard`` console script."""
    args = build_parser().parse_args(argv)
    if args.verbose:
        level = logging.DEBUG
    elif args.quiet:
        level = logging.WARNING
    else:
        level = logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    try:
        return args.handler(args)
    except ConfigError as err:
        logger.error("Configuration error: %s", err)
        return EXIT_CONFIG
    except (LogChoquardError, ArithmeticError) as err:
        logger.error("%s: %s", type(err).__name__, err)
        return EXIT_FAIL
