"""
Command-line entry point.

    orbitkernel <command> [--config FILE] [--seed N] [--out PATH]
                [--format csv|json] [--threads N] [--verbose]

Exit codes: 0 when every check passes, 1 when a check fails, 2 on
configuration errors.
"""

import argparse
import logging
import sys

from orbitkernel.config import get_config
from orbitkernel.config.base import COMMANDS, FORMATS
from orbitkernel.const import EXIT_CHECK_FAILED, EXIT_CONFIG_ERROR
from orbitkernel.errors import ConfigError, InsufficientSamples, QuadratureNotConverged, StabilityViolation
from orbitkernel.modules.harness import (
    build_document,
    render_csv,
    render_json,
    run_generator_check,
    run_geometry_check,
    run_sde_check,
    run_sweep,
    run_verify_relation,
    write_output,
)

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(prog="orbitkernel", description=__doc__.strip().splitlines()[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--config", help="JSON configuration document")
    parser.add_argument("--seed", type=int, help="Override the simulation and check seeds")
    parser.add_argument("--out", dest="output_path", help="Output file, stdout when omitted")
    parser.add_argument("--format", choices=FORMATS, help="Report format")
    parser.add_argument("--threads", type=int, help="Worker threads for path simulation")
    parser.add_argument("-v", "--verbose", action="store_true", help="Log progress to stderr")
    return parser


def run(cfg, threads=None):
    """
    Execute the configured command.

    Returns:
        Tuple (report text, CheckSummary)
    """
    command = cfg.command
    report = reports = stats = None
    if command == "geometry-check":
        summary = run_geometry_check(cfg)
    elif command == "generator-check":
        summary = run_generator_check(cfg)
    elif command == "sde-check":
        summary = run_sde_check(cfg, threads=threads)
    elif command == "verify-relation":
        report, summary = run_verify_relation(cfg, threads=threads)
    else:
        reports, stats, summary = run_sweep(cfg, threads=threads)

    if cfg.format == "csv":
        text = render_csv(cfg, summary, report=report, reports=reports, stats=stats)
    else:
        text = render_json(build_document(cfg, summary, report=report, reports=reports, stats=stats))
    return text, summary


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="[%(module)-12s] %(message)s",
        stream=sys.stderr,
    )

    try:
        cfg = get_config(
            args.config,
            command=args.command,
            seed=args.seed,
            output_path=args.output_path,
            format=args.format,
        )
        text, summary = run(cfg, threads=args.threads)
    except (ConfigError, StabilityViolation) as exc:
        logger.error("%s", exc)
        return EXIT_CONFIG_ERROR
    except (InsufficientSamples, QuadratureNotConverged) as exc:
        logger.error("%s", exc)
        return EXIT_CHECK_FAILED

    write_output(text, cfg.output_path, sys.stdout)
    for result in summary.results:
        if not result.passed:
            logger.warning(
                "check failed: %s residual %.3g tolerance %.3g", result.name, result.residual, result.tolerance
            )
    return summary.exit_code


if __name__ == "__main__":
    sys.exit(main())
