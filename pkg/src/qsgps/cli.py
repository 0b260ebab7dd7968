#!/usr/bin/env python3
"""
Command-line frontend.

Every subcommand writes a JSON report (or a table / CSV) to stdout or
--output. Logging goes to stderr, so report bytes depend only on the
arguments and the seed.

Exit status:
    0  success
    1  other error
    2  usage error
    3  configuration or input file error
    4  position solver error
    5  protocol run finished without a position fix
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

from qsgps.constants import DEFAULT_SEED, DEFAULT_THRESHOLD
from qsgps.errors import ConfigError, QsgpsError, SolverError
from qsgps.managers.command_managers import ATTACK_SETS, CommandRegistry
from qsgps.models.command import CommandSpec

logger = logging.getLogger('qsgps.cli')

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_CONFIG = 3
EXIT_SOLVER = 4
EXIT_NO_FIX = 5

GLOBAL_OPTIONS = ("seed", "output", "format", "verbose", "subcommand")

_registry = CommandRegistry()


def _error_text(error: BaseException) -> str:
    return json.dumps({"error": {"type": type(error).__name__, "message": str(error)}}, indent=2, sort_keys=True)


def run_command(spec: CommandSpec) -> Tuple[int, str]:
    """
    Run one subcommand and serialize its report.

    Returns:
        (exit status, report text); on failure the text is a JSON error object
    """
    manager = _registry.find_manager(spec)
    if manager is None:
        return EXIT_USAGE, _error_text(ConfigError(f"No handler for {spec.subcommand}"))
    logger.debug(f"Running {spec} with {manager.__name__}")
    try:
        report = manager.run(spec)
        return manager.exit_code(report), manager.render(report, spec.format)
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG, _error_text(e)
    except SolverError as e:
        logger.error(f"Solver error: {e}")
        return EXIT_SOLVER, _error_text(e)
    except (QsgpsError, ValueError) as e:
        logger.error(f"Error: {e}")
        return EXIT_ERROR, _error_text(e)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--seed', type=int, help=f'RNG seed (default: {DEFAULT_SEED})')
    common.add_argument('-o', '--output', help='Output file (default: stdout)')
    common.add_argument('--format', choices=['json', 'table', 'csv'], default='json',
                        help='Report format; csv only for attack-sweep')
    common.add_argument('-v', '--verbose', action='store_true', help='Enable verbose output')

    parser = argparse.ArgumentParser(
        prog='qsecure-gps',
        description='Device-independent quantum-secured positioning simulator',
    )
    sub = parser.add_subparsers(dest='subcommand', required=True)

    verify = sub.add_parser('verify-code', parents=[common], help='Check stabilizers, encoder and syndromes')
    verify.add_argument('--inputs', type=int, default=20, help='Random encoder inputs to test')

    bell = sub.add_parser('bell', parents=[common], help='Exact and sampled Bell values')
    bell.add_argument('--functional', choices=['chsh', 'i5'], default='i5')
    bell.add_argument('--shots', type=int, default=10_000, help='Shots per correlator term')

    bound = sub.add_parser('classical-bound', parents=[common], help='Deterministic classical bound')
    bound.add_argument('--functional', choices=['chsh', 'i5'], default='i5')

    sweep = sub.add_parser('attack-sweep', parents=[common], help='Exact I5 under attacks')
    sweep.add_argument('--attacks', default='all-single-pauli',
                       help=f"One of {', '.join(ATTACK_SETS)}, or a JSON attack file")
    sweep.add_argument('--threshold', type=float, default=DEFAULT_THRESHOLD)
    sweep.add_argument('--correct', action='store_true', help='Also run syndrome correction')

    hardware = sub.add_parser('hardware', parents=[common], help='Gate time and fidelity per platform')
    group = hardware.add_mutually_exclusive_group()
    group.add_argument('--profile', help='Built-in profile name (superconducting, trapped-ion, ideal)')
    group.add_argument('--profile-file', help='JSON hardware profile')

    position = sub.add_parser('position', parents=[common], help='Solve a position fix')
    source = position.add_mutually_exclusive_group(required=True)
    source.add_argument('--scenario', help='JSON scenario file')
    source.add_argument('--random', type=int, metavar='N', help='Random constellation of N visible satellites')

    run = sub.add_parser('protocol-run', parents=[common], help='Full quantum-secured positioning task')
    run.add_argument('--config', required=True, help='JSON protocol config')
    return parser


def spec_from_args(args: argparse.Namespace) -> CommandSpec:
    options: Dict[str, Any] = {k: v for k, v in vars(args).items() if k not in GLOBAL_OPTIONS}
    return CommandSpec(args.subcommand, options, seed=args.seed, output=args.output, format=args.format)


def main(argv: Optional[List[str]] = None) -> int:
    """Command-line entry point."""
    # Configure logging
    logging_format = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    logging.basicConfig(level=logging.INFO, format=logging_format)

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE

    if args.verbose:
        logging.getLogger('qsgps').setLevel(logging.DEBUG)
        logger.debug("Verbose logging enabled")

    if args.format == 'csv' and args.subcommand != 'attack-sweep':
        parser.print_usage(sys.stderr)
        logger.error("--format csv is only available for attack-sweep")
        return EXIT_USAGE

    try:
        spec = spec_from_args(args)
        status, text = run_command(spec)
        if spec.output and status in (EXIT_OK, EXIT_NO_FIX):
            logger.info(f"Writing to file: {spec.output}")
            with open(spec.output, 'w', encoding='utf-8') as f:
                f.write(text + "\n")
        else:
            sys.stdout.write(text + "\n")
        return status
    except ConfigError as e:
        logger.error(f"Configuration error: {e}")
        sys.stdout.write(_error_text(e) + "\n")
        return EXIT_CONFIG
    except Exception as e:
        logger.error(f"Error: {str(e)}", exc_info=True)
        sys.stdout.write(_error_text(e) + "\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
