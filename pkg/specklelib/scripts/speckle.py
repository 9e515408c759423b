#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        speckle.py
# Purpose:     Command line interface of the speckle correlation solvers
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
import sys
import argparse
import logging
from dataclasses import replace
from pathlib import Path

from specklelib.boundary.hfunction import compute_h_function
from specklelib.sim.pipeline import COMMANDS, run
from specklelib.sim.run_config import ConfigError, parse_config
from specklelib.utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Pipeline")

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2
EXIT_IO = 3

HELP = {
    'kernel': "Prints the transport coefficients Sigma, eta, g and D of the configured medium",
    'hfun': "Writes the table of the H-function of conservative isotropic scattering",
    'mc': "Monte Carlo C12 of the configured static scene",
    'diffusion': "Diffusion C12 of the configured static scene",
    'sweep': "C12 along the configured wavefront sweep with the configured engine(s)",
    'compare': "Runs both engines and writes an agreement report",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=str, default=None,
                        help="Run configuration: a TOML file or the name of a bundled configuration "
                             "(wavefront_no_absorber, wavefront_centered_absorber, wavefront_offset_absorber)")
    common.add_argument("-o", "--out", type=str, default=None,
                        help="Output folder. Default is the folder given in the configuration")
    common.add_argument("-s", "--seed", type=int, default=None, help="Overrides the Monte Carlo seed")
    common.add_argument("-w", "--workers", type=int, default=None,
                        help="Number of Monte Carlo worker threads. Default is SPECKLELIB_WORKERS or the CPU count")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="Prints the progress. Repeat for debug messages")

    parser = argparse.ArgumentParser(
        prog="speckle",
        description="Correlation of speckle patterns in locally shifted random media, computed with a Monte Carlo "
                    "transport solver or with the diffusion approximation."
    )
    commands = parser.add_subparsers(dest="command", required=True)
    for command in COMMANDS:
        commands.add_parser(command, parents=[common], help=HELP[command], description=HELP[command])
    return parser


def _print_results(results: dict):
    for name, value in results.items():
        print("{}: {}{}".format(name, " " * (24 - len(name)), value))


def _execute(args) -> int:
    if args.config is None:
        if args.command != 'hfun':
            raise ConfigError("a configuration is required", field='--config')
        h = compute_h_function(1.0)
        out = Path(args.out or '.')
        out.mkdir(parents=True, exist_ok=True)
        path = out / "hfunction.txt"
        h.save(path)
        print(f"H table written to {path}")
        return 0
    config = parse_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("must be non-negative", field='--seed')
        config = replace(config, mc=replace(config.mc, seed=args.seed))
    if args.workers is not None:
        if args.workers < 1:
            raise ConfigError("must be at least 1", field='--workers')
        config = replace(config, mc=replace(config.mc, workers=args.workers))
    report = run(config, args.command, args.out)
    _print_results(report.results)
    for engine, curve in report.curves.items():
        print(f"{engine}: {len(curve)} points")
    if report.agreement is not None and not all(row['agree'] for row in report.agreement):
        print("Warning: the engines disagree, see agreement.csv")
    for path in report.artifacts:
        print(f"Written {path}")
    return report.status


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None and len(sys.argv) == 1:
        parser.print_help(sys.stderr)
        return EXIT_CONFIG
    args = parser.parse_args(argv)
    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    try:
        return _execute(args)
    except InvalidInputError as err:
        _logger.error("%s", err)
        return EXIT_CONFIG
    except ArithmeticError as err:
        # numerical failures and undefined correlations
        _logger.error("%s: %s", type(err).__name__, err)
        return EXIT_NUMERICAL
    except OSError as err:
        _logger.error("%s", err)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
