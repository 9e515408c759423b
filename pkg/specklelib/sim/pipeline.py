#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        pipeline.py
# Purpose:     Runs a configuration: medium, solvers and correlation, and writes the artifacts
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Orchestrates a run described by a RunConfig. ::

    from specklelib.sim import parse_config, run

    config = parse_config('wavefront_centered_absorber')
    report = run(config, 'sweep')
    print(report.artifacts)

Every run writes a ``manifest.json`` next to its artifacts with the sha256 of the configuration, the seed and worker
count, the package versions, the wall time and the list of the written files.
"""
import csv
import json
import platform
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, List, Optional, Union
import logging

import numpy as np
import scipy

from .run_config import RunConfig
from ..boundary.hfunction import compute_h_function
from ..correlation.c12 import c12_from_fields, c12_from_tally
from ..correlation.curve import CorrelationCurve, compare_curves
from ..correlation.sweep import run_sweep
from ..diffusion.problem import DiffusionProblem
from ..diffusion.solver import save_field, solve_diffusion
from ..scene.scene import with_shift
from ..transport.tally import save_tally
from ..transport.transport_runner import TransportRunner, default_workers
from ..transport.transport_task import clock_function, format_time_difference
from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Pipeline")

__all__ = ['RunReport', 'run', 'COMMANDS', 'write_agreement']

COMMANDS = ('kernel', 'hfun', 'mc', 'diffusion', 'sweep', 'compare')
AGREEMENT_COLUMNS = ('r', 'mc', 'stderr', 'diffusion', 'difference', 'bound', 'agree')


@dataclass
class RunReport:
    """
    Outcome of a run.

    :param command: the executed command
    :param status: exit status, 0 on success
    :param artifacts: files written by the run, manifest included
    :param results: scalar results by name (C12 values, transport coefficients)
    :param curves: correlation curves by engine name
    :param agreement: per-radius agreement report when both engines ran
    :param wall_time: elapsed time in seconds
    """
    command: str
    status: int = 0
    artifacts: List[Path] = field(default_factory=list)
    results: Dict[str, object] = field(default_factory=dict)
    curves: Dict[str, CorrelationCurve] = field(default_factory=dict)
    agreement: Optional[List[dict]] = None
    wall_time: float = 0.0


def write_agreement(report: List[dict], path: Union[str, Path]) -> Path:
    path = Path(path)
    with open(path, 'w', newline='', encoding='utf-8') as fout:
        writer = csv.writer(fout, lineterminator='\n')
        writer.writerow(AGREEMENT_COLUMNS)
        for row in report:
            writer.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in AGREEMENT_COLUMNS])
    return path


def _curve_path(config: RunConfig, directory: Path, engine: str) -> Path:
    name = Path(config.outputs.curve_csv)
    return directory / f"{name.stem}_{engine}{name.suffix or '.csv'}"


def _run_kernel(config: RunConfig, report: RunReport, directory: Path):
    coeffs = config.coefficients()
    report.results.update(coeffs.describe())


def _run_hfun(config: RunConfig, report: RunReport, directory: Path):
    h = compute_h_function(1.0)
    path = directory / "hfunction.txt"
    h.save(path)
    report.artifacts.append(path)
    report.results.update({'h_moment_0': h.moment(0), 'h_moment_1': h.moment(1), 'h_iterations': h.iterations})


def _run_static_mc(config: RunConfig, report: RunReport, directory: Path):
    runner = TransportRunner(n_workers=config.mc.workers, batch_size=config.mc.batch_size,
                             segment_bins=config.mc.segment_bins, lane_width=config.mc.lane_width)
    tally = runner.run(config.scene, config.coefficients(), config.mc.n_packets, config.mc.seed)
    estimate = c12_from_tally(tally)
    report.results.update({'mc_c12': estimate.value, 'mc_stderr': estimate.stderr})
    if config.outputs.dump_tally:
        report.artifacts.append(directory / "tally.txt")
        save_tally(tally, report.artifacts[-1])


def _run_static_diffusion(config: RunConfig, report: RunReport, directory: Path):
    coeffs = config.coefficients()
    datum = config.diffusion_datum()
    spacing = config.diffusion.grid_spacing
    base = with_shift(config.scene, None)
    w11 = solve_diffusion(DiffusionProblem.from_scene(base, coeffs, spacing, 'autocorrelation', datum),
                          tol=config.diffusion.solver_tol)
    w12 = solve_diffusion(DiffusionProblem.from_scene(config.scene, coeffs, spacing, 'cross_correlation', datum),
                          tol=config.diffusion.solver_tol)
    report.results['diffusion_c12'] = c12_from_fields(w11, w11, w12, config.scene.measured)
    report.results['diffusion_disconnected'] = w12.disconnected
    if config.outputs.dump_fields:
        for name, grid in (('w11', w11), ('w12', w12)):
            report.artifacts.append(directory / f"{name}.txt")
            save_field(grid, report.artifacts[-1])


def _run_sweep(config: RunConfig, report: RunReport, directory: Path, engines):
    if config.sweep is None:
        raise InvalidInputError(f"{config.path}: the configuration has no [sweep] section")
    coeffs = config.coefficients()
    for engine in engines:
        dump = config.outputs.dump_tally if engine == 'mc' else config.outputs.dump_fields
        params = config.sweep_params(coeffs, directory / f"dump_{engine}" if dump else None)
        curve = run_sweep(config.scene, config.sweep.radii, engine, params)
        report.curves[engine] = curve
        report.artifacts.append(curve.to_csv(_curve_path(config, directory, engine)))


def _agreement(report: RunReport, directory: Path):
    if 'mc' in report.curves and 'diffusion' in report.curves:
        report.agreement = compare_curves(report.curves['mc'], report.curves['diffusion'])
        report.artifacts.append(write_agreement(report.agreement, directory / "agreement.csv"))
        report.results['engines_agree'] = all(row['agree'] for row in report.agreement)
    elif 'mc_c12' in report.results and 'diffusion_c12' in report.results:
        mc = CorrelationCurve([0.0], [report.results['mc_c12']], 'mc', [report.results['mc_stderr']])
        diffusion = CorrelationCurve([0.0], [report.results['diffusion_c12']], 'diffusion')
        report.agreement = compare_curves(mc, diffusion)
        report.results['engines_agree'] = report.agreement[0]['agree']


def _write_manifest(config: RunConfig, report: RunReport, directory: Path) -> Path:
    from .. import __version__
    uses_mc = 'mc' in config.engines or report.command == 'mc'
    manifest = {
        'command': report.command,
        'config': str(config.path),
        'config_sha256': config.digest,
        'engine': config.engine,
        'seed': config.mc.seed if uses_mc else None,
        'workers': (config.mc.workers or default_workers()) if uses_mc else None,
        'versions': {'specklelib': __version__, 'python': platform.python_version(), 'numpy': np.__version__,
                     'scipy': scipy.__version__},
        'wall_time': report.wall_time,
        'results': {k: (float(v) if isinstance(v, (np.floating, float)) else v) for k, v in report.results.items()},
        'artifacts': [p.name if p.parent == directory else str(p) for p in report.artifacts],
    }
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + '\n', encoding='utf-8')
    return path


def run(config: RunConfig, command: str = 'sweep', out_dir: Optional[Union[str, Path]] = None) -> RunReport:
    """
    Executes one command on a configuration and writes its artifacts.

    :param config: validated configuration
    :param command: one of 'kernel', 'hfun', 'mc', 'diffusion', 'sweep', 'compare'
    :param out_dir: output directory, overrides the configured one; created when missing
    :returns: the run report
    :raises InvalidInputError: for a command the configuration doesn't support
    :raises OSError: if the output directory can't be written
    """
    if command not in COMMANDS:
        raise InvalidInputError(f"Unknown command '{command}', expected one of {COMMANDS}")
    directory = Path(out_dir) if out_dir is not None else config.outputs.directory
    directory.mkdir(parents=True, exist_ok=True)
    report = RunReport(command)
    t0 = clock_function()
    _logger.info("Running '%s' on %s", command, config.path)
    if command == 'kernel':
        _run_kernel(config, report, directory)
    elif command == 'hfun':
        _run_hfun(config, report, directory)
    elif command == 'mc':
        _run_static_mc(config, report, directory)
    elif command == 'diffusion':
        _run_static_diffusion(config, report, directory)
    elif command == 'sweep':
        _run_sweep(config, report, directory, config.engines)
        _agreement(report, directory)
    else:
        config = replace(config, engine='both')
        if config.sweep is not None:
            _run_sweep(config, report, directory, config.engines)
        else:
            _run_static_mc(config, report, directory)
            _run_static_diffusion(config, report, directory)
        _agreement(report, directory)
    report.wall_time = clock_function() - t0
    report.artifacts.append(_write_manifest(config, report, directory))
    _logger.info("'%s' finished. Time elapsed: %s", command, format_time_difference(report.wall_time))
    return report
