#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        sweep.py
# Purpose:     Correlation of consecutive speckle patterns along an expanding wavefront
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
An elastic wavefront expands from a center. At each instant r_n the medium differs from the previous instant on the
support of the n-th wavefront field, and C12 of the two speckle patterns is computed. ::

    from specklelib.correlation import run_sweep, SweepParams
    from specklelib.scene import Box, Scene

    scene = Scene(Box((-1, -1), (1, 1)))
    curve = run_sweep(scene, [0.1, 0.2, 0.3], 'diffusion', SweepParams(grid_spacing=0.02, thickness=2.0))

The diffusion engine solves the autocorrelation problem once and one cross-correlation problem per radius. The Monte
Carlo engine follows one set of packet histories and tallies every wavefront on it, so that the points of the curve
are correlated and the curve is smooth.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence, Union
import logging

from .c12 import c12_from_fields, c12_from_tally
from .curve import CorrelationCurve, Engine
from ..diffusion.problem import DiffusionProblem
from ..diffusion.solver import save_field, solve_diffusion
from ..medium.kernel import TransportCoefficients
from ..scene.scene import Scene, with_shift
from ..scene.shift import ShiftRegime, wavefront_sequence
from ..transport.tally import save_tally
from ..transport.transport_runner import DEFAULT_BATCH_SIZE, DEFAULT_LANE_WIDTH, TransportRunner
from ..transport.transport_task import clock_function, format_time_difference
from ..utils.numerics import InvalidInputError
from ..utils.sweep_iterators import check_increasing

_logger = logging.getLogger("specklelib.Sweep")

__all__ = ['SweepParams', 'run_sweep']


@dataclass
class SweepParams:
    """
    Parameters of a wavefront sweep.

    :param center: center of the wavefront
    :param thickness: radial thickness of the wavefront
    :param regime: shift regime of the wavefront fields
    :param amplitude: amplitude of psi (Small and Moderate regimes)
    :param profile: radial envelope of psi
    :param coeffs: transport coefficients; required by the Monte Carlo engine
    :param grid_spacing: diffusion grid spacing
    :param solver_tol: relative residual target of the diffusion solves
    :param n_packets: Monte Carlo packets
    :param seed: Monte Carlo seed
    :param n_workers: Monte Carlo worker threads, None for the default
    :param batch_size: Monte Carlo packets per batch
    :param lane_width: Monte Carlo packets stepped together
    :param datum: Dirichlet datum q of the diffusion problems, None for the scene's source intensity
    :param dump_dir: if set, fields (diffusion) or tallies (Monte Carlo) of every point are written there
    """
    center: Sequence[float] = (0.0, 0.0)
    thickness: float = 0.1
    regime: Union[str, ShiftRegime] = ShiftRegime.LARGE
    amplitude: float = 1.0
    profile: str = 'bump'
    coeffs: Optional[TransportCoefficients] = None
    grid_spacing: float = 0.01
    solver_tol: float = 1e-10
    n_packets: int = 100000
    seed: int = 0
    n_workers: Optional[int] = None
    batch_size: int = DEFAULT_BATCH_SIZE
    lane_width: int = DEFAULT_LANE_WIDTH
    datum: Optional[float] = None
    dump_dir: Optional[Union[str, Path]] = None


def _diffusion_sweep(scene: Scene, radii, fields, params: SweepParams) -> CorrelationCurve:
    base = with_shift(scene, None)
    problem = DiffusionProblem.from_scene(base, params.coeffs, params.grid_spacing, 'autocorrelation', params.datum)
    w11 = solve_diffusion(problem, tol=params.solver_tol)
    if params.dump_dir is not None:
        save_field(w11, Path(params.dump_dir) / "w11.txt")
    values = []
    for n, (radius, shift) in enumerate(zip(radii, fields)):
        problem = DiffusionProblem.from_scene(with_shift(scene, shift), params.coeffs, params.grid_spacing,
                                              'cross_correlation', params.datum)
        w12 = solve_diffusion(problem, tol=params.solver_tol)
        if params.dump_dir is not None:
            save_field(w12, Path(params.dump_dir) / f"w12_{n:03d}.txt")
        values.append(c12_from_fields(w11, w11, w12, scene.measured))
        _logger.debug("r = %g: C12 = %.10g", radius, values[-1])
    return CorrelationCurve(radii=radii, c12=values, engine=Engine.DIFFUSION)


def _mc_sweep(scene: Scene, radii, fields, params: SweepParams) -> CorrelationCurve:
    if params.coeffs is None:
        raise InvalidInputError("The Monte Carlo engine needs the transport coefficients")
    runner = TransportRunner(n_workers=params.n_workers, batch_size=params.batch_size, lane_width=params.lane_width)
    tallies = runner.run(scene, params.coeffs, params.n_packets, params.seed, shifts=fields)
    values, errors = [], []
    for n, tally in enumerate(tallies):
        if params.dump_dir is not None:
            save_tally(tally, Path(params.dump_dir) / f"tally_{n:03d}.txt")
        estimate = c12_from_tally(tally)
        values.append(estimate.value)
        errors.append(estimate.stderr)
    return CorrelationCurve(radii=radii, c12=values, engine=Engine.MC, stat_error=errors, seed=params.seed)


def run_sweep(scene: Scene, radii: Sequence[float], engine: Union[str, Engine],
              params: Optional[SweepParams] = None) -> CorrelationCurve:
    """
    Computes C12 for each radius of an expanding wavefront.

    :param scene: template scene; its own shift field is ignored
    :param radii: strictly increasing wavefront radii
    :param engine: 'mc' or 'diffusion'
    :param params: sweep parameters
    :returns: the correlation curve, in the order of the radii
    :raises InvalidInputError: on non-increasing radii or supports leaving the domain
    """
    params = params or SweepParams()
    engine = Engine.parse(engine)
    radii = check_increasing(radii, 'radii')
    if not radii:
        return CorrelationCurve(engine=engine, stat_error=[] if engine is Engine.MC else None,
                                seed=params.seed if engine is Engine.MC else None)
    fields = wavefront_sequence(params.center, radii, params.thickness, params.regime, params.amplitude,
                                params.profile)
    for shift in fields:
        # validates the support against the domain before any solve
        with_shift(scene, shift)
    if params.dump_dir is not None:
        Path(params.dump_dir).mkdir(parents=True, exist_ok=True)
    _logger.info("Sweep of %d radii with the %s engine", len(radii), engine.value)
    t0 = clock_function()
    if engine is Engine.DIFFUSION:
        curve = _diffusion_sweep(scene, radii, fields, params)
    else:
        curve = _mc_sweep(scene, radii, fields, params)
    _logger.info("Sweep finished. Time elapsed: %s", format_time_difference(clock_function() - t0))
    return curve
