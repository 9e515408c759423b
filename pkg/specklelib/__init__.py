# -*- coding: utf-8 -*-

__version__ = "0.3.0"

# Convenience direct imports
from .medium.spectrum import GaussianCorrelation, IsotropicConstant, Tabulated
from .medium.kernel import TransportCoefficients
from .scene.regions import Disk, Annulus
from .scene.scene import Box, Scene
from .scene.shift import ShiftField, ShiftRegime, wavefront_sequence
from .transport.transport_runner import TransportRunner, run_transport
from .diffusion.problem import DiffusionProblem
from .diffusion.solver import solve_diffusion, boundary_flux
from .boundary.hfunction import compute_h_function, map_boundary_source
from .correlation.c12 import c12_from_tally, c12_from_fields
from .correlation.curve import CorrelationCurve
from .correlation.sweep import run_sweep, SweepParams
from .correlation.wigner import wigner_transform
from .sim.run_config import parse_config
from .sim.pipeline import run


def all_loggers():
    """
    Names of the loggers of the package, one per component.

    :rtype: list[str]
    """
    return [
        "specklelib.Correlation",
        "specklelib.DiffusionProblem",
        "specklelib.DiffusionSolver",
        "specklelib.HFunction",
        "specklelib.Kernel",
        "specklelib.Packet",
        "specklelib.Pipeline",
        "specklelib.RunConfig",
        "specklelib.Sampling",
        "specklelib.Scene",
        "specklelib.Shift",
        "specklelib.Spectrum",
        "specklelib.Sweep",
        "specklelib.Tally",
        "specklelib.TransportRunner",
        "specklelib.TransportTask",
        "specklelib.Utils",
        "specklelib.Wigner",
    ]


def set_log_level(level):
    """
    Applies a level (logging.INFO, logging.DEBUG, ...) to every logger of the package.

    :type level: int
    """
    import logging
    for logger in all_loggers():
        logging.getLogger(logger).setLevel(level)


def add_log_handler(handler):
    """Attaches a handler, for example a logging.FileHandler, to every logger of the package"""
    import logging
    for logger in all_loggers():
        logging.getLogger(logger).addHandler(handler)
