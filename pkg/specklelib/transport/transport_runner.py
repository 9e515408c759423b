#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        transport_runner.py
# Purpose:     Parallel driver of the Monte Carlo transport solver
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Runs the Monte Carlo solver over several worker threads. ::

    from specklelib.medium import GaussianCorrelation, TransportCoefficients
    from specklelib.scene import Box, Scene
    from specklelib.transport import TransportRunner

    coeffs = TransportCoefficients.from_spectrum(GaussianCorrelation(1.0), k_mag=2.0)
    scene = Scene(Box((-1, -1), (1, 1)), illuminated=('left',), measured=('right',))
    runner = TransportRunner(n_workers=4)
    tally = runner.run(scene, coeffs, n_packets=100000, seed=42)

The packets are split in batches of ``batch_size``. Each batch draws its random numbers from its own Philox stream,
keyed by the seed and the batch index, and worker w processes the batches w, w + W, w + 2W, ... The batch tallies are
finally reduced pairwise in batch order. The result therefore doesn't depend on the number of workers.
Within a batch at most ``lane_width`` packets are in flight; a packet that leaves is replaced by the next launch of
the batch, which keeps the vectorized steps wide until the batch runs dry.

Several shift fields can be tallied in the same pass with ``shifts=[...]``: all of them see the same packet
histories, which correlates the estimates (common random numbers) and is used by the correlation sweeps.
"""
__all__ = ['TransportRunner', 'InvalidSceneError', 'run_transport', 'default_workers']

import os
from typing import List, Optional, Sequence, Union
import logging

from .tally import BoundaryTally, merge_tallies
from .transport_task import DEFAULT_LANE_WIDTH, TransportTask, clock_function, format_time_difference
from ..medium.kernel import TransportCoefficients
from ..scene.scene import Scene
from ..scene.shift import ShiftField
from ..utils.numerics import InvalidInputError, NumericalFailureError, pairwise_reduce

_logger = logging.getLogger("specklelib.TransportRunner")

WORKERS_ENV = 'SPECKLELIB_WORKERS'
DEFAULT_BATCH_SIZE = 100000


class InvalidSceneError(InvalidInputError):
    """The scene can't be simulated, for example because it has no measured boundary"""
    ...


def default_workers() -> int:
    """Worker count from the SPECKLELIB_WORKERS environment variable, else the number of CPUs"""
    value = os.environ.get(WORKERS_ENV)
    if value:
        try:
            workers = int(value)
        except ValueError:
            raise InvalidInputError(f"{WORKERS_ENV} must be an integer, got '{value}'") from None
        if workers < 1:
            raise InvalidInputError(f"{WORKERS_ENV} must be at least 1")
        return workers
    return os.cpu_count() or 1


class TransportRunner(object):
    """
    The TransportRunner class spreads the packet batches of a Monte Carlo run over worker threads.

    :param n_workers: Number of worker threads. Defaults to the SPECKLELIB_WORKERS environment variable or the
        number of CPUs.
    :type n_workers: int, optional
    :param batch_size: Number of packets per batch. The batch layout, and therefore the result, depends on it.
    :type batch_size: int, optional
    :param segment_bins: If non-zero, exits on the measured sides are also binned in that many segments.
    :type segment_bins: int, optional
    :param lane_width: Maximum number of packets stepped together. Exited packets are replaced by new launches of the
        same batch, so the steps keep this width until the batch is exhausted. The result depends on it.
    :type lane_width: int, optional
    :param verbose: If True, it enables a richer printout of the program execution.
    :type verbose: bool, optional
    """

    def __init__(self, *, n_workers: Optional[int] = None, batch_size: int = DEFAULT_BATCH_SIZE,
                 segment_bins: int = 0, lane_width: int = DEFAULT_LANE_WIDTH, verbose: bool = False):
        self.n_workers = default_workers() if n_workers is None else int(n_workers)
        if self.n_workers < 1:
            raise InvalidInputError("n_workers must be at least 1")
        if batch_size < 1:
            raise InvalidInputError("batch_size must be at least 1")
        self.batch_size = int(batch_size)
        if lane_width < 1:
            raise InvalidInputError("lane_width must be at least 1")
        self.segment_bins = int(segment_bins)
        self.lane_width = int(lane_width)
        self.verbose = verbose
        self.completed_tasks: List[TransportTask] = []
        self.runno = 0
        _logger.debug("TransportRunner initialized with %d workers", self.n_workers)

    def _batches(self, n_packets: int):
        full, rest = divmod(n_packets, self.batch_size)
        sizes = [self.batch_size] * full + ([rest] if rest else [])
        return list(enumerate(sizes))

    def run(self, scene: Scene, coeffs: TransportCoefficients, n_packets: int, seed: int,
            shifts: Optional[Sequence[ShiftField]] = None) -> Union[BoundaryTally, List[BoundaryTally]]:
        """
        Simulates n_packets packets and returns the boundary tally.

        :param scene: the scene, its shift field is used when shifts is None
        :param coeffs: transport coefficients of the medium
        :param n_packets: number of packets, >= 1
        :param seed: seed of the counter-based streams
        :param shifts: optional list of shift fields tallied on the same packet histories
        :returns: a BoundaryTally, or a list of tallies (one per shift field) when shifts is given
        :raises InvalidSceneError: if the scene has no measured boundary
        :raises NumericalFailureError: if a worker failed
        """
        if n_packets < 1:
            raise InvalidInputError("n_packets must be at least 1")
        if not scene.measured:
            raise InvalidSceneError("The scene has no measured boundary")
        if coeffs.dimension != scene.dimension:
            raise InvalidInputError("The medium and the scene have different dimensions")
        single = shifts is None
        shift_list = [scene.shift] if single else list(shifts)
        if not shift_list:
            return []
        self.runno += 1
        batches = self._batches(n_packets)
        n_workers = min(self.n_workers, len(batches))
        _logger.info("Run %d: %d packets in %d batches on %d workers, seed %d", self.runno, n_packets, len(batches),
                     n_workers, seed)
        t0 = clock_function()
        tasks = [TransportTask(w, batches[w::n_workers], scene, coeffs, shift_list, seed, self.segment_bins,
                               self.lane_width,
                               self.verbose) for w in range(n_workers)]
        for task in tasks:
            task.start()
        results = {}
        for task in tasks:
            results.update(task.wait_results())
            self.completed_tasks.append(task)
        failed = [task for task in tasks if task.retcode != 0]
        if failed:
            raise NumericalFailureError(f"{len(failed)} transport workers failed: {failed[0].error!r}")

        ordered = [results[index] for index, _ in batches]
        merged = [pairwise_reduce([batch[j] for batch in ordered], merge_tallies) for j in range(len(shift_list))]
        elapsed = clock_function() - t0
        for tally in merged:
            tally.seed = seed
            tally.runtime = elapsed
            tally.check(conservative=not scene.absorbers)
        _logger.info("Run %d finished. Time elapsed: %s", self.runno, format_time_difference(elapsed))
        return merged[0] if single else merged


def run_transport(scene: Scene, coeffs: TransportCoefficients, n_packets: int, seed: int,
                  n_workers: Optional[int] = None, **kwargs) -> BoundaryTally:
    """
    Simulates n_packets independent packets and returns the tally of the scene's shift field.
    See TransportRunner.run(); extra keyword arguments go to the TransportRunner constructor.
    """
    runner = TransportRunner(n_workers=n_workers, **kwargs)
    return runner.run(scene, coeffs, n_packets, seed)
