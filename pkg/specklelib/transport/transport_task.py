#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        transport_task.py
# Purpose:     Worker thread simulating batches of photon packets
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Internal classes not to be used directly by the user
"""
import threading
import time
import traceback
from typing import Dict, List, Optional, Sequence
import logging

import numpy as np

from .packet import DISCARDED, Event, launch_batch, step_batch
from .tally import BoundaryTally
from ..medium.kernel import TransportCoefficients
from ..medium.sampling import CosineSampler
from ..scene.scene import Scene
from ..scene.shift import ShiftField
from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.TransportTask")

clock_function = time.perf_counter

DEFAULT_LANE_WIDTH = 4096


def format_time_difference(time_diff):
    """Formats the time difference in a human-readable format, stripping the hours or minutes if they are zero"""
    seconds_difference = int(time_diff)
    milliseconds = int((time_diff - seconds_difference) * 1000)
    hours, remainder = divmod(seconds_difference, 3600)
    minutes, seconds = divmod(remainder, 60)

    if hours == 0:
        if minutes == 0:
            return f"{int(seconds):02d}.{milliseconds:03d} secs"
        else:
            return f"{int(minutes):02d}:{int(seconds):02d}.{milliseconds:03d}"
    else:
        return f"{int(hours):02d}:{int(minutes):02d}:{int(seconds):02d}.{milliseconds:03d}"


def batch_generator(seed: int, batch_index: int) -> np.random.Generator:
    """Counter-based stream of a batch, keyed by (seed, batch index) so that it doesn't depend on the worker"""
    key = ((int(seed) % 2 ** 64) << 64) | int(batch_index)
    return np.random.Generator(np.random.Philox(key=key))


def simulate_batch(scene: Scene, coeffs: TransportCoefficients, shifts: Sequence[ShiftField], n_packets: int,
                   seed: int, batch_index: int, segment_bins: int = 0,
                   lane_width: int = DEFAULT_LANE_WIDTH) -> List[BoundaryTally]:
    """
    Launches and follows n_packets packets until they leave the domain or get absorbed.

    At most lane_width packets are in flight. Every packet that leaves the domain or gets absorbed is replaced by a
    new launch from the batch's stream, so the vectorized steps keep their width until the batch runs out of
    packets. The result depends on lane_width, not on the worker that runs the batch.

    :returns: one BoundaryTally per shift field
    """
    if lane_width < 1:
        raise InvalidInputError("lane_width must be at least 1")
    rng = batch_generator(seed, batch_index)
    sampler = CosineSampler.for_coefficients(coeffs)
    box = scene.box
    side_names = box.sides
    tallies = [BoundaryTally(n_launched=n_packets, seed=seed) for _ in shifts]
    exits = np.zeros(len(side_names), dtype=np.int64)
    n_absorbed = 0
    n_discarded = 0
    n_steps = 0

    lanes = min(n_packets, lane_width)
    batch = launch_batch(scene, rng, lanes, n_shifts=len(shifts))
    pending = n_packets - lanes
    while len(batch):
        events, sides = step_batch(batch, scene, coeffs, sampler, rng, shifts)
        n_steps += 1
        measured = events == Event.EXITED_MEASURED
        if np.any(measured):
            weights = batch.weights[measured]
            for j, tally in enumerate(tallies):
                tally.add_exits(weights[:, j])
            if segment_bins:
                _bin_exits(tallies, box, batch.positions[measured], sides[measured], weights, segment_bins)
        exited = sides >= 0
        exits += np.bincount(sides[exited], minlength=len(side_names))
        n_absorbed += int(np.count_nonzero(events == Event.ABSORBED))
        n_discarded += int(np.count_nonzero(events == DISCARDED))
        batch = batch.keep(events == Event.SCATTERED)
        refill = min(pending, lanes - len(batch))
        if refill > 0:
            batch = batch.extend(launch_batch(scene, rng, refill, n_shifts=len(shifts)))
            pending -= refill

    _logger.debug("Batch %d: %d packets in %d steps", batch_index, n_packets, n_steps)
    if n_discarded:
        _logger.warning("Batch %d: %d packets discarded on indeterminate geometry", batch_index, n_discarded)
    for tally in tallies:
        tally.n_exited = int(exits.sum())
        tally.n_absorbed = n_absorbed
        tally.n_discarded = n_discarded
        tally.exits_per_side = {name: int(exits[i]) for i, name in enumerate(side_names)}
    return tallies


def _bin_exits(tallies, box, positions, sides, weights, n_bins):
    for side_index in np.unique(sides):
        name = box.sides[side_index]
        rows = sides == side_index
        # bins along the first tangential axis
        axis = (side_index // 2 + 1) % box.dimension
        s = (positions[rows, axis] - box.lower[axis]) / box.lengths[axis]
        bins = np.clip((s * n_bins).astype(int), 0, n_bins - 1)
        for j, tally in enumerate(tallies):
            tally.add_binned(name, bins, weights[rows, j], n_bins)


class TransportTask(threading.Thread):
    """This is an internal Class and should not be used directly by the User."""

    def __init__(self, worker_id: int, batches: Sequence[tuple], scene: Scene, coeffs: TransportCoefficients,
                 shifts: Sequence[ShiftField], seed: int, segment_bins: int = 0,
                 lane_width: int = DEFAULT_LANE_WIDTH, verbose: bool = False):
        super().__init__(name=f"TransportTask#{worker_id}")
        self.worker_id = worker_id
        self.batches = list(batches)  # (batch_index, n_packets)
        self.scene = scene
        self.coeffs = coeffs
        self.shifts = list(shifts)
        self.seed = seed
        self.segment_bins = segment_bins
        self.lane_width = lane_width
        self.verbose = verbose
        self.start_time = None
        self.stop_time = None
        self.results: Dict[int, List[BoundaryTally]] = {}
        self.error: Optional[BaseException] = None
        self.retcode = -1  # Signals an error by default

    def print_info(self, logger_fun, message):
        message = f"TransportTask #{self.worker_id}: {message}"
        logger_fun(message)
        if self.verbose:
            print(f"{time.asctime()} {logger_fun.__name__}: {message}")

    def run(self):
        self.start_time = clock_function()
        self.print_info(_logger.debug, f"Starting {len(self.batches)} batches")
        try:
            for batch_index, n_packets in self.batches:
                t0 = clock_function()
                tallies = simulate_batch(self.scene, self.coeffs, self.shifts, n_packets, self.seed, batch_index,
                                         self.segment_bins, self.lane_width)
                elapsed = clock_function() - t0
                for tally in tallies:
                    tally.runtime = elapsed
                self.results[batch_index] = tallies
                self.print_info(_logger.debug, f"Batch {batch_index} ({n_packets} packets) done in "
                                               f"{format_time_difference(elapsed)}")
        except Exception as err:
            self.error = err
            self.print_info(_logger.error, traceback.format_exc())
        else:
            self.retcode = 0
        finally:
            self.stop_time = clock_function()
            self.print_info(_logger.debug, "Finished. Time elapsed: %s" %
                            format_time_difference(self.stop_time - self.start_time))

    def get_results(self) -> Optional[Dict[int, List[BoundaryTally]]]:
        """
        Returns the tallies per batch index once the task has finished, None while it is still running.
        """
        if self.is_alive():
            return None
        return self.results

    def wait_results(self) -> Dict[int, List[BoundaryTally]]:
        """Waits for the completion of the task and returns the tallies per batch index"""
        self.join()
        return self.results
