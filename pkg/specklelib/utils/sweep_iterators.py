# -*- coding: utf-8 -*-
# -------------------------------------------------------------------------------
#
# Name:        sweep_iterators.py
# Purpose:     Iterators used to build the wavefront radius sweeps
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
#
# -------------------------------------------------------------------------------

from typing import Union, Optional, Iterable, List, Sequence

from .numerics import InvalidInputError

__all__ = ['sweep', 'sweep_n', 'radii_from_spec', 'check_increasing']

ROUND_DIGITS = 12


class BaseIterator(object):
    """Common implementation to all Iterator classes"""

    def __init__(self, start: Union[int, float], stop: Optional[Union[int, float]] = None, step: Union[int, float] = 1):
        if stop is None:
            self.stop = start
            self.start = 0
        else:
            self.start = start
            self.stop = stop
        self.step = step
        self.finished = False

    def __iter__(self):
        self.finished = False
        return self

    def __next__(self):
        raise NotImplementedError("This function needs to be overriden")


class sweep(BaseIterator):
    """
    Generator of evenly spaced radii. Values are computed as start + n * step (no accumulated drift) and rounded to
    12 decimals so that the radii written in curve files are stable.
    Usage:
        >>> list(sweep(0.02, 0.1, 0.02))
        [0.02, 0.04, 0.06, 0.08, 0.1]
        >>> list(sweep(0.5, 0.1, 0.2))
        [0.5, 0.3, 0.1]
    """
    def __init__(self, start: Union[int, float], stop: Optional[Union[int, float]] = None,
                 step: Union[int, float] = 1):
        super().__init__(start, stop, step)
        if step == 0:
            raise InvalidInputError("Step cannot be 0")
        if self.step < 0 and self.start < self.stop:
            # The sign of the step determines whether it counts up or down.
            self.start, self.stop = self.stop, self.start
        elif self.step > 0 and self.stop < self.start:
            self.step = - self.step
        self.niter = 0
        # tolerance so that the stop value is not lost to rounding
        self._slack = abs(self.step) * 1e-9

    def __iter__(self):
        super().__iter__()
        self.niter = 0
        return self

    def __next__(self):
        val = round(self.start + self.niter * self.step, ROUND_DIGITS)
        self.niter += 1
        if (self.step > 0 and val <= self.stop + self._slack) or (self.step < 0 and val >= self.stop - self._slack):
            return val
        else:
            self.finished = True
            raise StopIteration


def sweep_n(start: Union[int, float], stop: Union[int, float], N: int) -> Iterable[float]:
    """Helper function.
    Generates N evenly spaced points between start and stop, both included.
        >>> list(sweep_n(0.1, 0.5, 3))
        [0.1, 0.3, 0.5]
    """
    if N < 2:
        raise InvalidInputError("sweep_n needs at least two points")
    return sweep(start, stop, (stop - start) / (N - 1))


def check_increasing(values: Sequence[float], name: str = "radii") -> List[float]:
    """Returns the values as a list of floats, raising if they are not positive and strictly increasing"""
    radii = [float(v) for v in values]
    for previous, current in zip(radii, radii[1:]):
        if not current > previous:
            raise InvalidInputError(f"'{name}' must be strictly increasing ({previous} followed by {current})")
    if radii and radii[0] <= 0:
        raise InvalidInputError(f"'{name}' must be positive")
    return radii


def radii_from_spec(spec) -> List[float]:
    """
    Expands a radius specification into a list of radii.

    The specification is either an explicit sequence of radii, or a mapping with the keys 'start', 'stop' and either
    'step' or 'count'.
    """
    if isinstance(spec, dict):
        unknown = set(spec) - {'start', 'stop', 'step', 'count'}
        if unknown:
            raise InvalidInputError(f"Unknown radius keys {sorted(unknown)}")
        if 'step' in spec:
            values = list(sweep(spec['start'], spec['stop'], spec['step']))
        elif 'count' in spec:
            values = list(sweep_n(spec['start'], spec['stop'], int(spec['count'])))
        else:
            raise InvalidInputError("A radius range needs either 'step' or 'count'")
    else:
        values = list(spec)
    return check_increasing(values)
