#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        tally.py
# Purpose:     Boundary tallies of the Monte Carlo solver
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Accumulators of the packets leaving through the measured boundary.

For every launched packet i let x_i be 1 when it leaves through the measured boundary inside the aperture and 0
otherwise, and z_i = x_i w_i its correlation weight at exit. The tally holds the sums of x, z and of the second
moments of (Re z, Im z, x) needed to propagate the statistical error to C12. Since x_i is 0 or 1, sum x^2 = sum x
and sum x z = sum z.
"""
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Dict, Optional, Union
import logging

import numpy as np

from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Tally")

__all__ = ['BoundaryTally', 'TallyInvariantError', 'merge_tallies', 'save_tally', 'load_tally']

_SCALARS = ('n_launched', 'n_exited', 'n_absorbed', 'n_discarded', 'sum_w11', 'sum_w11_sq', 'sum_w12_abs_sq',
            'sum_w12_re_sq', 'sum_w12_im_sq', 'sum_w12_re_im', 'runtime', 'seed')


class TallyInvariantError(ArithmeticError):
    """A tally breaks the bounds every Monte Carlo run must satisfy"""
    ...


@dataclass
class BoundaryTally:
    """
    Boundary tally of one shift field.

    :param n_launched: number of launched packets
    :param n_exited: packets that left the domain through any side
    :param n_absorbed: packets absorbed by an absorber
    :param n_discarded: packets dropped because of an indeterminate geometry
    :param sum_w11: number of packets leaving through the measured boundary within the aperture
    :param sum_w12: sum of their correlation weights
    :param exits_per_side: exit counts by side name
    :param per_segment: optional binned W11 counts and W12 sums along each measured side
    """
    n_launched: int = 0
    n_exited: int = 0
    n_absorbed: int = 0
    n_discarded: int = 0
    sum_w11: float = 0.0
    sum_w11_sq: float = 0.0
    sum_w12: complex = 0j
    sum_w12_abs_sq: float = 0.0
    sum_w12_re_sq: float = 0.0
    sum_w12_im_sq: float = 0.0
    sum_w12_re_im: float = 0.0
    exits_per_side: Dict[str, int] = field(default_factory=dict)
    per_segment: Dict[str, Dict[str, np.ndarray]] = field(default_factory=dict)
    runtime: float = 0.0
    seed: Optional[int] = None

    @property
    def sum_w22(self) -> float:
        """W22 has the law of W11, its tally is the W11 tally"""
        return self.sum_w11

    def add_exits(self, weights: np.ndarray):
        """Adds measured exits with the given complex correlation weights"""
        weights = np.asarray(weights, dtype=complex)
        count = len(weights)
        self.sum_w11 += count
        self.sum_w11_sq += count
        re, im = weights.real, weights.imag
        self.sum_w12 += complex(weights.sum())
        self.sum_w12_abs_sq += float(np.sum(re * re + im * im))
        self.sum_w12_re_sq += float(np.sum(re * re))
        self.sum_w12_im_sq += float(np.sum(im * im))
        self.sum_w12_re_im += float(np.sum(re * im))

    def add_binned(self, side: str, bins: np.ndarray, weights: np.ndarray, n_bins: int):
        entry = self.per_segment.setdefault(side, {'w11': np.zeros(n_bins), 'w12': np.zeros(n_bins, dtype=complex)})
        entry['w11'] += np.bincount(bins, minlength=n_bins)
        entry['w12'] += (np.bincount(bins, weights=weights.real, minlength=n_bins) +
                         1j * np.bincount(bins, weights=weights.imag, minlength=n_bins))

    def check(self, conservative: bool = False):
        """
        Verifies the tally invariants: |sum_w12| <= sum_w11 <= n_launched, and n_exited = n_launched when there
        is no absorption (conservative=True).

        :raises TallyInvariantError: if one of them doesn't hold
        """
        if abs(self.sum_w12) > self.sum_w11 * (1 + 1e-12) + 1e-12:
            raise TallyInvariantError(f"|sum_w12| = {abs(self.sum_w12):.6g} exceeds sum_w11 = {self.sum_w11:.6g}")
        if self.sum_w11 > self.n_launched:
            raise TallyInvariantError(f"sum_w11 = {self.sum_w11:.6g} exceeds the {self.n_launched} launched packets")
        if conservative and self.n_exited + self.n_discarded != self.n_launched:
            raise TallyInvariantError(f"{self.n_exited} exited and {self.n_discarded} discarded packets out of "
                                      f"{self.n_launched} launched in a domain without absorbers")

    def covariance(self) -> np.ndarray:
        """Per-packet covariance matrix of (Re z, Im z, x)"""
        n = self.n_launched
        if n == 0:
            raise InvalidInputError("Empty tally")
        mx = self.sum_w11 / n
        a = self.sum_w12.real / n
        b = self.sum_w12.imag / n
        cov = np.empty((3, 3))
        cov[0, 0] = self.sum_w12_re_sq / n - a * a
        cov[1, 1] = self.sum_w12_im_sq / n - b * b
        cov[2, 2] = self.sum_w11_sq / n - mx * mx
        cov[0, 1] = cov[1, 0] = self.sum_w12_re_im / n - a * b
        cov[0, 2] = cov[2, 0] = a - a * mx
        cov[1, 2] = cov[2, 1] = b - b * mx
        return cov

    def __add__(self, other: 'BoundaryTally') -> 'BoundaryTally':
        return merge_tallies(self, other)

    def __repr__(self):
        return (f"BoundaryTally(n_launched={self.n_launched}, sum_w11={self.sum_w11}, "
                f"sum_w12={self.sum_w12:.6g}, n_exited={self.n_exited}, n_absorbed={self.n_absorbed})")


def merge_tallies(first: BoundaryTally, second: BoundaryTally) -> BoundaryTally:
    """Sum of two tallies of the same shift field"""
    merged = BoundaryTally()
    for f in fields(BoundaryTally):
        if f.name in ('exits_per_side', 'per_segment', 'seed', 'runtime'):
            continue
        setattr(merged, f.name, getattr(first, f.name) + getattr(second, f.name))
    for side in set(first.exits_per_side) | set(second.exits_per_side):
        merged.exits_per_side[side] = first.exits_per_side.get(side, 0) + second.exits_per_side.get(side, 0)
    for side in set(first.per_segment) | set(second.per_segment):
        a, b = first.per_segment.get(side), second.per_segment.get(side)
        if a is None or b is None:
            merged.per_segment[side] = {k: v.copy() for k, v in (a or b).items()}
        else:
            merged.per_segment[side] = {k: a[k] + b[k] for k in a}
    merged.seed = first.seed if first.seed is not None else second.seed
    # wall time of batches run side by side
    merged.runtime = max(first.runtime, second.runtime)
    return merged


def _format_number(value) -> str:
    if isinstance(value, complex):
        return f"{value.real!r} {value.imag!r}"
    return repr(value)


def save_tally(tally: BoundaryTally, path: Union[str, Path]):
    """
    Writes the tally as a plain-text record of 'key = value' lines. Complex values are written as 'real imag',
    binned arrays as space separated values.
    """
    path = Path(path)
    lines = ["# specklelib boundary tally"]
    for name in _SCALARS[:4]:
        lines.append(f"{name} = {getattr(tally, name)}")
    lines.append(f"sum_w11 = {tally.sum_w11!r}")
    lines.append(f"sum_w12 = {_format_number(tally.sum_w12)}")
    for name in _SCALARS[5:11]:
        lines.append(f"{name} = {getattr(tally, name)!r}")
    lines.append(f"seed = {tally.seed if tally.seed is not None else ''}")
    for side, count in sorted(tally.exits_per_side.items()):
        lines.append(f"exits.{side} = {count}")
    for side, entry in sorted(tally.per_segment.items()):
        lines.append(f"segment.{side}.w11 = " + ' '.join(repr(float(v)) for v in entry['w11']))
        lines.append(f"segment.{side}.w12 = " + ' '.join(_format_number(complex(v)) for v in entry['w12']))
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    _logger.info("Tally written to %s", path)


def load_tally(path: Union[str, Path]) -> BoundaryTally:
    """Reads back a tally written by save_tally()"""
    path = Path(path)
    tally = BoundaryTally()
    for lineno, line in enumerate(path.read_text(encoding='utf-8').splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith('#'):
            continue
        if '=' not in line:
            raise InvalidInputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split('=', 1))
        try:
            if key in ('n_launched', 'n_exited', 'n_absorbed', 'n_discarded'):
                setattr(tally, key, int(value))
            elif key == 'seed':
                tally.seed = int(value) if value else None
            elif key == 'sum_w12':
                re, im = value.split()
                tally.sum_w12 = complex(float(re), float(im))
            elif key in _SCALARS:
                setattr(tally, key, float(value))
            elif key.startswith('exits.'):
                tally.exits_per_side[key[6:]] = int(value)
            elif key.startswith('segment.'):
                _, side, kind = key.split('.')
                numbers = np.array([float(v) for v in value.split()])
                entry = tally.per_segment.setdefault(side, {})
                entry[kind] = numbers if kind == 'w11' else numbers[0::2] + 1j * numbers[1::2]
            else:
                raise InvalidInputError(f"{path}:{lineno}: unknown key '{key}'")
        except ValueError as err:
            if isinstance(err, InvalidInputError):
                raise
            raise InvalidInputError(f"{path}:{lineno}: can't parse '{value}' for '{key}'") from err
    return tally
