#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        curve.py
# Purpose:     Correlation curves of a wavefront sweep and their CSV representation
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
import csv
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import List, Optional, Union
import logging

from ..utils.numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Correlation")

__all__ = ['Engine', 'CorrelationCurve', 'compare_curves', 'CSV_COLUMNS']

CSV_COLUMNS = ('r', 'c12', 'stderr', 'engine', 'seed')
UPPER_SLACK = 1e-12


class Engine(Enum):
    """Solver that produced a curve"""
    MC = 'mc'
    DIFFUSION = 'diffusion'

    @classmethod
    def parse(cls, value) -> 'Engine':
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InvalidInputError(f"Unknown engine '{value}', expected one of {[e.value for e in cls]}") from None


@dataclass
class CorrelationCurve:
    """
    C12 as a function of the wavefront radius.

    :param radii: wavefront radii r_n
    :param c12: correlation values, in [0, 1]
    :param engine: the solver that produced the values
    :param stat_error: per-point standard errors, Monte Carlo only
    :param seed: seed of the Monte Carlo run
    """
    radii: List[float] = field(default_factory=list)
    c12: List[float] = field(default_factory=list)
    engine: Engine = Engine.DIFFUSION
    stat_error: Optional[List[float]] = None
    seed: Optional[int] = None

    def __post_init__(self):
        self.engine = Engine.parse(self.engine)
        self.radii = [float(r) for r in self.radii]
        self.c12 = [float(c) for c in self.c12]
        if len(self.radii) != len(self.c12):
            raise InvalidInputError("radii and c12 must have the same length")
        if self.stat_error is not None:
            self.stat_error = [float(e) for e in self.stat_error]
            if len(self.stat_error) != len(self.c12):
                raise InvalidInputError("stat_error must have one entry per point")
        for value in self.c12:
            if not -UPPER_SLACK <= value <= 1 + UPPER_SLACK:
                raise InvalidInputError(f"Correlation value {value} outside [0, 1]")

    @property
    def regime_tag(self) -> Engine:
        return self.engine

    def __len__(self):
        return len(self.radii)

    def to_csv(self, path: Union[str, Path]) -> Path:
        """Writes the curve with the columns r, c12, stderr, engine, seed. stderr is left empty for diffusion."""
        path = Path(path)
        seed = '' if self.seed is None else str(self.seed)
        with open(path, 'w', newline='', encoding='utf-8') as fout:
            writer = csv.writer(fout, lineterminator='\n')
            writer.writerow(CSV_COLUMNS)
            for i, (r, c) in enumerate(zip(self.radii, self.c12)):
                stderr = '' if self.stat_error is None else repr(self.stat_error[i])
                writer.writerow([repr(r), repr(c), stderr, self.engine.value, seed])
        _logger.info("Curve with %d points written to %s", len(self), path)
        return path

    @classmethod
    def from_csv(cls, path: Union[str, Path]) -> 'CorrelationCurve':
        with open(path, 'r', newline='', encoding='utf-8') as fin:
            reader = csv.DictReader(fin)
            if tuple(reader.fieldnames or ()) != CSV_COLUMNS:
                raise InvalidInputError(f"{path}: expected the columns {', '.join(CSV_COLUMNS)}")
            rows = list(reader)
        engine = Engine.parse(rows[0]['engine']) if rows else Engine.DIFFUSION
        errors = [r['stderr'] for r in rows]
        seed = rows[0]['seed'] if rows else ''
        return cls(radii=[float(r['r']) for r in rows], c12=[float(r['c12']) for r in rows], engine=engine,
                   stat_error=[float(e) for e in errors] if rows and all(errors) else None,
                   seed=int(seed) if seed else None)


def compare_curves(mc_curve: CorrelationCurve, diffusion_curve: CorrelationCurve, rel_tol: float = 0.1,
                   n_sigma: float = 3.0) -> List[dict]:
    """
    Point by point agreement of a Monte Carlo and a diffusion curve. A point agrees when
    |C_mc - C_diff| <= max(rel_tol C_diff, n_sigma stderr_mc).

    :returns: one dict per radius with the keys r, mc, stderr, diffusion, difference, bound and agree
    :raises InvalidInputError: if the curves have different radii
    """
    if len(mc_curve) != len(diffusion_curve) or any(abs(a - b) > 1e-12 for a, b in
                                                     zip(mc_curve.radii, diffusion_curve.radii)):
        raise InvalidInputError("The curves don't share the radii")
    errors = mc_curve.stat_error or [0.0] * len(mc_curve)
    report = []
    for r, mc, err, diff in zip(mc_curve.radii, mc_curve.c12, errors, diffusion_curve.c12):
        bound = max(rel_tol * diff, n_sigma * err)
        report.append({'r': r, 'mc': mc, 'stderr': err, 'diffusion': diff, 'difference': abs(mc - diff),
                       'bound': bound, 'agree': abs(mc - diff) <= bound})
    disagreeing = [row['r'] for row in report if not row['agree']]
    if disagreeing:
        _logger.warning("Engines disagree at r = %s", disagreeing)
    return report
