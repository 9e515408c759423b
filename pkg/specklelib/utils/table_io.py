#!/usr/bin/env python
# coding=utf-8

# -------------------------------------------------------------------------------
#
# Name:        table_io.py
# Purpose:     Reading and writing of whitespace delimited two-column tables
#
# Author:      specklelib developers
#
# Licence:     refer to the LICENSE file
# -------------------------------------------------------------------------------
"""
Plain-text tables used for tabulated spectra and for the H-function export. Lines starting with '#' are comments,
columns are separated by any whitespace.
"""
from pathlib import Path
from typing import Tuple, Union, Iterable
import logging

import numpy as np

from .numerics import InvalidInputError

_logger = logging.getLogger("specklelib.Utils")


def read_two_columns(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Reads a two-column table.

    :param path: file to read
    :return: tuple with the first and second column as float arrays
    :raises InvalidInputError: if a data line doesn't have exactly two numeric columns
    """
    first, second = [], []
    with open(path, 'r', encoding='utf-8') as f:
        for lineno, line in enumerate(f, start=1):
            line = line.split('#', 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise InvalidInputError(f"{path}:{lineno}: expected two columns, got {len(parts)}")
            try:
                first.append(float(parts[0]))
                second.append(float(parts[1]))
            except ValueError:
                raise InvalidInputError(f"{path}:{lineno}: non-numeric value in '{line}'")
    _logger.debug("Read %d rows from %s", len(first), path)
    return np.array(first), np.array(second)


def write_two_columns(path: Union[str, Path], first: Iterable[float], second: Iterable[float],
                      header: str = '') -> Path:
    """Writes a two-column table with an optional '#' header"""
    path = Path(path)
    with open(path, 'w', encoding='utf-8') as f:
        for line in header.splitlines():
            f.write(f"# {line}\n")
        for a, b in zip(first, second):
            f.write(f"{a:.17g}\t{b:.17g}\n")
    return path
