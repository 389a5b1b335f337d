"""Validation utility functions"""

import math
from typing import Iterable, List, Optional, Sequence

import numpy as np

from ..errors import DimensionMismatch, InvalidSpec

TWO_PI = 2.0 * math.pi


def validate_finite(values: Iterable, name: str = "vector") -> np.ndarray:
    """
    Convert to a numpy array and check that every entry is finite

    Args:
        values: Real or complex values
        name: Name used in the error message

    Returns:
        The values as a numpy array
    """
    arr = np.asarray(values)
    if arr.size and not np.all(np.isfinite(arr)):
        raise InvalidSpec(f"{name} has non-finite entries")
    return arr


def validate_length(values: Sequence, expected: int, name: str = "vector") -> None:
    """Raise DimensionMismatch unless len(values) == expected"""
    if len(values) != expected:
        raise DimensionMismatch(f"{name} has length {len(values)}, expected {expected}")


def reduce_angle(angles):
    """
    Reduce angles to the fundamental domain [0, 2*pi)

    Args:
        angles: Scalar or array of angles

    Returns:
        Angles in [0, 2*pi), same shape as the input
    """
    reduced = np.mod(angles, TWO_PI)
    # np.mod can return exactly 2*pi for tiny negative inputs
    return np.where(reduced >= TWO_PI, 0.0, reduced)


def angle_distance(a, b):
    """Distance between angles on the circle, in [0, pi]"""
    d = np.mod(np.asarray(a) - np.asarray(b), TWO_PI)
    return np.minimum(d, TWO_PI - d)


def validate_samples(n_samples: int, minimum: int = 0) -> int:
    """
    Validate a sample count

    Args:
        n_samples: Requested number of samples
        minimum: Smallest accepted value

    Returns:
        The count as an int
    """
    try:
        n = int(n_samples)
    except (TypeError, ValueError):
        raise InvalidSpec(f"sample count must be an integer, got {n_samples!r}")
    if n < minimum:
        raise InvalidSpec(f"sample count must be >= {minimum}, got {n}")
    return n


def parse_float_list(text: str) -> Optional[List[float]]:
    """
    Parse a comma-separated list of reals such as '0,-1.5,2e-3'

    Args:
        text: Comma-separated numbers

    Returns:
        List of floats or None if any entry is not a finite number
    """
    if text is None or not text.strip():
        return None

    try:
        values = [float(part) for part in text.split(',')]
    except ValueError:
        return None

    if not all(math.isfinite(v) for v in values):
        return None
    return values


def parse_grid(text: str) -> Optional[tuple]:
    """
    Parse a grid size written as 'RxT' (also accepts '×' or a single integer)

    Returns:
        (radial, angular) sizes or None if malformed
    """
    if text is None:
        return None
    parts = text.lower().replace('×', 'x').split('x')
    try:
        sizes = [int(p) for p in parts]
    except ValueError:
        return None
    if len(sizes) == 1:
        sizes = sizes * 2
    if len(sizes) != 2 or min(sizes) < 1:
        return None
    return tuple(sizes)
