"""Shared fixtures for the test suite"""

import sys
from pathlib import Path

import numpy as np
import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.models.affine_space import AffineSpaceSpec, line_spec  # noqa: E402


@pytest.fixture
def canonical_line() -> AffineSpaceSpec:
    """t -> (t, 1 + t)"""
    return line_spec((1, 1))


@pytest.fixture
def example_line() -> AffineSpaceSpec:
    """t -> (t, t + 1, -2t + 5)"""
    return line_spec((1, 1), (-2, 5))


@pytest.fixture
def nonreal_line() -> AffineSpaceSpec:
    """t -> (t, t + 1, t - 2i)"""
    return line_spec((1, 1), (1, -2j))


@pytest.fixture
def product_space() -> AffineSpaceSpec:
    """(t1, t2) -> (t1, t2, 1 + t1, 2 + t2)"""
    return AffineSpaceSpec(a=[[1, 0], [0, 1]], b=[1, 2])


@pytest.fixture
def origin_line() -> AffineSpaceSpec:
    """t -> (t, 2t), a line through the origin"""
    return line_spec((2, 0))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def make_spec():
    """Factory for random specs with Gaussian coefficients"""

    def factory(rng: np.random.Generator, k: int, m: int, real: bool = False) -> AffineSpaceSpec:
        if real:
            a = rng.normal(size=(m, k))
            b = rng.normal(size=m)
        else:
            a = rng.normal(size=(m, k)) + 1j * rng.normal(size=(m, k))
            b = rng.normal(size=m) + 1j * rng.normal(size=m)
        return AffineSpaceSpec(a=a, b=b)

    return factory


@pytest.fixture
def random_parameters():
    """Factory for random parameters t with log-moduli in [-1, 1]"""

    def factory(rng: np.random.Generator, size: int, k: int) -> np.ndarray:
        log_r = rng.uniform(-1.0, 1.0, size=(size, k))
        theta = rng.uniform(0.0, 2 * np.pi, size=(size, k))
        return np.exp(log_r + 1j * theta)

    return factory
