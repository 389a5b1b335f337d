"""Tests for Laurent polynomials"""

import json

import numpy as np
import pytest

from src.errors import DimensionMismatch, InvalidSpec, IoError
from src.models.laurent import LaurentPolynomial, load_ideal, monomial, polynomial_from_dict


@pytest.fixture
def line_polynomial():
    """w - z - 1 in the coordinates (z, w)"""
    return LaurentPolynomial((((0, 1), 1), ((1, 0), -1), ((0, 0), -1)))


def test_like_terms_combine():
    f = LaurentPolynomial((((1, 0), 2), ((1, 0), -2), ((0, 1), 3)))
    assert f.as_dict() == {(0, 1): 3}


def test_zero_polynomial_rejected():
    with pytest.raises(InvalidSpec):
        LaurentPolynomial((((1,), 1), ((1,), -1)))


def test_mixed_lengths_rejected():
    with pytest.raises(DimensionMismatch):
        LaurentPolynomial((((1,), 1), ((1, 0), 1)))


def test_evaluate(line_polynomial):
    assert line_polynomial(np.array([1.0, 2.0])) == pytest.approx(0)
    np.testing.assert_allclose(line_polynomial(np.array([[1j, 1 + 1j], [2, 5]])), [0, 2])


def test_negative_exponents():
    f = monomial(2, (-1, 2))
    assert f(np.array([2.0, 3.0])) == pytest.approx(9)


def test_evaluate_length_mismatch(line_polynomial):
    with pytest.raises(DimensionMismatch):
        line_polynomial(np.array([1.0, 2.0, 3.0]))


def test_product_and_sum(line_polynomial, rng):
    g = monomial(1j, (1, -1))
    z = rng.normal(size=(20, 2)) + 1j * rng.normal(size=(20, 2))
    np.testing.assert_allclose((line_polynomial * g)(z), line_polynomial(z) * g(z), rtol=1e-12)
    np.testing.assert_allclose((line_polynomial + g)(z), line_polynomial(z) + g(z), rtol=1e-12)


def test_scale_monomial(line_polynomial):
    scaled = line_polynomial.scale_monomial(3, (1, 1))
    assert scaled.as_dict() == {(1, 1): -3, (2, 1): -3, (1, 2): 3}


def test_abs_bound_dominates_values(line_polynomial, rng):
    moduli = np.array([0.5, 2.0])
    angles = rng.uniform(0, 2 * np.pi, size=(200, 2))
    values = np.abs(line_polynomial(moduli * np.exp(1j * angles)))
    assert np.all(values <= line_polynomial.abs_bound(moduli) + 1e-12)
    assert line_polynomial.abs_bound(moduli) == pytest.approx(3.5)


def test_angle_derivative_bounds(line_polynomial):
    np.testing.assert_allclose(line_polynomial.angle_derivative_bounds(np.array([0.5, 2.0])), [0.5, 2.0])


def test_dict_round_trip(line_polynomial):
    assert polynomial_from_dict(line_polynomial.to_dict()).as_dict() == line_polynomial.as_dict()


def test_load_ideal(tmp_path, line_polynomial):
    path = tmp_path / "ideal.json"
    path.write_text(json.dumps([line_polynomial.to_dict(), monomial(1, (1, 1)).to_dict()]))
    generators = load_ideal(path)
    assert len(generators) == 2
    assert generators[0].as_dict() == line_polynomial.as_dict()


def test_load_ideal_rejects_mixed_dimensions(tmp_path):
    path = tmp_path / "ideal.json"
    path.write_text(json.dumps([monomial(1, (1,)).to_dict(), monomial(1, (1, 1)).to_dict()]))
    with pytest.raises(DimensionMismatch):
        load_ideal(path)


def test_load_ideal_errors(tmp_path):
    with pytest.raises(IoError):
        load_ideal(tmp_path / "missing.json")

    path = tmp_path / "empty.json"
    path.write_text("[]")
    with pytest.raises(InvalidSpec):
        load_ideal(path)
