"""Tests for line quadrics, exact line membership and Log fibers"""

import math

import numpy as np
import pytest

from src.analyzers.line_analyzer import LineAnalyzer
from src.errors import DimensionMismatch, InvalidSpec, NotALine, NotReal, ZeroConstant
from src.models.affine_space import AffineSpaceSpec, LogPoint, ParameterPoint, line_spec


@pytest.fixture
def analyzer():
    return LineAnalyzer()


def _log_image(spec, t):
    return LogPoint(np.log(np.abs(spec.image(np.atleast_1d(t)))))


class TestQuadrics:

    def test_example_line(self, analyzer, example_line):
        (quadric,) = analyzer.real_line_quadrics(example_line)
        assert quadric.j == 2
        assert quadric.input_row == 1
        np.testing.assert_allclose(quadric.as_tuple(), (-1, -10, 14, 35))
        assert quadric.equation() == "y2^2 + 10 y1^2 - 14 r^2 - 35 = 0"

    def test_duplicate_form(self, analyzer):
        (quadric,) = analyzer.real_line_quadrics(line_spec((1, 1), (1, 1)))
        assert quadric.equation() == "y2^2 - y1^2 = 0"

    def test_quadric_vanishes_on_the_line(self, analyzer, example_line, random_parameters, rng):
        (quadric,) = analyzer.real_line_quadrics(example_line)
        for t in list(random_parameters(rng, 50, 1)[:, 0]) + [-3.0, 0.7, 4.0]:
            r, y1, y2 = abs(t), abs(1 + t), abs(5 - 2 * t)
            assert quadric.evaluate(r, y1, y2) == pytest.approx(0, abs=1e-9)

    def test_quadric_nonzero_off_the_amoeba(self, analyzer, example_line):
        (quadric,) = analyzer.real_line_quadrics(example_line)
        assert quadric.evaluate(1.0, 2.0, 1.0) == pytest.approx(8.0)

    def test_same_expression_fails_for_nonreal_line(self, random_parameters, rng):
        # t -> (t, t + 1, t - 2i): |a| = 1, |b| = 2 and cos(theta_a - theta_b) = 0
        t = random_parameters(rng, 200, 1)[:, 0]
        r, y1, y2 = np.abs(t), np.abs(1 + t), np.abs(t - 2j)
        w_plus_t = -y2 ** 2 + r ** 2 + 4
        assert np.max(np.abs(w_plus_t)) > 0.1

    def test_one_quadric_per_extra_row(self, analyzer):
        spec = line_spec((1, 1), (-2, 5), (3, 1), (0.5, -4))
        quadrics = analyzer.real_line_quadrics(spec)
        assert [q.j for q in quadrics] == [2, 3, 4]
        assert [q.input_row for q in quadrics] == [1, 2, 3]

    def test_to_dict_carries_equation(self, analyzer, example_line):
        data = analyzer.real_line_quadrics(example_line)[0].to_dict()
        assert list(data) == ['j', 'input_row', 'c_yj2', 'c_y12', 'c_r2', 'c_const', 'equation']

    def test_rejects_non_real(self, analyzer, nonreal_line):
        with pytest.raises(NotReal):
            analyzer.real_line_quadrics(nonreal_line)

    def test_rejects_single_form(self, analyzer, canonical_line):
        with pytest.raises(InvalidSpec):
            analyzer.real_line_quadrics(canonical_line)

    def test_rejects_planes(self, analyzer):
        with pytest.raises(NotALine):
            analyzer.real_line_quadrics(AffineSpaceSpec(a=[[1, 1], [1, 2]], b=[1, 1]))

    def test_rejects_zero_constant(self, analyzer):
        with pytest.raises(ZeroConstant) as info:
            analyzer.real_line_quadrics(line_spec((1, 1), (3, 0)))
        assert info.value.row == 1


class TestComplexResidual:

    @pytest.mark.parametrize("forms", [
        ((1, 1), (1, -2j)),
        ((1, 1), (-2, 5)),
        ((2 + 1j, 1 - 1j), (0.5j, 3), (1, 1 + 1j)),
    ])
    def test_identity_holds(self, analyzer, random_parameters, rng, forms):
        spec = line_spec(*forms)
        for t in random_parameters(rng, 20, 1):
            p = ParameterPoint.from_t(t)
            for j in range(2, spec.m + 1):
                assert abs(analyzer.complex_line_residual(spec, p, j)) < 1e-8

    def test_row_range(self, analyzer, nonreal_line):
        with pytest.raises(DimensionMismatch):
            analyzer.complex_line_residual(nonreal_line, ParameterPoint(r=[1.0], theta=[0.0]), 1)
        with pytest.raises(DimensionMismatch):
            analyzer.complex_line_residual(nonreal_line, ParameterPoint(r=[1.0], theta=[0.0]), 3)


class TestMembership:

    def test_real_point_single_witness(self, analyzer, canonical_line):
        result = analyzer.line_amoeba_membership(canonical_line, _log_image(canonical_line, 1.0))
        assert result.inside
        assert result.witnesses == pytest.approx((0.0,))

    def test_real_line_has_conjugate_witnesses(self, analyzer, example_line):
        result = analyzer.line_amoeba_membership(example_line, _log_image(example_line, 1j))
        assert result.status == 'Inside'
        assert sorted(result.witnesses) == pytest.approx([math.pi / 2, 3 * math.pi / 2])

    def test_nonreal_line_keeps_one_witness(self, analyzer, nonreal_line):
        result = analyzer.line_amoeba_membership(nonreal_line, _log_image(nonreal_line, 1j))
        assert result.inside
        assert result.witnesses == pytest.approx((math.pi / 2,))

    def test_outside_point(self, analyzer, canonical_line):
        result = analyzer.line_amoeba_membership(canonical_line, LogPoint([0.0, math.log(3.0)]))
        assert not result.inside
        assert result.to_dict() == {'status': 'Outside', 'r': 1.0, 'witnesses': []}

    def test_fails_second_modulus(self, analyzer, example_line):
        x = _log_image(example_line, 1j).x.copy()
        x[2] += 0.5
        assert not analyzer.line_amoeba_membership(example_line, LogPoint(x)).inside

    def test_non_canonical_input(self, analyzer, random_parameters, rng):
        spec = line_spec((2 - 1j, 3j), (0.5, -1 + 1j))
        for t in random_parameters(rng, 10, 1)[:, 0]:
            result = analyzer.line_amoeba_membership(spec, _log_image(spec, t))
            assert result.inside
            gaps = [abs(np.angle(np.exp(1j * (w - np.angle(t))))) for w in result.witnesses]
            assert min(gaps) < 1e-5

    def test_length_checked(self, analyzer, example_line):
        with pytest.raises(DimensionMismatch):
            analyzer.line_amoeba_membership(example_line, LogPoint([0.0, 0.0]))


class TestFibers:

    def test_real_line_fiber_is_conjugate_pair(self, analyzer, example_line):
        fiber = analyzer.line_fiber_solutions(example_line, _log_image(example_line, 1j))
        assert fiber.count == 2
        np.testing.assert_allclose(sorted(fiber.points[:, 0].imag), [-1, 1], atol=1e-9)

    def test_fiber_points_map_back(self, analyzer, nonreal_line, random_parameters, rng):
        for t in random_parameters(rng, 10, 1)[:, 0]:
            x = _log_image(nonreal_line, t)
            fiber = analyzer.line_fiber_solutions(nonreal_line, x)
            assert fiber.count >= 1
            for s in fiber.points[:, 0]:
                np.testing.assert_allclose(_log_image(nonreal_line, s).x, x.x, atol=1e-6)

    def test_empty_fiber(self, analyzer, canonical_line):
        fiber = analyzer.line_fiber_solutions(canonical_line, LogPoint([0.0, math.log(3.0)]))
        assert fiber.count == 0
        assert fiber.points.shape == (0, 1)

    def test_product_space(self, analyzer, product_space):
        x = _log_image(product_space, np.array([1j, 1j]))
        fiber = analyzer.product_fiber_solutions(product_space, x)
        assert fiber.count == 4
        for point in fiber.points:
            np.testing.assert_allclose(_log_image(product_space, point).x, x.x, atol=1e-6)

    def test_product_space_rejects_coupled_forms(self, analyzer):
        spec = AffineSpaceSpec(a=[[1, 1], [0, 1]], b=[1, 2])
        with pytest.raises(InvalidSpec):
            analyzer.product_fiber_solutions(spec, LogPoint([0, 0, 0, 0]))
