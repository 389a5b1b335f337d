"""Tests for the coamoeba linear system, sign-pattern tiling and coamoeba volume"""

import math

import numpy as np
import pytest

from src.analyzers.coamoeba_solver import CoamoebaSolver, SignPattern, TilingStats, system_matrices
from src.errors import DimensionMismatch, InvalidSpec, NotSquareCase, PreconditionError
from src.models.affine_space import TorusPoint


@pytest.fixture
def solver():
    return CoamoebaSolver()


class TestSignPattern:

    def test_code_round_trip(self):
        for code in range(16):
            assert SignPattern.from_code(code, 4).code == code

    def test_label(self):
        pattern = SignPattern.from_code(0b10, 2)
        assert pattern.label == '+-'
        assert SignPattern.from_label('+-') == pattern

    def test_group_product(self):
        a, b = SignPattern.from_label('+--+'), SignPattern.from_label('-+-+')
        assert (a * b).label == '--++'
        assert (a * a).is_positive()

    def test_rejects_zero(self):
        with pytest.raises(ValueError):
            SignPattern((1, 0))


class TestClassify:

    def test_positive_pattern(self, solver, canonical_line):
        result = solver.classify(canonical_line, TorusPoint([2 * math.pi / 3, math.pi / 3]))
        assert result.outcome == 'Interior'
        assert result.pattern.label == '++'
        np.testing.assert_allclose(result.x, [1.0], atol=1e-12)
        np.testing.assert_allclose(result.y, [1.0], atol=1e-12)

    def test_negative_pattern(self, solver, canonical_line):
        result = solver.classify(canonical_line, TorusPoint([math.pi / 3, 2 * math.pi / 3]))
        assert result.pattern.label == '--'
        np.testing.assert_allclose(result.x, [-1.0], atol=1e-12)
        np.testing.assert_allclose(result.y, [-1.0], atol=1e-12)

    def test_degenerate(self, solver, canonical_line):
        result = solver.classify(canonical_line, TorusPoint([math.pi / 2, math.pi / 2]))
        assert result.degenerate
        assert result.to_dict() == {'outcome': 'Degenerate', 'theta': [math.pi / 2, math.pi / 2]}

    def test_witness_point_lies_on_space(self, solver, make_spec, rng):
        spec = make_spec(rng, 2, 2)
        for theta in rng.uniform(0, 2 * math.pi, size=(20, 4)):
            result = solver.classify(spec, TorusPoint(theta))
            if result.degenerate:
                continue
            z = solver.witness_point(result)
            np.testing.assert_allclose(z[2:], spec.forms(z[:2]), atol=1e-8 * max(1.0, np.abs(z).max()))
            signed = np.array(result.pattern.s) * z
            assert np.max(np.abs(np.angle(signed * np.exp(-1j * theta)))) < 1e-8

    def test_no_witness_when_degenerate(self, solver, canonical_line):
        result = solver.classify(canonical_line, TorusPoint([math.pi / 2, math.pi / 2]))
        with pytest.raises(PreconditionError):
            solver.witness_point(result)

    def test_batch_matches_single(self, solver, make_spec, rng):
        spec = make_spec(rng, 2, 2, real=True)
        thetas = rng.uniform(0, 2 * math.pi, size=(50, 4))
        batch = solver.classify_batch(spec, thetas)
        for theta, code in zip(thetas, batch.codes):
            result = solver.classify(spec, TorusPoint(theta))
            assert (result.pattern.code if not result.degenerate else -1) == code

    @pytest.mark.parametrize("k", [1, 2])
    def test_adding_pi_flips_pattern_signs(self, solver, make_spec, rng, k):
        spec = make_spec(rng, k, k)
        thetas = rng.uniform(0, 2 * math.pi, size=(1000, 2 * k))
        base = solver.classify_batch(spec, thetas).codes
        for flips in rng.integers(1, 1 << (2 * k), size=4):
            negative = (int(flips) >> np.arange(2 * k)) & 1
            flipped = solver.classify_batch(spec, thetas + math.pi * negative).codes
            both = (base >= 0) & (flipped >= 0)
            assert np.count_nonzero(both) >= 990
            np.testing.assert_array_equal(flipped[both], base[both] ^ int(flips))

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_arguments_of_points_on_space_are_positive(self, solver, make_spec, random_parameters, rng, k):
        spec = make_spec(rng, k, k)
        t = random_parameters(rng, 1000, k)
        f = spec.forms(t)
        batch = solver.classify_batch(spec, np.angle(np.concatenate([t, f], axis=1)))
        np.testing.assert_array_equal(batch.codes, 0)
        np.testing.assert_allclose(batch.solutions, np.abs(np.concatenate([t, f], axis=1)), rtol=1e-6)

    def test_system_matrix_shape(self, make_spec, rng):
        spec = make_spec(rng, 2, 2)
        assert system_matrices(spec, np.zeros((3, 4))).shape == (3, 4, 4)

    def test_requires_square_case(self, solver, example_line):
        with pytest.raises(NotSquareCase):
            solver.classify(example_line, TorusPoint([0, 0, 0]))

    def test_torus_point_length(self, solver, canonical_line):
        with pytest.raises(DimensionMismatch):
            solver.classify(canonical_line, TorusPoint([0.1, 0.2, 0.3]))


class TestTiling:

    def test_canonical_line_tiles_in_quarters(self, solver, canonical_line):
        stats = solver.tiling_stats(canonical_line, 40000, seed=3)
        assert len(stats.counts) == 4
        assert sum(stats.counts.values()) + stats.degenerate_count == 40000
        assert stats.degenerate_fraction < 1e-3
        for frequency in stats.frequencies().values():
            assert frequency == pytest.approx(0.25, abs=0.01)

    def test_generic_plane_tiles_in_sixteenths(self, solver, make_spec, rng):
        spec = make_spec(rng, 2, 2, real=True)
        stats = solver.tiling_stats(spec, 64000, seed=11)
        assert len(stats.counts) == 16
        assert stats.degenerate_fraction < 1e-3
        for frequency in stats.frequencies().values():
            assert frequency == pytest.approx(1 / 16, abs=0.004)

    def test_deterministic(self, solver, canonical_line):
        first = solver.tiling_stats(canonical_line, 5000, seed=-9, chunk_size=1000)
        second = solver.tiling_stats(canonical_line, 5000, seed=-9, chunk_size=1000)
        assert first.to_dict() == second.to_dict()

    def test_thread_count_does_not_change_counts(self, solver, canonical_line, monkeypatch):
        monkeypatch.setenv('AMOEBA_THREADS', '1')
        single = solver.tiling_stats(canonical_line, 6000, seed=5, chunk_size=1000)
        monkeypatch.setenv('AMOEBA_THREADS', '4')
        several = solver.tiling_stats(canonical_line, 6000, seed=5, chunk_size=1000)
        assert single.to_dict() == several.to_dict()

    def test_zero_samples(self, solver, canonical_line):
        stats = solver.tiling_stats(canonical_line, 0)
        assert stats.counts == {}
        assert stats.frequencies() == {}
        assert stats.to_frame().empty

    def test_negative_samples(self, solver, canonical_line):
        with pytest.raises(InvalidSpec):
            solver.tiling_stats(canonical_line, -1)

    def test_frame_and_dict(self, solver, canonical_line):
        stats = solver.tiling_stats(canonical_line, 2000, seed=1)
        frame = stats.to_frame()
        assert list(frame.columns) == ['pattern', 'count', 'frequency']
        assert frame['pattern'].tolist() == ['++', '-+', '+-', '--']
        assert list(stats.to_dict()) == ['n_samples', 'seed', 'degenerate_count', 'patterns']

    def test_sample_patterns(self, solver, canonical_line):
        frame = solver.sample_patterns(canonical_line, 500, seed=2)
        assert list(frame.columns) == ['arg1', 'arg2', 'pattern']
        assert len(frame) == 500
        assert set(frame['pattern']) <= {'++', '+-', '-+', '--', 'degenerate'}

    def test_counts_from_sample_frame(self, solver, make_spec, rng):
        spec = make_spec(rng, 2, 2, real=True)
        frame = solver.sample_patterns(spec, 8000, seed=12, chunk_size=3000)
        stats = solver.tiling_stats(spec, 8000, seed=12, chunk_size=3000)
        assert TilingStats.from_frame(frame, seed=12).to_dict() == stats.to_dict()



class TestCoamoebaVolume:

    def test_canonical_line(self, solver, canonical_line):
        estimate = solver.coamoeba_volume(canonical_line, 40000, seed=7)
        assert estimate.within(math.pi ** 2, n_sigma=4)
        assert estimate.n_samples == 40000
        assert estimate.seed == 7

    def test_generic_plane(self, solver, make_spec, rng):
        estimate = solver.coamoeba_volume(make_spec(rng, 2, 2, real=True), 64000, seed=8)
        assert estimate.within(math.pi ** 4, n_sigma=4)

    def test_stderr_scales_with_sample_count(self, solver, canonical_line):
        small = solver.coamoeba_volume(canonical_line, 10000, seed=1)
        large = solver.coamoeba_volume(canonical_line, 40000, seed=1)
        assert small.stderr / large.stderr == pytest.approx(2.0, rel=0.1)

    def test_requires_samples(self, solver, canonical_line):
        with pytest.raises(InvalidSpec):
            solver.coamoeba_volume(canonical_line, 0)
