"""Tests for seeded chunked execution, validators and configuration"""

import math

import numpy as np
import pytest

from config.config import get_config
from src.errors import InvalidSpec
from src.utils.parallel import chunk_sizes, map_chunks, run_chunked, worker_count
from src.utils.validators import angle_distance, parse_float_list, parse_grid, reduce_angle, validate_samples


def _draws(rng, size):
    return rng.uniform(size=size)


class TestRunChunked:

    def test_chunk_sizes(self):
        assert chunk_sizes(10, 4) == [4, 4, 2]
        assert chunk_sizes(8, 4) == [4, 4]
        assert chunk_sizes(0, 4) == []

    def test_independent_of_thread_count(self):
        single = np.concatenate(run_chunked(_draws, 1000, seed=9, chunk_size=128, max_workers=1))
        many = np.concatenate(run_chunked(_draws, 1000, seed=9, chunk_size=128, max_workers=6))
        np.testing.assert_array_equal(single, many)
        assert single.size == 1000

    def test_seed_changes_stream(self):
        first = np.concatenate(run_chunked(_draws, 100, seed=1, chunk_size=50))
        second = np.concatenate(run_chunked(_draws, 100, seed=2, chunk_size=50))
        assert not np.array_equal(first, second)

    def test_negative_seed_is_accepted(self):
        values = run_chunked(_draws, 10, seed=-1, chunk_size=5)
        assert len(values) == 2

    def test_empty_budget(self):
        assert run_chunked(_draws, 0, seed=1) == []

    def test_map_chunks_covers_range(self):
        ranges = map_chunks(lambda lo, hi: (lo, hi), 10, chunk_size=3, max_workers=3)
        assert ranges == [(0, 3), (3, 6), (6, 9), (9, 10)]

    def test_worker_count_from_environment(self, monkeypatch):
        monkeypatch.setenv('AMOEBA_THREADS', '3')
        assert worker_count() == 3
        assert worker_count(max_workers=1) == 1


class TestValidators:

    def test_reduce_angle(self):
        np.testing.assert_allclose(reduce_angle(np.array([-math.pi / 2, 2 * math.pi, 7.0])),
                                   [3 * math.pi / 2, 0.0, 7.0 - 2 * math.pi])
        assert reduce_angle(-1e-300) == 0.0

    def test_angle_distance(self):
        assert angle_distance(0.1, 2 * math.pi - 0.1) == pytest.approx(0.2)

    def test_parse_float_list(self):
        assert parse_float_list("0,-1.5,2e-3") == [0.0, -1.5, 0.002]
        assert parse_float_list("1,inf") is None
        assert parse_float_list("") is None

    def test_parse_grid(self):
        assert parse_grid("3x4") == (3, 4)
        assert parse_grid("7") == (7, 7)
        assert parse_grid("3x4x5") is None

    def test_validate_samples(self):
        assert validate_samples("12") == 12
        with pytest.raises(InvalidSpec):
            validate_samples(0, minimum=1)


class TestConfig:

    def test_yaml_values(self):
        assert get_config('certificate.max_dim') == 3
        assert float(get_config('coamoeba.max_condition')) == 1e12

    def test_environment_override(self, monkeypatch):
        monkeypatch.setenv('SAMPLING_SEED', '123')
        assert get_config('sampling.seed') == 123

    def test_default_for_missing_key(self):
        assert get_config('sampling.no_such_key', 'fallback') == 'fallback'
