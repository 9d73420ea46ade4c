import numpy as np
import pytest

from lgsim.errors import ValidationError
from lgsim.streams import chunk_sizes, check_seed, substream


class TestSubstream:
    def test_same_path_reproduces_draws(self):
        a = substream(42, 3, 7).uniform(size=100)
        b = substream(42, 3, 7).uniform(size=100)
        np.testing.assert_array_equal(a, b)

    def test_different_paths_are_independent(self):
        a = substream(42, 0, 0).uniform(size=1000)
        b = substream(42, 0, 1).uniform(size=1000)
        c = substream(42, 1, 0).uniform(size=1000)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)
        # crude independence screen: correlations at noise level
        assert abs(np.corrcoef(a, b)[0, 1]) < 0.15
        assert abs(np.corrcoef(a, c)[0, 1]) < 0.15

    def test_different_seeds_differ(self):
        a = substream(1, 0).uniform(size=100)
        b = substream(2, 0).uniform(size=100)
        assert not np.array_equal(a, b)

    def test_stream_identity_ignores_other_streams(self):
        # drawing from one stream never perturbs another
        a = substream(9, 5)
        _ = substream(9, 6).normal(size=12345)
        b = substream(9, 5)
        np.testing.assert_array_equal(a.uniform(size=50), b.uniform(size=50))


class TestCheckSeed:
    def test_accepts_u64_range(self):
        assert check_seed(0) == 0
        assert check_seed(2**64 - 1) == 2**64 - 1

    def test_rejects_negative_and_oversized(self):
        with pytest.raises(ValidationError):
            check_seed(-1)
        with pytest.raises(ValidationError):
            check_seed(2**64)

    def test_rejects_non_integers(self):
        with pytest.raises(ValidationError):
            check_seed(1.5)
        with pytest.raises(ValidationError):
            check_seed(True)


class TestChunkSizes:
    def test_exact_multiple(self):
        assert chunk_sizes(200, 100) == [100, 100]

    def test_remainder_chunk(self):
        assert chunk_sizes(250, 100) == [100, 100, 50]

    def test_small_n_single_chunk(self):
        assert chunk_sizes(7, 100) == [7]

    def test_zero_events(self):
        assert chunk_sizes(0, 100) == []

    def test_partition_is_worker_independent(self):
        # the partition depends only on (n, chunk_size)
        assert sum(chunk_sizes(123_456, 4096)) == 123_456

    def test_invalid_inputs(self):
        with pytest.raises(ValidationError):
            chunk_sizes(-1, 100)
        with pytest.raises(ValidationError):
            chunk_sizes(100, 0)
