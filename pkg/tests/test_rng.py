import numpy as np
import pytest

from lerslab.rng import RngStream, child_seed, next_u64


def test_xoshiro256starstar_reference_vector():
    # published reference outputs for state (1, 2, 3, 4)
    state = np.array([1, 2, 3, 4], dtype=np.uint64)
    got = [int(next_u64(state)) for _ in range(4)]
    assert got == [11520, 0, 1509978240, 1215971899390074240]


def test_same_seed_same_draws():
    a, b = RngStream(99), RngStream(99)
    assert [a.randbelow(1000) for _ in range(50)] == [b.randbelow(1000) for _ in range(50)]


def test_frozen_draws():
    # regression pin: a seed must reproduce the same run on every platform
    r = RngStream(12345)
    assert [r.randbelow(6) for _ in range(10)] == [4, 0, 5, 0, 3, 0, 0, 1, 2, 5]
    assert child_seed(2024, 40, 199) == 11291096467251596820


def test_randbelow_range_and_balance():
    r = RngStream(3)
    draws = np.array([r.randbelow(6) for _ in range(30000)])
    assert draws.min() == 0 and draws.max() == 5
    counts = np.bincount(draws, minlength=6)
    assert np.all(np.abs(counts - 5000) < 5 * np.sqrt(5000))


def test_randbelow_rejects_bad_bounds():
    r = RngStream(0)
    with pytest.raises(ValueError):
        r.randbelow(0)
    with pytest.raises(ValueError):
        r.randbelow(2**32)


def test_uniform_in_unit_interval():
    r = RngStream(5)
    u = np.array([r.random() for _ in range(1000)])
    assert np.all((u >= 0) & (u < 1))
    assert abs(u.mean() - 0.5) < 0.05


def test_child_seed_is_pure_and_distinct():
    assert child_seed(1, 5, 0) == child_seed(1, 5, 0)
    seeds = {child_seed(1, n, r) for n in range(1, 20) for r in range(50)}
    assert len(seeds) == 19 * 50
    assert child_seed(1, 5, 0) != child_seed(2, 5, 0)
    with pytest.raises(ValueError):
        child_seed(-1, 1, 1)


def test_copy_is_independent():
    a = RngStream(8)
    a.randbelow(10)
    b = a.copy()
    assert a.randbelow(10**6) == b.randbelow(10**6)
