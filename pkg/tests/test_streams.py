import math

import numpy as np
import pytest

from bmvq import RandomStream, exp_sample
from bmvq.streams import exp_block


class ForcedStream:
    """Stand-in stream that yields a prescribed uniform."""

    def __init__(self, u):
        self.u = u

    def next_uniform(self):
        return self.u


def test_inverse_cdf_identity():
    # u = e^-1 lands exactly on the mean for rate 1, half of it for rate 2
    assert exp_sample(ForcedStream(math.exp(-1)), 1.0) == pytest.approx(1.0, abs=1e-15)
    assert exp_sample(ForcedStream(math.exp(-1)), 2.0) == pytest.approx(0.5, abs=1e-15)


def test_rate_must_be_positive():
    with pytest.raises(ValueError):
        exp_sample(RandomStream(1), 0.0)


def test_law_of_large_numbers_mean():
    # rate 1000, 1e6 draws: mean within 3 standard errors of 1e-3
    rate, n = 1000.0, 1_000_000
    draws = exp_block(RandomStream(20260809), rate, n)
    se = (1.0 / rate) / math.sqrt(n)
    assert abs(draws.mean() - 1.0 / rate) <= 3 * se


def test_mean_and_variance_within_five_standard_errors():
    rate, n = 2.5, 200_000
    draws = exp_block(RandomStream(7, 3), rate, n)
    mean_se = (1 / rate) / math.sqrt(n)
    assert abs(draws.mean() - 1 / rate) <= 5 * mean_se
    # sampling SE of the variance of an exponential is var * sqrt(8/n)
    var_se = (1 / rate**2) * math.sqrt(8.0 / n)
    assert abs(draws.var(ddof=1) - 1 / rate**2) <= 5 * var_se


def test_identical_stream_identity_reproduces_exactly():
    a = exp_block(RandomStream(123, 4), 1.0, 1000)
    b = exp_block(RandomStream(123, 4), 1.0, 1000)
    assert a.tobytes() == b.tobytes()


def test_distinct_stream_indices_differ():
    a = exp_block(RandomStream(123, 0), 1.0, 100)
    b = exp_block(RandomStream(123, 1), 1.0, 100)
    assert not np.array_equal(a, b)


def test_scalar_and_block_draws_agree():
    s1 = RandomStream(99, 2)
    scalars = [exp_sample(s1, 3.0) for _ in range(50)]
    block = exp_block(RandomStream(99, 2), 3.0, 50)
    assert np.allclose(scalars, block, rtol=0, atol=0)


def test_substream_is_deterministic_and_independent():
    s = RandomStream(5, 1)
    t1 = s.substream(0).uniform_block(10)
    t2 = RandomStream(5, 1).substream(0).uniform_block(10)
    assert np.array_equal(t1, t2)
    assert not np.array_equal(t1, s.substream(1).uniform_block(10))
