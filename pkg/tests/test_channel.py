import math

import numpy as np
import pytest

from qturbo.channel import (
    DepolarizingChannel, DomainError, capacity, capacity_max_entangled, distance_db, make_rng,
    noise_limit, prior, sample_error,
)


def test_priors():
    assert np.allclose(prior(DepolarizingChannel(0.09)), [0.91, 0.03, 0.03, 0.03])
    assert np.array_equal(DepolarizingChannel(0).prior(), [1, 0, 0, 0])
    assert np.allclose(DepolarizingChannel(0.75).prior(), 0.25)
    with pytest.raises(ValueError):
        DepolarizingChannel(1.5)


def test_sampling_extremes():
    rng = make_rng(1)
    assert sample_error(DepolarizingChannel(0), 50, rng).weight() == 0
    assert sample_error(DepolarizingChannel(1), 50, rng).weight() == 50
    with pytest.raises(ValueError):
        sample_error(DepolarizingChannel(0.1), 0, rng)


def test_sampling_frequencies():
    n = 10**6
    sym = DepolarizingChannel(0.3).sample_symbols(n, make_rng(3))
    counts = np.bincount(sym, minlength=4) / n
    sd = math.sqrt(0.1 * 0.9 / n)
    assert np.all(np.abs(counts[1:] - 0.1) < 3 * sd)


def test_sampling_reproducible():
    ch = DepolarizingChannel(0.2)
    a = ch.sample_symbols(1000, make_rng(5, 2))
    assert np.array_equal(a, ch.sample_symbols(1000, make_rng(5, 2)))
    assert not np.array_equal(a, ch.sample_symbols(1000, make_rng(5, 3)))


def test_capacity_values():
    assert capacity(0, 0) == 1
    assert abs(capacity(0.095, 0) - 0.4) < 0.01
    assert abs(capacity(0.3779, 6 / 9) - 1 / 9) < 0.002


def test_capacity_decreasing():
    ps = np.linspace(0, 0.25, 200)
    assert np.all(np.diff([capacity(p) for p in ps]) < 0)


def test_max_entangled_fixed_point():
    for p in (0.05, 0.2, 0.3):
        # with E = 1 - R, capacity(p, E) = R solves R = 1 - (H2 + p log2 3)/2
        R = capacity_max_entangled(p)
        assert abs(capacity(p, 1 - R) - R) < 1e-12


def test_noise_limit():
    assert abs(noise_limit(0.4, 0) - 0.095) < 0.002
    assert abs(noise_limit(0.4, 0.6) - 0.25) < 0.005
    assert abs(noise_limit(1 / 9, 6 / 9) - 0.3779) < 0.001
    assert noise_limit(1, 0) == 0
    for R, E in ((0.4, 0), (0.2, 0.3), (1 / 9, 6 / 9)):
        assert abs(capacity(noise_limit(R, E), E) - R) < 1e-5
    with pytest.raises(DomainError):
        noise_limit(1.2, 0)


def test_distance_db():
    assert abs(distance_db(0.15, 0.25) - 2.218) < 0.001
    assert distance_db(0.3, 0.3) == 0
    assert abs(distance_db(0.345, 0.3779) - 0.397) < 0.005
    with pytest.raises(DomainError):
        distance_db(0, 0.3)
