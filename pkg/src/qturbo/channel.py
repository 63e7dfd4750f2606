"""Depolarizing channel: sampling, priors and hashing-bound arithmetic."""

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .pauli import PauliString

LOG2_3 = math.log2(3)


class DomainError(ValueError):
    """Query outside the region where the requested quantity exists."""


def make_rng(seed, *stream):
    """PCG64 generator for ``seed`` and an optional stream path.

    ``make_rng(seed, i)`` gives independent, reproducible per-frame streams.
    """
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([int(seed), *map(int, stream)])))


@dataclass(frozen=True)
class DepolarizingChannel:
    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise DomainError(f"depolarizing probability {self.p} outside [0, 1]")

    def prior(self):
        """Probabilities over (I, X, Z, Y)."""
        q = self.p / 3
        return np.array([1.0 - self.p, q, q, q])

    def sample_symbols(self, size, rng):
        """i.i.d. symbol indices (0=I, 1=X, 2=Z, 3=Y)."""
        u = rng.random(size)
        sym = np.zeros(size, dtype=np.uint8)
        if self.p > 0:
            hit = u < self.p
            sym[hit] = 1 + np.minimum((3 * u[hit] / self.p).astype(np.uint8), 2)
        return sym

    def sample_error(self, n, rng):
        if n < 1:
            raise ValueError("need at least one qubit")
        return PauliString.from_symbols(self.sample_symbols(n, rng))

    def priors(self, size):
        return np.tile(self.prior(), (size, 1))


def prior(ch):
    return ch.prior()


def sample_error(ch, n, rng):
    return ch.sample_error(n, rng)


def binary_entropy(p):
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def capacity(p, E=0.0):
    """Entanglement-assisted hashing bound 1 - H2(p) - p log2(3) + E."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p={p} outside [0, 1]")
    return 1.0 - binary_entropy(p) - p * LOG2_3 + E


def capacity_max_entangled(p):
    """Hashing bound when c = n - k, i.e. E = 1 - R_Q at the fixed point."""
    return 1.0 - (binary_entropy(p) + p * LOG2_3) / 2


def noise_limit(R_Q, E=0.0, tol=1e-9):
    """The p* with capacity(p*, E) = R_Q."""
    lo = 1e-9
    if capacity(0.0, E) < R_Q:
        raise DomainError(f"rate {R_Q} exceeds the noiseless capacity {capacity(0.0, E)}")
    if capacity(0.0, E) == R_Q:
        return 0.0
    if capacity(lo, E) <= R_Q:
        return lo
    # capacity falls monotonically up to p = 3/4; grow the bracket within it
    hi = 0.25
    while capacity(hi, E) > R_Q:
        if hi >= 0.75:
            raise DomainError(f"capacity stays above {R_Q} on the whole decreasing branch")
        hi = min(0.75, hi * 1.5)
    return brentq(lambda p: capacity(p, E) - R_Q, lo, hi, xtol=tol)


def distance_db(p, p_star):
    if p <= 0 or p_star <= 0:
        raise DomainError("probabilities must be positive")
    return 10.0 * math.log10(p_star / p)
