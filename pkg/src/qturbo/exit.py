"""EXIT analysis for 4-ary Pauli error symbols."""

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq
from scipy.special import expit

from .channel import DepolarizingChannel, make_rng
from .convolutional import ConvolutionalCode
from .siso import DecodeFailure
from .turbo import turbo_decode

SIGMA_MAX = 80.0
DEFAULT_GRID = np.linspace(0.0, 1.0, 21)
CSV_HEADER = ["I_A", "I_E", "p", "code", "samples"]


@lru_cache(maxsize=1)
def _gh_nodes():
    return np.polynomial.hermite.hermgauss(64)


def J(sigma):
    """Mutual information of a consistent Gaussian LLR, mean sigma^2/2 and variance sigma^2."""
    if sigma <= 0:
        return 0.0
    t, w = _gh_nodes()
    llr = sigma * sigma / 2 + math.sqrt(2.0) * sigma * t
    return float(1.0 - np.dot(w, np.logaddexp(0.0, -llr)) / (math.sqrt(math.pi) * math.log(2)))


def J_inv(I, tol=1e-10):
    if I <= 0:
        return 0.0
    if I >= 1:
        return math.inf
    if J(SIGMA_MAX) <= I:
        return SIGMA_MAX
    return brentq(lambda s: J(s) - I, 0.0, SIGMA_MAX, xtol=tol)


def apriori_generate(truth, I_A, rng):
    """Soft a-priori 4-vectors for ``truth`` symbols at mutual information ``I_A``.

    The x and z bits of each symbol get independent Gaussian log-ratio
    observations; their bit likelihoods multiply into the symbol vector.
    """
    truth = np.asarray(truth, dtype=np.int64)
    size = len(truth)
    if I_A <= 0:
        return np.full((size, 4), 0.25)
    if I_A >= 1:
        out = np.zeros((size, 4))
        out[np.arange(size), truth] = 1.0
        return out
    sigma = J_inv(I_A)
    bits = np.stack([truth & 1, truth >> 1], axis=1)  # (x, z)
    llr = (sigma * sigma / 2) * (1 - 2 * bits) + sigma * rng.standard_normal(bits.shape)
    p0 = expit(llr)
    px = np.stack([p0[:, 0], 1 - p0[:, 0]], axis=1)
    pz = np.stack([p0[:, 1], 1 - p0[:, 1]], axis=1)
    sym = np.arange(4)
    out = px[:, sym & 1] * pz[:, sym >> 1]
    return out / out.sum(axis=1, keepdims=True)


def measure_mi(truth, soft):
    """Averaged-entropy estimate of normalized symbol MI, clamped to [0, 1]."""
    soft = np.asarray(soft, dtype=float)
    if len(truth) != len(soft):
        raise ValueError("truth and soft lengths differ")
    if len(soft) == 0:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        plogp = np.where(soft > 0, soft * np.log2(np.where(soft > 0, soft, 1.0)), 0.0)
    val = 1.0 + 0.5 * plogp.sum(axis=1).mean()
    return float(min(1.0, max(0.0, val)))


@dataclass
class ExitCurve:
    i_a: np.ndarray
    i_e: np.ndarray
    p: float = math.nan
    code: str = ""
    samples: int = 0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.i_a = np.asarray(self.i_a, dtype=float)
        self.i_e = np.asarray(self.i_e, dtype=float)
        if self.i_a.shape != self.i_e.shape:
            raise ValueError("I_A and I_E lengths differ")
        if np.any(np.diff(self.i_a) <= 0):
            raise ValueError("I_A grid must be strictly increasing")

    def __len__(self):
        return len(self.i_a)

    def inverted(self):
        """Axis swap. The result is not a function of a grid, so it is returned as arrays."""
        return self.i_e.copy(), self.i_a.copy()

    def inverse_at(self, x):
        """T^-1(x): the a-priori input at which the curve outputs ``x``.

        Noisy samples are made monotone with a running maximum first.
        """
        ok = ~np.isnan(self.i_e)
        ie = np.maximum.accumulate(self.i_e[ok])
        ia = self.i_a[ok]
        # collapse flat stretches so np.interp gets strictly increasing abscissae
        keep = np.concatenate([[True], np.diff(ie) > 0])
        return np.interp(x, ie[keep], ia[keep])

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(CSV_HEADER)
            for a, e in zip(self.i_a, self.i_e):
                w.writerow([repr(float(a)), repr(float(e)), repr(float(self.p)), self.code, self.samples])

    def to_xy(self, path):
        np.savetxt(path, np.column_stack([self.i_a, self.i_e]), fmt="%.17g")

    @classmethod
    def from_csv(cls, path):
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValueError(f"{path}: empty curve file")
        return cls(
            i_a=[float(r["I_A"]) for r in rows],
            i_e=[float(r["I_E"]) for r in rows],
            p=float(rows[0]["p"]),
            code=rows[0]["code"],
            samples=int(rows[0]["samples"]),
        )


def _frame_for(seed, symbols, width):
    steps = max(1, -(-symbols // width))
    return ConvolutionalCode(seed, steps)


def inner_curve(inner, p, grid=DEFAULT_GRID, symbols=20000, seed=0, code=""):
    """T2: extrinsic MI on L2 vs a-priori MI on L2 at channel parameter ``p``."""
    frame = _frame_for(inner, symbols, inner.k)
    ch = DepolarizingChannel(p)
    prior_P = ch.priors(frame.n_physical)
    out = []
    for i, I_A in enumerate(grid):
        rng = make_rng(seed, i)
        P2 = ch.sample_symbols(frame.n_physical, rng)
        L2, synd = frame.split(P2)
        a = apriori_generate(L2, I_A, rng)
        try:
            res = frame.siso(prior_P, a, synd)
            out.append(measure_mi(L2, res.ext_L))
        except DecodeFailure:
            out.append(math.nan)
    return ExitCurve(np.asarray(grid, float), out, p=p, code=code or inner.name, samples=frame.n_logical)


def outer_curve(outer, grid=DEFAULT_GRID, symbols=20000, seed=0, code=""):
    """T1: extrinsic MI on P1 vs a-priori MI on P1. No channel enters."""
    frame = _frame_for(outer, symbols, outer.n)
    flat_L = np.full((frame.n_logical, 4), 0.25)
    out = []
    for i, I_A in enumerate(grid):
        rng = make_rng(seed, i)
        # by linearity the curve does not depend on how P1 is distributed
        P1 = rng.integers(0, 4, frame.n_physical).astype(np.uint8)
        _, synd = frame.split(P1)
        a = apriori_generate(P1, I_A, rng)
        try:
            res = frame.siso(a, flat_L, synd)
            out.append(measure_mi(P1, res.ext_P))
        except DecodeFailure:
            out.append(math.nan)
    return ExitCurve(np.asarray(grid, float), out, code=code or outer.name, samples=frame.n_physical)


def trajectory(cc, p, frames, max_iter, seed):
    """Mean measured (I_E inner, I_E outer) per iteration over ``frames`` frames.

    Frames that stop early repeat their last point.
    """
    ch = DepolarizingChannel(p)
    acc = np.zeros((max_iter, 2))
    for f in range(frames):
        rng = make_rng(seed, f)
        P2 = ch.sample_symbols(cc.inner.n_physical, rng)
        _, s_in, s_out, L2 = cc.split(P2)
        try:
            _, trace = turbo_decode(cc, s_in, s_out, ch.prior(), max_iter, keep_soft=True)
            pts = [(measure_mi(L2, r.ext_inner), measure_mi(L2, r.ext_outer)) for r in trace.iterations]
        except DecodeFailure:
            pts = [(0.0, 0.0)]
        pts += [pts[-1]] * (max_iter - len(pts))
        acc += np.asarray(pts)
    return [tuple(row) for row in acc / frames]


class TunnelReport(NamedTuple):
    open: bool
    min_gap: float
    area: float
    interpolated: bool


def tunnel_metrics(inner, outer):
    """Gap between the inner curve and the inverted outer curve on the inner grid.

    The tunnel is open when the gap is positive at every grid point below I_A = 1.
    """
    x = inner.i_a
    ok = ~np.isnan(inner.i_e)
    x, t2 = x[ok], inner.i_e[ok]
    lo, hi = np.nanmin(outer.i_e), np.nanmax(outer.i_e)
    interpolated = bool(x.min() < lo - 1e-12 or x.max() > hi + 1e-12)
    gap = t2 - outer.inverse_at(x)
    # both curves end at (1, 1); only the points before it decide the tunnel
    inside = x < 1 - 1e-12
    min_gap = float(gap[inside].min() if inside.any() else gap.min())
    return TunnelReport(min_gap > 0, min_gap, float(np.trapezoid(gap, x)), interpolated)
