"""Serially concatenated quantum turbo codes and the Monte-Carlo WER harness."""

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .channel import DepolarizingChannel, make_rng
from .convolutional import ConvolutionalCode
from .siso import DecodeFailure, hard_decision


@dataclass(frozen=True, eq=False)
class Interleaver:
    """Symbol permutation: ``interleave(x)[i] = x[perm[i]]``."""

    perm: np.ndarray
    seed: int | None = None

    def __post_init__(self):
        perm = np.asarray(self.perm, dtype=np.int64)
        if not np.array_equal(np.sort(perm), np.arange(len(perm))):
            raise ValueError("interleaver is not a permutation")
        perm.setflags(write=False)
        object.__setattr__(self, "perm", perm)

    def __len__(self):
        return len(self.perm)

    def interleave(self, x):
        return np.asarray(x)[self.perm]

    def deinterleave(self, y):
        y = np.asarray(y)
        out = np.empty_like(y)
        out[self.perm] = y
        return out


def make_interleaver(N, seed):
    if N < 1:
        raise ValueError("interleaver length must be positive")
    return Interleaver(make_rng(seed).permutation(N), seed)


@dataclass(frozen=True, eq=False)
class ConcatenatedCode:
    """Outer frame code, interleaver, inner convolutional code.

    ``outer`` is anything with n_physical, n_logical, split() and siso(),
    for example a ConvolutionalCode or a qircc.IrregularCode.
    """

    outer: object
    inner: ConvolutionalCode
    interleaver: Interleaver

    def __post_init__(self):
        if not (len(self.interleaver) == self.outer.n_physical == self.inner.n_logical):
            raise ValueError("outer coded length, interleaver and inner logical length differ")

    @classmethod
    def build(cls, outer, inner_seed, interleaver_seed=0):
        N = outer.n_physical
        if N % inner_seed.k:
            raise ValueError(f"inner k={inner_seed.k} does not divide interleaver length {N}")
        inner = ConvolutionalCode(inner_seed, N // inner_seed.k)
        return cls(outer, inner, make_interleaver(N, interleaver_seed))

    @property
    def rate(self):
        return self.outer.n_logical / self.inner.n_physical

    @property
    def ebit_rate(self):
        return self.inner.seed.c / self.inner.seed.n

    def split(self, physical):
        """True inner physical error -> (L1, inner syndrome, outer syndrome, L2)."""
        L2, s_in = self.inner.split(physical)
        L1, s_out = self.outer.split(self.interleaver.deinterleave(L2))
        return L1, s_in, s_out, L2


@dataclass
class Iteration:
    est_L1: np.ndarray
    ext_inner: np.ndarray  # extrinsic on L2 from the inner decoder
    ext_outer: np.ndarray  # extrinsic on P1 from the outer decoder, interleaved
    post_L1: np.ndarray = None


@dataclass
class TurboTrace:
    iterations: list = field(default_factory=list)
    failed_at: int | None = None

    def __len__(self):
        return len(self.iterations)


def turbo_decode(cc, synd_inner, synd_outer, channel_prior, max_iter, keep_soft=False):
    """Iterative extrinsic exchange between the inner and outer SISO decoders.

    Stops after ``max_iter`` iterations or once the L1 hard decision has been
    unchanged for two consecutive iterations. Returns (est_L1, TurboTrace);
    a DecodeFailure is raised with ``iteration`` set on the exception.
    """
    N = len(cc.interleaver)
    prior_P2 = np.asarray(channel_prior, dtype=float)
    if prior_P2.ndim == 1:
        prior_P2 = np.tile(prior_P2, (cc.inner.n_physical, 1))
    a_L2 = np.full((N, 4), 0.25)
    flat_L1 = np.full((cc.outer.n_logical, 4), 0.25)
    trace = TurboTrace()
    est, stable = None, 0
    for it in range(1, max_iter + 1):
        try:
            inner = cc.inner.siso(prior_P2, a_L2, synd_inner)
            outer = cc.outer.siso(cc.interleaver.deinterleave(inner.ext_L), flat_L1, synd_outer)
        except DecodeFailure as exc:
            exc.iteration = it
            trace.failed_at = it
            raise
        a_L2 = cc.interleaver.interleave(outer.ext_P)
        new = hard_decision(outer.post_L)
        trace.iterations.append(
            Iteration(new, inner.ext_L, a_L2, outer.post_L) if keep_soft else Iteration(new, None, None)
        )
        stable = stable + 1 if est is not None and np.array_equal(new, est) else 0
        est = new
        if stable >= 2:
            break
    return est, trace


@dataclass
class SimResult:
    p: float
    frames: int
    iterations: int
    word_errors: int
    symbol_errors: int
    symbols: int
    wer_trace: list
    qber_trace: list
    failures: int = 0
    mean_iterations: float = 0.0

    @property
    def wer(self):
        return self.word_errors / self.frames

    @property
    def qber(self):
        return self.symbol_errors / self.symbols

    @property
    def wer_stderr(self):
        w = self.wer
        return math.sqrt(w * (1 - w) / self.frames)


def _run_frame(cc, p, max_iter, seed, frame):
    """(symbol errors after each iteration, iterations run, failed)."""
    rng = make_rng(seed, frame)
    ch = DepolarizingChannel(p)
    P2 = ch.sample_symbols(cc.inner.n_physical, rng)
    L1, s_in, s_out, _ = cc.split(P2)
    try:
        _, trace = turbo_decode(cc, s_in, s_out, ch.prior(), max_iter)
    except DecodeFailure:
        return [len(L1)] * max_iter, max_iter, True
    errs = [int(np.count_nonzero(rec.est_L1 != L1)) for rec in trace.iterations]
    errs += [errs[-1]] * (max_iter - len(errs))
    return errs, len(trace), False


def _run_chunk(args):
    cc, p, max_iter, seed, frames = args
    return [_run_frame(cc, p, max_iter, seed, f) for f in frames]


def simulate_wer(cc, p, frames, max_iter, seed, workers=1):
    """Monte-Carlo word and qubit error rates of ``cc`` on the depolarizing channel.

    Frame f draws from make_rng(seed, f), so results do not depend on ``workers``.
    A decode failure counts as a frame with every logical symbol wrong.
    """
    if frames < 1:
        raise ValueError("frames must be positive")
    ids = list(range(frames))
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and frames > 1:
        chunks = [ids[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_run_chunk, [(cc, p, max_iter, seed, ch) for ch in chunks]))
        by_frame = {f: r for ch, part in zip(chunks, parts) for f, r in zip(ch, part)}
        rows = [by_frame[f] for f in ids]
    else:
        rows = _run_chunk((cc, p, max_iter, seed, ids))

    errs = np.array([r[0] for r in rows], dtype=np.int64)  # (frames, max_iter)
    symbols = frames * cc.outer.n_logical
    return SimResult(
        p=p,
        frames=frames,
        iterations=max_iter,
        word_errors=int(np.count_nonzero(errs[:, -1])),
        symbol_errors=int(errs[:, -1].sum()),
        symbols=symbols,
        wer_trace=(np.count_nonzero(errs, axis=0) / frames).tolist(),
        qber_trace=(errs.sum(axis=0) / symbols).tolist(),
        failures=sum(r[2] for r in rows),
        mean_iterations=float(np.mean([r[1] for r in rows])),
    )
