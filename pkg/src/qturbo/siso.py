"""Degenerate symbol-MAP forward-backward decoding of one convolutional code."""

from typing import NamedTuple

import numba
import numpy as np

from .convolutional import Syndrome, Trellis

class DecodeFailure(RuntimeError):
    """The syndrome has zero probability under the supplied priors."""

    def __init__(self, step, where="forward"):
        super().__init__(f"zero total probability at step {step} ({where} pass)")
        self.step = step


class SisoOutput(NamedTuple):
    post_L: np.ndarray
    ext_L: np.ndarray
    post_P: np.ndarray
    ext_P: np.ndarray


@numba.njit(cache=True)
def _forward_backward(alpha0, betaN, mu, lam, next_base, phys_base, offM, offP, pl, pp):
    steps = offM.shape[0]
    S = alpha0.shape[0]
    T = mu.shape[0]
    alpha = np.empty((steps + 1, S))
    beta = np.empty((steps + 1, S))
    alpha[0] = alpha0
    beta[steps] = betaN
    for t in range(steps):
        acc = np.zeros(S)
        for i in range(T):
            a = alpha[t, mu[i]]
            if a == 0.0:
                continue
            acc[next_base[i] ^ offM[t]] += a * pl[t, lam[i]] * pp[t, phys_base[i] ^ offP[t]]
        tot = acc.sum()
        if not tot > 0.0:
            return alpha, beta, t, 0
        alpha[t + 1] = acc / tot
    for t in range(steps - 1, -1, -1):
        acc = np.zeros(S)
        for i in range(T):
            b = beta[t + 1, next_base[i] ^ offM[t]]
            if b == 0.0:
                continue
            acc[mu[i]] += b * pl[t, lam[i]] * pp[t, phys_base[i] ^ offP[t]]
        tot = acc.sum()
        if not tot > 0.0:
            return alpha, beta, t, 1
        beta[t] = acc / tot
    return alpha, beta, -1, 0


@numba.njit(cache=True)
def _soft_outputs(alpha, beta, mu, lam, next_base, phys_base, offM, offP, pl, pp, pl_ex, pp_ex):
    """Per-qubit a-posteriori and extrinsic sums for every step.

    The extrinsic sum for qubit j uses the joint prior with qubit j's own
    factor left out, which equals posterior / prior wherever the prior is nonzero.
    """
    steps = offM.shape[0]
    k = pl_ex.shape[1]
    n = pp_ex.shape[1]
    post_l = np.zeros((steps, k, 4))
    ext_l = np.zeros((steps, k, 4))
    post_p = np.zeros((steps, n, 4))
    ext_p = np.zeros((steps, n, 4))
    for t in range(steps):
        for i in range(mu.shape[0]):
            ab = alpha[t, mu[i]] * beta[t + 1, next_base[i] ^ offM[t]]
            if ab == 0.0:
                continue
            li = lam[i]
            p = phys_base[i] ^ offP[t]
            gl = pl[t, li]
            gp = pp[t, p]
            w = ab * gl * gp
            for j in range(k):
                d = (li >> (2 * j)) & 3
                post_l[t, j, d] += w
                ext_l[t, j, d] += ab * gp * pl_ex[t, j, li]
            for j in range(n):
                d = (p >> (2 * j)) & 3
                post_p[t, j, d] += w
                ext_p[t, j, d] += ab * gl * pp_ex[t, j, p]
    return post_l, ext_l, post_p, ext_p


def joint_prior(priors, width):
    """Per-qubit 4-vectors (steps*width, 4) -> joint group table (steps, 4^width)."""
    priors = np.asarray(priors, dtype=float).reshape(-1, width, 4) if width else np.ones((0, 0, 4))
    if width == 0:
        return None
    joint = np.ones((priors.shape[0], 4**width))
    idx = np.arange(4**width)
    for j in range(width):
        joint *= priors[:, j, (idx >> (2 * j)) & 3]
    return joint


def excluded_priors(priors, width):
    """(steps, width, 4^width): joint prior with qubit j's factor replaced by 1."""
    priors = np.asarray(priors, dtype=float).reshape(-1, width, 4)
    idx = np.arange(4**width)
    out = np.ones((priors.shape[0], width, 4**width))
    for j in range(width):
        for jj in range(width):
            if jj != j:
                out[:, j] *= priors[:, jj, (idx >> (2 * jj)) & 3]
    return out


def normalize(rows):
    tot = rows.sum(axis=-1, keepdims=True)
    uniform = tot == 0
    return np.where(uniform, 0.25, rows / np.where(uniform, 1.0, tot))


def marginals(joint, width):
    """Joint group table (steps, 4^width) -> per-qubit 4-vectors (steps*width, 4)."""
    steps = joint.shape[0]
    if width == 0:
        return np.zeros((0, 4))
    cube = joint.reshape((steps,) + (4,) * width)
    out = np.empty((steps, width, 4))
    for j in range(width):
        axis = width - j  # C order: the last axis holds qubit 0
        others = tuple(ax for ax in range(1, width + 1) if ax != axis)
        out[:, j] = cube.sum(axis=others)
    return out.reshape(-1, 4)


def siso_decode(code, priors_P, priors_L, synd: Syndrome, initial=None, final=None, trellis=None):
    """Forward-backward pass over one frame of the seed transformation ``code``.

    priors_P is (steps*n, 4), priors_L is (steps*k, 4). ``initial`` and
    ``final`` are distributions over the 4^m memory states; by default the
    memory starts in the identity state and ends unconstrained.
    Raises DecodeFailure when the syndrome is impossible under the priors.
    """
    tr = trellis if trellis is not None else Trellis(code)
    n, k, m = code.n, code.k, code.m
    priors_P = np.asarray(priors_P, dtype=float)
    priors_L = np.asarray(priors_L, dtype=float)
    steps = len(priors_P) // n
    if priors_P.shape != (steps * n, 4) or priors_L.shape != (steps * k, 4):
        raise ValueError("prior shapes do not match the code and frame length")
    if len(synd.aux_x) != steps:
        raise ValueError("syndrome length does not match the frame")

    S = 4**m
    if initial is None:
        initial = np.zeros(S)
        initial[0] = 1.0
    if final is None:
        final = np.full(S, 1.0 / S)
    offM, offP = tr.offsets(synd, code)
    pl = joint_prior(priors_L, k) if k else np.ones((steps, 1))
    pp = joint_prior(priors_P, n)

    mu, lam, nb, pb = tr.mu, tr.lam, tr.next_base, tr.phys_base
    offM, offP = offM.astype(np.int64), offP.astype(np.int64)
    alpha, beta, fail, stage = _forward_backward(
        np.asarray(initial, float), np.asarray(final, float), mu, lam, nb, pb, offM, offP, pl, pp
    )
    if fail >= 0:
        raise DecodeFailure(int(fail), ("forward", "backward")[stage])
    pl_ex = excluded_priors(priors_L, k) if k else np.ones((steps, 0, 1))
    pp_ex = excluded_priors(priors_P, n)
    post_l, ext_l, post_p, ext_p = _soft_outputs(alpha, beta, mu, lam, nb, pb, offM, offP, pl, pp, pl_ex, pp_ex)
    if not np.all(post_l.sum(axis=-1) > 0) or not np.all(post_p.sum(axis=-1) > 0):
        raise DecodeFailure(int(np.argmin(post_p.sum(axis=-1).min(axis=-1))), "posterior")
    return SisoOutput(
        normalize(post_l).reshape(-1, 4),
        normalize(ext_l).reshape(-1, 4),
        normalize(post_p).reshape(-1, 4),
        normalize(ext_p).reshape(-1, 4),
    )


def hard_decision(post):
    """Per-qubit argmax; exact ties go to the first of I, X, Z, Y."""
    return np.argmax(np.asarray(post), axis=1).astype(np.uint8)
