"""Exhaustive reference decoders built from dense GF(2) matrix products."""

import itertools

import numpy as np

from qturbo import gf2


def _to_bits(sym):
    """(..., q) symbols -> (..., 2q) bits in (z | x) layout."""
    sym = np.asarray(sym, dtype=np.int64)
    return np.concatenate([(sym >> 1) & 1, sym & 1], axis=-1)


def _from_bits(bits, q):
    return (bits[..., q:] | (bits[..., :q] << 1)).astype(np.int64)


def all_patterns(length):
    return np.array(list(itertools.product(range(4), repeat=length)), dtype=np.int64).reshape(-1, length)


def physical_oracle(seed, steps, prior_P, prior_L, aux_x, ebits, memory_x):
    """Posteriors on L and P by summing over every physical error frame.

    Each frame is inverse-encoded backwards with U^-1 from an identity final
    memory; frames whose observable syndrome differs are dropped.
    """
    n, k, m, a = seed.n, seed.k, seed.m, seed.a
    w = n + m
    Uinv = gf2.inverse(seed.U).astype(np.int64)
    pats = all_patterns(n * steps)
    B = len(pats)
    phys = pats.reshape(B, steps, n)
    mem = np.zeros((B, m), dtype=np.int64)
    L = np.zeros((B, steps, k), dtype=np.int64)
    keep = np.ones(B, dtype=bool)
    for t in range(steps - 1, -1, -1):
        vec = _to_bits(np.concatenate([mem, phys[:, t]], axis=1))
        out = _from_bits(vec @ Uinv % 2, w)
        mem = out[:, :m]
        L[:, t] = out[:, m:m + k]
        s = out[:, m + k:m + k + a]
        e = out[:, m + k + a:]
        keep &= np.all((s & 1) == aux_x[t], axis=1) & np.all(e == ebits[t], axis=1)
    keep &= np.all((mem & 1) == memory_x, axis=1)

    flatL = L.reshape(B, steps * k)
    wgt = np.prod(prior_P[np.arange(n * steps), pats], axis=1) * np.prod(prior_L[np.arange(k * steps), flatL], axis=1)
    wgt = np.where(keep, wgt, 0.0)
    post_L = np.zeros((steps * k, 4))
    post_P = np.zeros((steps * n, 4))
    for j in range(steps * k):
        np.add.at(post_L[j], flatL[:, j], wgt)
    for j in range(steps * n):
        np.add.at(post_P[j], pats[:, j], wgt)
    return post_L / post_L.sum(1, keepdims=True), post_P / post_P.sum(1, keepdims=True)


def input_oracle(seed, steps, prior_P, prior_L, aux_x, ebits):
    """Posteriors with memory starting at identity and an unconstrained end.

    Enumerates logical errors and the free z parts of the auxiliary inputs and
    pushes each through U step by step.
    """
    n, k, m, a = seed.n, seed.k, seed.m, seed.a
    U = seed.U.astype(np.int64)
    w = n + m
    post_L = np.zeros((steps * k, 4))
    post_P = np.zeros((steps * n, 4))
    for lam in itertools.product(range(4), repeat=k * steps):
        lam = np.array(lam, dtype=np.int64).reshape(steps, k)
        for sz in itertools.product(range(2), repeat=a * steps):
            sz = np.array(sz, dtype=np.int64).reshape(steps, a)
            mem = np.zeros(m, dtype=np.int64)
            phys = []
            for t in range(steps):
                aux = aux_x[t] | (sz[t] << 1)
                vec = _to_bits(np.concatenate([mem, lam[t], aux, ebits[t]]))
                out = _from_bits(vec @ U % 2, w)
                mem, p = out[:m], out[m:]
                phys.append(p)
            phys = np.concatenate(phys)
            flat = lam.ravel()
            wgt = np.prod(prior_P[np.arange(len(phys)), phys]) * np.prod(prior_L[np.arange(len(flat)), flat])
            post_L[np.arange(len(flat)), flat] += wgt
            post_P[np.arange(len(phys)), phys] += wgt
    return post_L / post_L.sum(1, keepdims=True), post_P / post_P.sum(1, keepdims=True)


def stabilizer_frames(code, window=None):
    """Nonzero physical frames made of z-only auxiliary and initial-memory inputs
    (optionally restricted to the first ``window`` steps) that leave the final memory clean.
    """
    s = code.seed
    steps = code.steps if window is None else window
    free = s.a * steps + s.m
    found = []
    for bits in range(1, 2**free):
        aux = np.zeros(s.a * code.steps, np.uint8)
        for i in range(s.a * steps):
            aux[i] = ((bits >> i) & 1) << 1
        mem = np.array([((bits >> (s.a * steps + j)) & 1) << 1 for j in range(s.m)], dtype=np.uint8)
        phys, final = code.encode(
            np.zeros(code.n_logical, np.uint8), aux, np.zeros(s.c * code.steps, np.uint8), mem
        )
        if not final.any():
            found.append(phys)
    return found
