"""Frame-level view of a convolutional stabilizer code.

A frame is ``steps`` applications of the seed transformation. Every group
of qubits (memory, logical, auxiliary, ebit, physical) is addressed by an
integer index holding symbol ``x + 2z`` of its j-th qubit at bits 2j, 2j+1;
the seed then becomes XOR-linear lookup tables on those indices.

Boundary model used for whole frames: the initial memory qubits are
ancillas prepared in |0>, so the x part of their error is observed like a
syndrome and the z part is degenerate; the final memory state travels
noiselessly, so the trellis ends on the identity state.
"""

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .clifford import SeedTransformation

# sym index -> x bit, z bit
_X = np.array([0, 1, 0, 1], dtype=np.uint8)
_Z = np.array([0, 0, 1, 1], dtype=np.uint8)


def pack_groups(symbols, width):
    """(steps*width,) symbols -> (steps,) group indices."""
    symbols = np.asarray(symbols, dtype=np.int64).reshape(-1, width)
    shifts = 2 * np.arange(width, dtype=np.int64)
    return (symbols << shifts).sum(axis=1) if width else np.zeros(len(symbols), np.int64)


def unpack_groups(indices, width):
    indices = np.asarray(indices, dtype=np.int64)
    shifts = 2 * np.arange(width, dtype=np.int64)
    return ((indices[:, None] >> shifts) & 3).astype(np.uint8).reshape(-1)


def _basis_images(mat, w, in_qubits, out_groups):
    """Image indices of the 2g basis bits of an input group, per output group.

    Bit 2j of a group index is the x bit of its j-th qubit, bit 2j+1 the z bit.
    """
    images = []
    for j, q in enumerate(in_qubits):
        for row in (w + q, q):  # x bit first, then z bit
            r = mat[row]
            per_group = []
            for group in out_groups:
                idx = 0
                for jj, qq in enumerate(group):
                    idx |= int(r[w + qq]) << (2 * jj)
                    idx |= int(r[qq]) << (2 * jj + 1)
                per_group.append(idx)
            images.append(per_group)
    return images


def _linear_tables(mat, w, in_qubits, out_groups):
    """Lookup tables over all 4^g inputs of the group, one per output group."""
    tables = [np.zeros(1, dtype=np.int64) for _ in out_groups]
    for per_group in _basis_images(mat, w, in_qubits, out_groups):
        tables = [np.concatenate([t, t ^ img]) for t, img in zip(tables, per_group)]
    return tables


@dataclass(frozen=True)
class Syndrome:
    """Observed quantities of one frame.

    aux_x: (steps, a) x bits of the auxiliary-qubit errors.
    ebits: (steps, c) full error symbols on the transmitter's ebit halves.
    memory_x: (m,) x bits of the error left on the initial memory ancillas.
    """

    aux_x: np.ndarray
    ebits: np.ndarray
    memory_x: np.ndarray


@dataclass(frozen=True)
class FrameErrors:
    """Inverse-encoded components of a physical error frame (symbol arrays)."""

    logical: np.ndarray
    aux: np.ndarray
    ebits: np.ndarray
    memory: np.ndarray

    def syndrome(self, code):
        s = code.seed
        return Syndrome(
            aux_x=_X[self.aux].reshape(code.steps, s.a),
            ebits=self.ebits.reshape(code.steps, s.c).copy(),
            memory_x=_X[self.memory].copy(),
        )


class Trellis:
    """Transition tables of a seed transformation (shared, read-only)."""

    def __init__(self, seed):
        u = seed
        w = u.width
        m, k, a = u.m, u.k, u.a
        mem_in = list(range(m))
        log_in = list(range(m, m + k))
        aux_in = list(range(m + k, m + k + a))
        ebit_in = list(range(m + k + a, w))
        out_groups = [list(range(m)), list(range(m, w))]

        mu_M, mu_P = _linear_tables(u.U, w, mem_in, out_groups)
        lam_M, lam_P = _linear_tables(u.U, w, log_in, out_groups)
        self.aux_M, self.aux_P = _linear_tables(u.U, w, aux_in, out_groups)
        self.ebit_M, self.ebit_P = _linear_tables(u.U, w, ebit_in, out_groups)

        # free z parts of the auxiliary qubits: index bits 2j+1 only
        zfree = np.zeros(1, dtype=np.int64)
        for j in range(a):
            zfree = np.concatenate([zfree, zfree | (1 << (2 * j + 1))])

        mu, lam, sz = np.meshgrid(
            np.arange(4**m, dtype=np.int64), np.arange(4**k, dtype=np.int64), zfree, indexing="ij"
        )
        self.mu = mu.ravel()
        self.lam = lam.ravel()
        self.next_base = mu_M[self.mu] ^ lam_M[self.lam] ^ self.aux_M[sz.ravel()]
        self.phys_base = mu_P[self.mu] ^ lam_P[self.lam] ^ self.aux_P[sz.ravel()]
        self.n_states = 4**m

        # inverse direction: (M_t, P_t) -> (M_{t-1}, L_t, S_t, E_t)
        inv_groups = [mem_in, log_in, aux_in, ebit_in]
        self.inv_from_mem = _linear_tables(u.inverse, w, list(range(m)), inv_groups)
        self.inv_from_phys = _linear_tables(u.inverse, w, list(range(m, w)), inv_groups)
        # forward direction per group, for encoding frames
        self.fwd = {
            "memory": (mu_M, mu_P),
            "logical": (lam_M, lam_P),
            "aux": (self.aux_M, self.aux_P),
            "ebit": (self.ebit_M, self.ebit_P),
        }

    def offsets(self, synd, seed):
        """Per-step XOR offsets (next state, physical) from the observed inputs."""
        sx = pack_groups(synd.aux_x.reshape(-1), seed.a) if seed.a else np.zeros(len(synd.aux_x), np.int64)
        e = pack_groups(synd.ebits.reshape(-1), seed.c) if seed.c else np.zeros(len(synd.aux_x), np.int64)
        return self.aux_M[sx] ^ self.ebit_M[e], self.aux_P[sx] ^ self.ebit_P[e]


@dataclass(frozen=True, eq=False)
class ConvolutionalCode:
    """``steps`` trellis sections of one seed transformation."""

    seed: SeedTransformation
    steps: int

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("a frame needs at least one step")

    @property
    def n_physical(self):
        return self.seed.n * self.steps

    @property
    def n_logical(self):
        return self.seed.k * self.steps

    @property
    def rate(self):
        return self.seed.rate

    @cached_property
    def trellis(self):
        return Trellis(self.seed)

    def encode(self, logical, aux, ebits, memory):
        """Push input error symbols forward through the encoder.

        Returns (physical symbols, final memory symbols).
        """
        s, tr = self.seed, self.trellis
        lam = pack_groups(logical, s.k) if s.k else np.zeros(self.steps, np.int64)
        aux = pack_groups(aux, s.a) if s.a else np.zeros(self.steps, np.int64)
        e = pack_groups(ebits, s.c) if s.c else np.zeros(self.steps, np.int64)
        (muM, muP), (lM, lP), (aM, aP), (eM, eP) = (tr.fwd[g] for g in ("memory", "logical", "aux", "ebit"))
        state = int(pack_groups(memory, s.m)[0]) if s.m else 0
        phys = np.empty(self.steps, dtype=np.int64)
        for t in range(self.steps):
            phys[t] = muP[state] ^ lP[lam[t]] ^ aP[aux[t]] ^ eP[e[t]]
            state = muM[state] ^ lM[lam[t]] ^ aM[aux[t]] ^ eM[e[t]]
        final = unpack_groups(np.array([state]), s.m) if s.m else np.zeros(0, np.uint8)
        return unpack_groups(phys, s.n), final

    def inverse_encode(self, physical, final_memory=None):
        """Split a physical error frame into logical error and syndrome parts."""
        s, tr = self.seed, self.trellis
        phys = pack_groups(physical, s.n)
        if len(phys) != self.steps:
            raise ValueError(f"expected {self.n_physical} physical symbols")
        state = int(pack_groups(final_memory, s.m)[0]) if (s.m and final_memory is not None) else 0
        fm, fp = tr.inv_from_mem, tr.inv_from_phys
        out = np.zeros((4, self.steps), dtype=np.int64)
        for t in range(self.steps - 1, -1, -1):
            p = phys[t]
            out[1, t] = fm[1][state] ^ fp[1][p]
            out[2, t] = fm[2][state] ^ fp[2][p]
            out[3, t] = fm[3][state] ^ fp[3][p]
            state = fm[0][state] ^ fp[0][p]
        return FrameErrors(
            logical=unpack_groups(out[1], s.k),
            aux=unpack_groups(out[2], s.a),
            ebits=unpack_groups(out[3], s.c),
            memory=unpack_groups(np.array([state]), s.m) if s.m else np.zeros(0, np.uint8),
        )

    def syndrome_of(self, physical):
        return self.inverse_encode(physical).syndrome(self)

    def initial_boundary(self, synd):
        """alpha_0: memory ancillas with observed x bits, z bits free."""
        m = self.seed.m
        states = np.arange(4**m)
        xbits = pack_groups(np.asarray(synd.memory_x, dtype=np.int64), m) if m else np.zeros(1, np.int64)
        x_mask = sum(1 << (2 * j) for j in range(m))
        alpha0 = ((states & x_mask) == xbits[0]).astype(float)
        return alpha0 / alpha0.sum()

    def final_boundary(self):
        beta = np.zeros(4**self.seed.m)
        beta[0] = 1.0
        return beta

    def siso(self, prior_P, prior_L, synd):
        from .siso import siso_decode

        return siso_decode(
            self.seed, prior_P, prior_L, synd,
            initial=self.initial_boundary(synd), final=self.final_boundary(), trellis=self.trellis,
        )

    def split(self, physical):
        """Physical error frame -> (logical error symbols, Syndrome)."""
        fe = self.inverse_encode(physical)
        return fe.logical, fe.syndrome(self)


def is_recursive(seed, max_depth=None):
    """True if no weight-one logical input can steer the memory back to identity.

    After the weight-one input the logical stream is identity and the free
    z parts of the auxiliary inputs range over all values.
    """
    tr = Trellis(seed)
    if seed.k == 0:
        return False
    free_edges = tr.lam == 0
    succ = {}
    for mu, nxt in zip(tr.mu[free_edges], tr.next_base[free_edges]):
        succ.setdefault(int(mu), set()).add(int(nxt))
    weight_one = {s << (2 * j) for j in range(seed.k) for s in (1, 2, 3)}
    start = {int(nx) for mu, lam, nx in zip(tr.mu, tr.lam, tr.next_base) if mu == 0 and int(lam) in weight_one}
    if 0 in start:
        return False
    seen, frontier = set(start), list(start)
    while frontier:
        s = frontier.pop()
        for nx in succ.get(s, ()):
            if nx == 0:
                return False
            if nx not in seen:
                seen.add(nx)
                frontier.append(nx)
    return True


def random_recursive_seed(n, k, m, c=0, seed=0, attempts=1000, name=""):
    """Random symplectic seed transformation that passes ``is_recursive``."""
    from .clifford import SeedTransformation, random_clifford_walk

    width = n + m
    for attempt in range(attempts):
        U = random_clifford_walk(width, 20 * width * width, (seed, attempt))
        u = SeedTransformation(n, k, m, c, U, name=name)
        if is_recursive(u):
            return u
    raise RuntimeError(f"no recursive seed found in {attempts} attempts")
