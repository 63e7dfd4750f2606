"""Clifford encoders in binary symplectic form.

Matrices act on row vectors: an operator with (z|x) bits ``v`` is mapped to
``v @ U``. Row ``i`` of an encoding matrix is therefore the image of the
i-th unencoded basis operator (Z_1..Z_w first, then X_1..X_w).
"""

from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import gf2
from .codes import StabilizerPcm
from .pauli import DimensionError, PauliString, concat, split


class SeedDataError(ValueError):
    """Integer rows do not describe a symplectic seed transformation."""


class SeedFileError(ValueError):
    pass


class Gate(NamedTuple):
    name: str
    a: int
    b: int = -1

    def __str__(self):
        return f"{self.name}({self.a})" if self.b < 0 else f"{self.name}({self.a},{self.b})"


def H(i):
    return Gate("H", i)


def S(i):
    return Gate("S", i)


def CNOT(control, target):
    return Gate("CNOT", control, target)


def _check_gate(gate, n):
    qubits = [gate.a] if gate.name in ("H", "S") else [gate.a, gate.b]
    if gate.name not in ("H", "S", "CNOT"):
        raise ValueError(f"unknown gate {gate.name!r}")
    if any(not 0 <= q < n for q in qubits):
        raise IndexError(f"{gate} acts outside {n} qubits")
    if gate.name == "CNOT" and gate.a == gate.b:
        raise ValueError("CNOT control and target coincide")


def conjugate_gate(p, gate):
    """Image of ``p`` under conjugation by one H, S or CNOT gate."""
    _check_gate(gate, p.n)
    z, x = p.z, p.x
    i = gate.a
    if gate.name == "H":
        zi, xi = (z >> i) & 1, (x >> i) & 1
        z ^= (zi ^ xi) << i
        x ^= (zi ^ xi) << i
    elif gate.name == "S":
        z ^= ((x >> i) & 1) << i
    else:
        j = gate.b
        x ^= ((x >> i) & 1) << j
        z ^= ((z >> j) & 1) << i
    return PauliString(p.n, z, x)


def apply_gate(matrix, gate):
    """Conjugate every row of a (z|x) matrix by ``gate``, in place."""
    n = matrix.shape[1] // 2
    _check_gate(gate, n)
    i = gate.a
    if gate.name == "H":
        matrix[:, [i, n + i]] = matrix[:, [n + i, i]]
    elif gate.name == "S":
        matrix[:, i] ^= matrix[:, n + i]
    else:
        j = gate.b
        matrix[:, n + j] ^= matrix[:, n + i]
        matrix[:, i] ^= matrix[:, j]
    return matrix


def program_matrix(program, n):
    mat = np.eye(2 * n, dtype=np.uint8)
    for gate in program:
        apply_gate(mat, gate)
    return mat


def random_clifford_walk(width, steps, seed):
    """Symplectic matrix of ``steps`` uniformly drawn H/S/CNOT gates."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    rng = np.random.default_rng(seed)
    mat = np.eye(2 * width, dtype=np.uint8)
    kinds = ("H", "S", "CNOT") if width > 1 else ("H", "S")
    for _ in range(steps):
        kind = kinds[rng.integers(len(kinds))]
        if kind == "CNOT":
            a, b = rng.choice(width, size=2, replace=False)
            gate = CNOT(int(a), int(b))
        else:
            gate = Gate(kind, int(rng.integers(width)))
        apply_gate(mat, gate)
    return mat


# --- block encoders -----------------------------------------------------------


@dataclass(frozen=True, eq=False)
class BlockEncoder:
    """Encoding matrix V with rows (Z_1..Z_k, g_1..g_{n-k}, X_1..X_k, t_1..t_{n-k})."""

    n: int
    k: int
    V: np.ndarray

    def __post_init__(self):
        if self.V.shape != (2 * self.n, 2 * self.n):
            raise DimensionError(f"V must be {2 * self.n}x{2 * self.n}")
        if not gf2.is_symplectic(self.V):
            raise ValueError("V is not symplectic")

    def _row(self, i):
        return PauliString.from_bits(self.V[i])

    @property
    def logical_z(self):
        return [self._row(i) for i in range(self.k)]

    @property
    def stabilizers(self):
        return [self._row(i) for i in range(self.k, self.n)]

    @property
    def logical_x(self):
        return [self._row(self.n + i) for i in range(self.k)]

    @property
    def pure_errors(self):
        return [self._row(self.n + i) for i in range(self.k, self.n)]

    @property
    def pcm(self):
        return StabilizerPcm(self.n, self.k, tuple(self.stabilizers))

    @cached_property
    def inverse(self):
        return gf2.inverse(self.V)


def build_block_encoder(program, n, k):
    return BlockEncoder(n, k, program_matrix(program, n))


def inverse_encode_block(v, err):
    """Split a physical error into (logical error L, auxiliary error S)."""
    if err.n != v.n:
        raise DimensionError(f"error acts on {err.n} qubits, encoder on {v.n}")
    coords = PauliString.from_bits(gf2.matmul(err.bits()[None, :], v.inverse)[0])
    logical, synd = split(coords, [v.k, v.n - v.k])
    return logical, synd


# --- convolutional seed transformations ----------------------------------------


class SeedConvention(NamedTuple):
    """How an integer encodes one row of U.

    ``msb_first``: the most significant of the 2(n+m) bits is column 0.
    ``layout``: "zx" (all z bits then all x bits), "xz", or "interleaved"
    (z_0 x_0 z_1 x_1 ...).
    """

    msb_first: bool
    layout: str


ALL_CONVENTIONS = tuple(
    SeedConvention(msb, layout) for msb in (True, False) for layout in ("zx", "xz", "interleaved")
)
# Frozen after searching ALL_CONVENTIONS against the ten QIRCC subcode lists.
SEED_CONVENTION = SeedConvention(msb_first=True, layout="zx")


def _layout_perm(w, layout):
    """perm[j] = (z|x) column holding raw column j."""
    if layout == "zx":
        return np.arange(2 * w)
    if layout == "xz":
        return np.concatenate([np.arange(w, 2 * w), np.arange(w)])
    if layout == "interleaved":
        perm = np.empty(2 * w, dtype=int)
        perm[0::2] = np.arange(w)
        perm[1::2] = np.arange(w, 2 * w)
        return perm
    raise ValueError(f"unknown layout {layout!r}")


def integers_to_matrix(values, convention):
    dim = len(values)
    raw = np.zeros((dim, dim), dtype=np.uint8)
    for i, v in enumerate(values):
        v = int(v)
        if not 0 <= v < 1 << dim:
            raise SeedDataError(f"row value {v} does not fit in {dim} bits")
        for j in range(dim):
            shift = dim - 1 - j if convention.msb_first else j
            raw[i, j] = (v >> shift) & 1
    perm = _layout_perm(dim // 2, convention.layout)
    mat = np.zeros_like(raw)
    mat[np.ix_(perm, perm)] = raw
    return mat


def matrix_to_integers(mat, convention=SEED_CONVENTION):
    dim = mat.shape[0]
    perm = _layout_perm(dim // 2, convention.layout)
    raw = mat[np.ix_(perm, perm)]
    out = []
    for row in raw:
        v = 0
        for j, b in enumerate(row):
            if b:
                v |= 1 << (dim - 1 - j if convention.msb_first else j)
        out.append(v)
    return out


def find_conventions(lists):
    """All conventions under which every integer list is symplectic."""
    good = []
    for conv in ALL_CONVENTIONS:
        try:
            if all(gf2.is_symplectic(integers_to_matrix(v, conv)) for v in lists):
                good.append(conv)
        except SeedDataError:
            continue
    return good


@dataclass(frozen=True, eq=False)
class SeedTransformation:
    """Seed U of an [n, k, m] convolutional stabilizer code with c ebits per step.

    Input qubits of U are ordered (memory m, logical k, auxiliary a, ebit c),
    output qubits (memory m, physical n), both in the global (z|x) layout.
    """

    n: int
    k: int
    m: int
    c: int
    U: np.ndarray = field(repr=False)
    name: str = ""

    def __post_init__(self):
        w = self.n + self.m
        if self.U.shape != (2 * w, 2 * w):
            raise DimensionError(f"U must be {2 * w}x{2 * w}, got {self.U.shape}")
        if not 0 <= self.k <= self.n or not 0 <= self.c <= self.n - self.k:
            raise ValueError(f"inconsistent parameters n={self.n} k={self.k} c={self.c}")
        if not gf2.is_symplectic(self.U):
            raise SeedDataError("U does not preserve the symplectic form")

    @property
    def a(self):
        return self.n - self.k - self.c

    @property
    def width(self):
        return self.n + self.m

    @property
    def rate(self):
        return self.k / self.n

    def _cols(self, qubits):
        w = self.width
        return np.concatenate([qubits, np.asarray(qubits) + w]).astype(int)

    @property
    def U_M(self):
        """Columns producing the next memory state, in memory's own (z|x) layout."""
        return self.U[:, self._cols(np.arange(self.m))]

    @property
    def U_P(self):
        return self.U[:, self._cols(np.arange(self.m, self.width))]

    @cached_property
    def inverse(self):
        return gf2.inverse(self.U)

    def integers(self, convention=SEED_CONVENTION):
        return matrix_to_integers(self.U, convention)

    def to_text(self):
        lines = [f"{self.n} {self.k} {self.m} {self.c}"]
        lines += [str(v) for v in self.integers()]
        return "\n".join(lines) + "\n"


def decode_seed_integers(values, n, k, m, c=0, convention=SEED_CONVENTION, name=""):
    values = [int(v) for v in values]
    if len(values) != 2 * (n + m):
        raise DimensionError(f"expected {2 * (n + m)} integers for n={n}, m={m}, got {len(values)}")
    mat = integers_to_matrix(values, convention)
    if not gf2.is_symplectic(mat):
        raise SeedDataError(f"rows are not symplectic under {convention}")
    return SeedTransformation(n, k, m, c, mat, name)


def read_seed_integers(text):
    """Seed file text -> ((n, k, m, c), integers) without validating U."""
    lines = [(i, ln.strip()) for i, ln in enumerate(text.splitlines(), 1)]
    lines = [(i, ln) for i, ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise SeedFileError("empty seed file")
    lineno, header = lines[0]
    try:
        n, k, m, c = (int(t) for t in header.split())
    except ValueError:
        raise SeedFileError(f"line {lineno}: header must be 'n k m c', got {header!r}") from None
    values = []
    for lineno, ln in lines[1:]:
        try:
            values.append(int(ln))
        except ValueError:
            raise SeedFileError(f"line {lineno}: not an integer: {ln!r}") from None
    if len(values) != 2 * (n + m):
        raise SeedFileError(f"expected {2 * (n + m)} rows after the header, found {len(values)}")
    return (n, k, m, c), values


def parse_seed_text(text, name=""):
    (n, k, m, c), values = read_seed_integers(text)
    return decode_seed_integers(values, n, k, m, c, name=name)


def load_seed(path):
    path = Path(path)
    return parse_seed_text(path.read_text(), name=path.stem)


def seed_step(u, mem, logical, synd, ebit=None):
    """One encoder step: (M_{j-1} : L_j : S_j : E_j) U = (M_j : P_j)."""
    ebit = ebit if ebit is not None else PauliString(u.c)
    widths = [(mem, u.m), (logical, u.k), (synd, u.a), (ebit, u.c)]
    for p, w in widths:
        if p.n != w:
            raise DimensionError(f"input of width {p.n} where {w} expected")
    bits = concat(mem, logical, synd, ebit).bits()
    out = PauliString.from_bits(gf2.matmul(bits[None, :], u.U)[0])
    mem_next, phys = split(out, [u.m, u.n])
    return mem_next, phys


def seed_step_inverse(u, mem_next, phys):
    """Undo :func:`seed_step`; returns (M_{j-1}, L_j, S_j, E_j)."""
    bits = concat(mem_next, phys).bits()
    out = PauliString.from_bits(gf2.matmul(bits[None, :], u.inverse)[0])
    return tuple(split(out, [u.m, u.k, u.a, u.c]))
