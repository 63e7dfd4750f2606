"""Parity-check-matrix view of stabilizer codes."""

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import gf2
from .pauli import DimensionError, PauliString, pauli_to_binary, symplectic_product


class ConstructionError(ValueError):
    pass


@dataclass(frozen=True)
class SymplecticVerdict:
    """Outcome of :func:`validate_symplectic`.

    ``pair`` holds the first anti-commuting row pair, ``dependent_row`` the
    first row that is a product of earlier ones.
    """

    ok: bool
    pair: tuple = None
    dependent_row: int = None

    def __bool__(self):
        return self.ok


def _as_rows(rows):
    return [pauli_to_binary(r) if isinstance(r, str) else r for r in rows]


def validate_symplectic(rows):
    rows = _as_rows(rows)
    if len({r.n for r in rows}) > 1:
        raise DimensionError("rows act on different qubit counts")
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            if symplectic_product(rows[i], rows[j]):
                return SymplecticVerdict(False, pair=(i, j))
    if rows:
        dep = gf2.first_dependent_row(np.array([r.bits() for r in rows]))
        if dep is not None:
            return SymplecticVerdict(False, dependent_row=dep)
    return SymplecticVerdict(True)


@dataclass(frozen=True)
class StabilizerPcm:
    """An [n, k] stabilizer code given by its n-k generator rows."""

    n: int
    k: int
    rows: tuple

    def __post_init__(self):
        rows = tuple(_as_rows(self.rows))
        object.__setattr__(self, "rows", rows)
        if len(rows) != self.n - self.k:
            raise ConstructionError(f"expected {self.n - self.k} rows, got {len(rows)}")
        if any(r.n != self.n for r in rows):
            raise DimensionError("row width differs from n")
        verdict = validate_symplectic(rows)
        if not verdict:
            raise ConstructionError(f"rows fail the symplectic criterion: {verdict}")

    @classmethod
    def from_rows(cls, rows):
        rows = _as_rows(rows)
        n = rows[0].n
        return cls(n, n - len(rows), tuple(rows))

    @classmethod
    def from_matrix(cls, h):
        h = gf2.as_bits(h)
        return cls.from_rows([PauliString.from_bits(r) for r in h])

    @property
    def matrix(self):
        """The (n-k) x 2n matrix (H_z | H_x)."""
        return np.array([r.bits() for r in self.rows], dtype=np.uint8).reshape(len(self.rows), 2 * self.n)

    @property
    def hz(self):
        return self.matrix[:, : self.n]

    @property
    def hx(self):
        return self.matrix[:, self.n :]

    def to_text(self):
        lines = []
        for r in self.matrix:
            lines.append("".join(map(str, r[: self.n])) + "|" + "".join(map(str, r[self.n :])))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            try:
                zs, xs = line.split("|")
                if len(zs) != len(xs) or set(zs + xs) - {"0", "1"}:
                    raise ValueError
            except ValueError:
                raise ValueError(f"line {lineno}: expected 'z-bits|x-bits', got {line!r}") from None
            rows.append(PauliString.from_bits([int(c) for c in zs + xs]))
        return cls.from_rows(rows)


@dataclass(frozen=True)
class ClassicalCode:
    n: int
    k: int
    generator: np.ndarray
    pcm: np.ndarray

    def __post_init__(self):
        g = gf2.as_bits(self.generator).reshape(self.k, self.n)
        h = gf2.as_bits(self.pcm).reshape(self.n - self.k, self.n)
        if gf2.matmul(g, h.T).any():
            raise ConstructionError("G H^T != 0")
        object.__setattr__(self, "generator", g)
        object.__setattr__(self, "pcm", h)

    @classmethod
    def systematic(cls, parity):
        """Code with G = (I_k | P) and H = (P^T | I_{n-k})."""
        p = gf2.as_bits(parity)
        k, r = p.shape
        g = np.hstack([np.eye(k, dtype=np.uint8), p])
        h = np.hstack([p.T, np.eye(r, dtype=np.uint8)])
        return cls(k + r, k, g, h)

    def encode(self, info):
        return gf2.matmul(np.atleast_2d(info), self.generator)[0]

    def syndrome(self, word):
        return gf2.matmul(np.atleast_2d(word), self.pcm.T)[0]


def css_from_classical(hz_prime, hx_prime):
    """Stack H_z' and H_x' into the CSS form ((H_z' | 0), (0 | H_x'))."""
    hz = gf2.as_bits(np.atleast_2d(hz_prime))
    hx = gf2.as_bits(np.atleast_2d(hx_prime))
    if hz.shape[1] != hx.shape[1]:
        raise DimensionError("H_z' and H_x' have different column counts")
    clash = gf2.matmul(hz, hx.T)
    if clash.any():
        i, j = map(int, np.argwhere(clash)[0])
        raise ConstructionError(f"H_z' row {i} and H_x' row {j} overlap oddly")
    n = hz.shape[1]
    rows = [PauliString.from_bits(np.concatenate([r, np.zeros(n, np.uint8)])) for r in hz]
    rows += [PauliString.from_bits(np.concatenate([np.zeros(n, np.uint8), r])) for r in hx]
    return StabilizerPcm.from_rows(rows)


def block_syndrome(code, err):
    if err.n != code.n:
        raise DimensionError(f"error acts on {err.n} qubits, code has {code.n}")
    return np.array([symplectic_product(r, err) for r in code.rows], dtype=np.uint8)


def classical_rate(n, k):
    """Rate (1 + k/n)/2 of the equivalent classical code."""
    if n <= 0 or not 0 <= k <= n:
        raise ValueError("need n > 0 and 0 <= k <= n")
    return (1 + Fraction(k, n)) / 2


# Worked examples used across tests and docs.
REPETITION_PCM = np.array([[1, 1, 0], [1, 0, 1]], dtype=np.uint8)
HAMMING_PCM = np.array(
    [[1, 1, 0, 1, 1, 0, 0], [1, 0, 1, 1, 0, 1, 0], [0, 1, 1, 1, 0, 0, 1]], dtype=np.uint8
)
SHOR_HZ = np.array(
    [
        [1, 1, 0, 0, 0, 0, 0, 0, 0],
        [0, 1, 1, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 1, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 1, 1, 0],
        [0, 0, 0, 0, 0, 0, 0, 1, 1],
    ],
    dtype=np.uint8,
)
SHOR_HX = np.array([[1, 1, 1, 1, 1, 1, 0, 0, 0], [0, 0, 0, 1, 1, 1, 1, 1, 1]], dtype=np.uint8)
