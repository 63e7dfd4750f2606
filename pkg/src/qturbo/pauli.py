"""Phase-free Pauli operators in binary symplectic form.

A single-qubit Pauli maps to a (z, x) bit pair: I=(0,0), X=(0,1), Y=(1,1),
Z=(1,0). An n-qubit string keeps its z and x bits packed in two Python
integers with qubit 0 at the least significant position, so products are
XORs and commutation is the parity of a popcount.

Bulk data (frames of errors, soft information) uses a per-qubit symbol
index ``x + 2*z`` instead, i.e. the ordering (I, X, Z, Y). Symbol indices
compose under XOR just like the bit pairs.
"""

from dataclasses import dataclass

import numpy as np

SYMBOLS = "IXZY"
_SYMBOL_INDEX = {s: i for i, s in enumerate(SYMBOLS)}


class DimensionError(ValueError):
    """Operands act on different numbers of qubits."""


@dataclass(frozen=True)
class PauliString:
    n: int
    z: int = 0
    x: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("qubit count must be non-negative")
        mask = (1 << self.n) - 1
        if self.z & ~mask or self.x & ~mask or self.z < 0 or self.x < 0:
            raise ValueError(f"bit pattern does not fit in {self.n} qubits")

    @classmethod
    def identity(cls, n):
        return cls(n)

    @classmethod
    def from_str(cls, text):
        return pauli_to_binary(text)

    @classmethod
    def from_bits(cls, bits):
        """Build from a length-2n (z|x) bit vector."""
        bits = np.asarray(bits, dtype=np.uint8).ravel()
        if bits.size % 2:
            raise DimensionError("binary form must have even length")
        n = bits.size // 2
        return cls(n, _pack(bits[:n]), _pack(bits[n:]))

    @classmethod
    def from_symbols(cls, symbols):
        """Build from an array of symbol indices (0=I, 1=X, 2=Z, 3=Y)."""
        s = np.asarray(symbols, dtype=np.uint8).ravel()
        return cls(s.size, _pack((s >> 1) & 1), _pack(s & 1))

    def bits(self):
        """Length-2n uint8 vector laid out as (z | x)."""
        return np.concatenate([_unpack(self.z, self.n), _unpack(self.x, self.n)])

    def symbols(self):
        return (_unpack(self.x, self.n) | (_unpack(self.z, self.n) << 1)).astype(np.uint8)

    def weight(self):
        return (self.z | self.x).bit_count()

    def hex(self):
        """Debug dump "(z|x)" of both words in hex, qubit 0 in the lowest bit."""
        return f"({self.z:x}|{self.x:x})"

    def __mul__(self, other):
        return multiply(self, other)

    def __str__(self):
        return "".join(binary_to_pauli(self))

    def __len__(self):
        return self.n


def _pack(bits):
    out = 0
    for i in np.nonzero(np.asarray(bits))[0]:
        out |= 1 << int(i)
    return out


def _unpack(word, n):
    return np.array([(word >> i) & 1 for i in range(n)], dtype=np.uint8)


def pauli_to_binary(symbols):
    """Map a sequence over {I, X, Y, Z} to its :class:`PauliString`."""
    symbols = list(symbols)
    if not symbols:
        raise ValueError("empty Pauli symbol sequence")
    z = x = 0
    for i, s in enumerate(symbols):
        try:
            idx = _SYMBOL_INDEX[s.upper()]
        except (KeyError, AttributeError):
            raise ValueError(f"not a Pauli symbol: {s!r}") from None
        x |= (idx & 1) << i
        z |= ((idx >> 1) & 1) << i
    return PauliString(len(symbols), z, x)


def binary_to_pauli(p):
    return [SYMBOLS[((p.x >> i) & 1) | (((p.z >> i) & 1) << 1)] for i in range(p.n)]


def _check(a, b):
    if a.n != b.n:
        raise DimensionError(f"qubit counts differ: {a.n} vs {b.n}")


def symplectic_product(a, b):
    """0 if ``a`` and ``b`` commute, 1 if they anti-commute."""
    _check(a, b)
    return ((a.z & b.x) ^ (a.x & b.z)).bit_count() & 1


def multiply(a, b):
    """Product in the effective Pauli group (phase dropped)."""
    _check(a, b)
    return PauliString(a.n, a.z ^ b.z, a.x ^ b.x)


def concat(*parts):
    """Tensor product, first argument on the lowest qubit indices."""
    n = z = x = 0
    for p in parts:
        z |= p.z << n
        x |= p.x << n
        n += p.n
    return PauliString(n, z, x)


def split(p, widths):
    out = []
    offset = 0
    for w in widths:
        mask = (1 << w) - 1
        out.append(PauliString(w, (p.z >> offset) & mask, (p.x >> offset) & mask))
        offset += w
    if offset != p.n:
        raise DimensionError(f"widths sum to {offset}, operator has {p.n} qubits")
    return out


def symbols_to_index(symbols):
    """Pack a row of symbol indices into one integer, qubit j at bits 2j, 2j+1."""
    out = 0
    for j, s in enumerate(np.asarray(symbols).ravel()):
        out |= int(s) << (2 * j)
    return out


def index_to_symbols(index, width):
    return np.array([(index >> (2 * j)) & 3 for j in range(width)], dtype=np.uint8)
