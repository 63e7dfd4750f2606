import numpy as np
import pytest

from qturbo.clifford import decode_seed_integers
from qturbo.convolutional import ConvolutionalCode, is_recursive, pack_groups, random_recursive_seed, unpack_groups
from qturbo.qircc import SUBCODES, subcode


def test_group_packing_round_trip(rng):
    sym = rng.integers(0, 4, 30).astype(np.uint8)
    for width in (1, 2, 3, 5):
        assert np.array_equal(unpack_groups(pack_groups(sym, width), width), sym)


@pytest.mark.parametrize("q", range(len(SUBCODES)))
def test_inverse_then_forward_is_identity(q, rng):
    code = ConvolutionalCode(subcode(q), 7)
    for _ in range(5):
        P = rng.integers(0, 4, code.n_physical).astype(np.uint8)
        fe = code.inverse_encode(P)
        phys, final = code.encode(fe.logical, fe.aux, fe.ebits, fe.memory)
        assert np.array_equal(phys, P)
        assert not final.any()


def test_encoding_is_linear(u8, rng):
    code = ConvolutionalCode(u8, 6)

    def draw():
        return [rng.integers(0, 4, s).astype(np.uint8) for s in (6, 6, 0, 1)]

    a, b = draw(), draw()
    pa, fa = code.encode(*a)
    pb, fb = code.encode(*b)
    pab, fab = code.encode(*[x ^ y for x, y in zip(a, b)])
    assert np.array_equal(pab, pa ^ pb) and np.array_equal(fab, fa ^ fb)


def test_syndrome_shapes(u8):
    code = ConvolutionalCode(u8, 4)
    _, s = code.split(np.zeros(8, dtype=np.uint8))
    assert s.aux_x.shape == (4, 1) and s.ebits.shape == (4, 0) and s.memory_x.shape == (1,)
    with pytest.raises(ValueError):
        code.inverse_encode(np.zeros(7, dtype=np.uint8))
    with pytest.raises(ValueError):
        ConvolutionalCode(u8, 0)


def test_boundaries(u8):
    code = ConvolutionalCode(u8, 2)
    _, s = code.split(np.zeros(4, dtype=np.uint8))
    alpha0 = code.initial_boundary(s)
    # x bit of the memory ancilla observed as 0: states I and Z remain
    assert np.allclose(alpha0, [0.5, 0, 0.5, 0])
    assert np.array_equal(code.final_boundary(), [1, 0, 0, 0])


def test_recursive_search():
    u = random_recursive_seed(3, 1, 3, 2, seed=0)
    assert (u.n, u.k, u.m, u.c, u.a) == (3, 1, 3, 2, 0)
    assert is_recursive(u)
    assert u.U.tobytes() == random_recursive_seed(3, 1, 3, 2, seed=0).U.tobytes()


def test_identity_seed_is_not_recursive():
    # identity U: the logical input goes straight out and never touches memory
    ident = decode_seed_integers([32, 16, 8, 4, 2, 1], 2, 1, 1)
    assert not is_recursive(ident)
