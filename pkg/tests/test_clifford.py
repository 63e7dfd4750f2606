import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qturbo import gf2
from qturbo.clifford import (
    ALL_CONVENTIONS, CNOT, SEED_CONVENTION, H, S, SeedDataError, SeedFileError, SeedTransformation,
    build_block_encoder, conjugate_gate, decode_seed_integers, find_conventions,
    integers_to_matrix, inverse_encode_block, matrix_to_integers, parse_seed_text,
    program_matrix, random_clifford_walk, seed_step, seed_step_inverse,
)
from qturbo.pauli import DimensionError, PauliString, concat, pauli_to_binary, symplectic_product
from qturbo.qircc import SUBCODES

ROWS = [14, 12, 10, 12, 14, 10, 8, 6, 8, 10]


def P(s):
    return pauli_to_binary(s)


def test_gate_actions():
    assert conjugate_gate(P("X"), H(0)) == P("Z")
    assert conjugate_gate(P("Z"), S(0)) == P("Z")
    assert conjugate_gate(P("X"), S(0)) == P("Y")
    assert conjugate_gate(P("XI"), CNOT(0, 1)) == P("XX")
    assert conjugate_gate(P("IZ"), CNOT(0, 1)) == P("ZZ")
    with pytest.raises(ValueError):
        conjugate_gate(P("XI"), CNOT(0, 0))
    with pytest.raises(IndexError):
        conjugate_gate(P("XI"), H(2))


programs = st.lists(
    st.one_of(
        st.builds(H, st.integers(0, 3)),
        st.builds(S, st.integers(0, 3)),
        st.tuples(st.integers(0, 3), st.integers(0, 3)).filter(lambda t: t[0] != t[1]).map(lambda t: CNOT(*t)),
    ),
    max_size=15,
)


@given(programs, st.text("IXYZ", min_size=4, max_size=4), st.text("IXYZ", min_size=4, max_size=4))
def test_conjugation_preserves_commutation(prog, a, b):
    a, b = P(a), P(b)
    ca, cb = a, b
    for g in prog:
        ca, cb = conjugate_gate(ca, g), conjugate_gate(cb, g)
    assert symplectic_product(a, b) == symplectic_product(ca, cb)
    # the matrix form agrees with gate-by-gate conjugation
    assert PauliString.from_bits(gf2.matmul(a.bits()[None], program_matrix(prog, 4))[0]) == ca


def test_random_walk():
    for seed in range(100):
        assert gf2.is_symplectic(random_clifford_walk(4, 30, seed))
    assert np.array_equal(random_clifford_walk(5, 40, 7), random_clifford_walk(5, 40, 7))
    assert np.array_equal(random_clifford_walk(3, 0, 1), np.eye(6, dtype=np.uint8))


def test_three_qubit_encoder():
    v = build_block_encoder([CNOT(0, 1), CNOT(0, 2)], 3, 1)
    expected = np.array(
        [[1, 0, 0, 0, 0, 0], [1, 1, 0, 0, 0, 0], [1, 0, 1, 0, 0, 0],
         [0, 0, 0, 1, 1, 1], [0, 0, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1]], dtype=np.uint8)
    assert np.array_equal(v.V, expected)
    assert [str(g) for g in v.stabilizers] == ["ZZI", "ZIZ"]
    assert [str(t) for t in v.pure_errors] == ["IXI", "IIX"]
    assert str(v.logical_x[0]) == "XXX"
    assert np.array_equal(build_block_encoder([], 3, 1).V, np.eye(6, dtype=np.uint8))


@settings(max_examples=50)
@given(programs)
def test_block_encoder_invariants(prog):
    v = build_block_encoder(prog, 4, 2)
    g, t = v.stabilizers, v.pure_errors
    for i, gi in enumerate(g):
        for j, gj in enumerate(g):
            assert symplectic_product(gi, gj) == 0
            assert symplectic_product(t[i], gj) == (i == j)
        for lz, lx in zip(v.logical_z, v.logical_x):
            assert symplectic_product(lz, gi) == symplectic_product(lx, gi) == 0


def test_inverse_encode_block():
    v = build_block_encoder([CNOT(0, 1), CNOT(0, 2)], 3, 1)
    L, Sx = inverse_encode_block(v, P("III"))
    assert str(L) == "I" and str(Sx) == "II"
    table = {"XII": [1, 1], "IXI": [1, 0], "IIX": [0, 1]}
    for err, s in table.items():
        _, aux = inverse_encode_block(v, P(err))
        assert list(aux.bits()[2:]) == s  # x part of S
    e = P("XIY")
    L1, S1 = inverse_encode_block(v, e)
    L2, S2 = inverse_encode_block(v, e * P("ZZI"))
    assert L1 == L2 and S1.x == S2.x and S1.z != S2.z


def test_seed_lists_decode():
    for (name, n, k, m, ints), rows in zip(SUBCODES, ROWS):
        u = decode_seed_integers(ints, n, k, m, name=name)
        assert u.U.shape == (rows, rows)
        assert gf2.rank(u.U) == rows
        assert gf2.is_symplectic(u.U)
        assert u.integers() == list(ints)


def test_seed_convention_frozen():
    good = find_conventions([s[4] for s in SUBCODES])
    assert SEED_CONVENTION in good
    # interleaved layouts never validate; MSB/LSB and zx/xz cannot be told apart
    assert all(c.layout != "interleaved" for c in good)
    assert len(good) == 4
    assert len(ALL_CONVENTIONS) == 6


def test_seed_decode_errors():
    with pytest.raises(DimensionError):
        decode_seed_integers([37, 55, 58, 35, 57], 2, 1, 1)
    with pytest.raises(SeedDataError):
        decode_seed_integers([1, 1, 1, 1, 1, 1], 2, 1, 1)
    with pytest.raises(SeedDataError):
        decode_seed_integers([64, 55, 58, 35, 57, 54], 2, 1, 1)


def test_seed_text(u8):
    text = u8.to_text()
    assert text.splitlines()[0] == "2 1 1 0"
    assert np.array_equal(parse_seed_text("# U8\n" + text).U, u8.U)
    with pytest.raises(SeedFileError, match="line 3"):
        parse_seed_text(text.replace("55", "5x"))
    with pytest.raises(SeedFileError, match="header"):
        parse_seed_text("2 1\n1\n")


def test_seed_step(u8, rng):
    zero = seed_step(u8, PauliString(1), PauliString(1), PauliString(1))
    assert zero == (PauliString(1), PauliString(2))
    for _ in range(50):
        mem, log, aux = (PauliString.from_symbols(rng.integers(0, 4, w)) for w in (1, 1, 1))
        nxt, out = seed_step(u8, mem, log, aux)
        # direct bit-matrix oracle
        vec = concat(mem, log, aux).bits()
        assert concat(nxt, out).bits().tolist() == (vec @ u8.U % 2).tolist()
        assert seed_step_inverse(u8, nxt, out) == (mem, log, aux, PauliString(0))
        m2, l2, a2 = (PauliString.from_symbols(rng.integers(0, 4, 1)) for _ in range(3))
        n2, o2 = seed_step(u8, m2, l2, a2)
        n3, o3 = seed_step(u8, mem * m2, log * l2, aux * a2)
        assert (n3, o3) == (nxt * n2, out * o2)
    with pytest.raises(DimensionError):
        seed_step(u8, PauliString(2), PauliString(1), PauliString(1))


def test_seed_transformation_checks(u8):
    assert u8.U_M.shape == (6, 2) and u8.U_P.shape == (6, 4)
    assert np.array_equal(gf2.matmul(u8.U, u8.inverse), np.eye(6, dtype=np.uint8))
    with pytest.raises(SeedDataError):
        SeedTransformation(2, 1, 1, 0, np.ones((6, 6), dtype=np.uint8))
    with pytest.raises(ValueError):
        SeedTransformation(2, 1, 1, 2, u8.U)


def test_matrix_integer_round_trip():
    for conv in ALL_CONVENTIONS:
        mat = random_clifford_walk(3, 20, 3)
        assert np.array_equal(integers_to_matrix(matrix_to_integers(mat, conv), conv), mat)
