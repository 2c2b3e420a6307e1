"""The numba kernels and the pure-numpy fallbacks must agree exactly."""

import numpy as np
import pytest

from su4atlas import backend
from su4atlas.packed import field
from su4atlas.gates import parse_generators


def _random_packed(rng, fld, n, dim):
    coeffs = rng.integers(-3, 4, size=(n, dim, dim, fld.d)).astype(np.int64)
    dens = rng.integers(1, 5, size=n).astype(np.int64)
    from su4atlas.packed import canonicalize
    return canonicalize(coeffs, dens)


@pytest.mark.parametrize("conductor", [1, 4, 8, 12, 20, 40])
def test_matmul_backends_agree(conductor):
    fld = field(conductor)
    rng = np.random.default_rng(conductor)
    A, dA = _random_packed(rng, fld, 40, 4)
    B, dB = _random_packed(rng, fld, 40, 4)
    ref, dref = backend._np_matmul(A, dA, B, dB, fld.convred, True)
    from su4atlas.packed import canonicalize
    ref, dref = canonicalize(ref, dref)
    got, dgot = backend.matmul(A, dA, B, dB, fld, pairs=True)
    assert (ref == got).all() and (dref == dgot).all()
    one, done = backend.matmul(A, dA, B[0], dB[0], fld)
    ref1, dref1 = backend._np_matmul(A, dA, B[0], dB[0], fld.convred, False)
    ref1, dref1 = canonicalize(ref1, dref1)
    assert (one == ref1).all() and (done == dref1).all()


def test_matvec_backends_agree():
    fld = field(8)
    rng = np.random.default_rng(3)
    M, dM = _random_packed(rng, fld, 1, 4)
    V = rng.integers(-3, 4, size=(30, 4, fld.d)).astype(np.int64)
    dV = rng.integers(1, 4, size=30).astype(np.int64)
    from su4atlas.packed import canonicalize
    V, dV = canonicalize(V, dV)
    got, dgot = backend.matvec(M[0], dM[0], V, dV, fld)
    ref, dref = backend._np_matvec(M[0], dM[0], V, dV, fld.convred)
    ref, dref = canonicalize(ref, dref)
    assert (got == ref).all() and (dgot == dref).all()


def test_value_mul_backends_agree():
    fld = field(24)
    rng = np.random.default_rng(5)
    U = rng.integers(-4, 5, size=(100, fld.d)).astype(np.int64)
    V = rng.integers(-4, 5, size=(100, fld.d)).astype(np.int64)
    assert (backend.value_mul(U, V, fld) ==
            backend._np_value_mul(U, V, fld.convred)).all()


def test_table_close_backends_agree():
    # the quotient of <P2, CNOT> by its saturation is Z2; use a bigger toy:
    # multiplication table of Z12
    q = 12
    table = np.fromfunction(lambda a, b: (a + b) % q, (q, q)).astype(np.int16)
    got = backend.table_close(table, [8, 6], [0])
    ref = backend._np_table_close(table, np.array([8, 6]), np.array([0]), 1 << 30)
    assert sorted(got.tolist()) == sorted(ref.tolist()) == [0, 2, 4, 6, 8, 10]


def test_matmul_matches_generic_matrices():
    gens = parse_generators("⟨SH, HS, FF, SWAP⟩")
    conductor = 8
    fld = field(conductor)
    coe, den = fld.pack_matrices(gens)
    prod, dprod = backend.matmul(coe[:1], den[:1], coe[1], den[1], fld)
    expected = gens[0] * gens[1]
    assert fld.unpack_matrix(prod[0], dprod[0]) == expected


def test_backend_selection_env():
    assert backend.BACKEND in ("numba", "numpy")
