import itertools
import random

import pytest

from su4atlas import gates as G
from su4atlas.cyclo import Cyclotomic, ONE, ZERO, I as IM
from su4atlas.linal import GateMatrix, LinalError, kron, permutation_matrix


def _leibniz_det(m):
    # independent oracle: full 24-term expansion with explicit sign table
    total = ZERO
    for perm in itertools.permutations(range(m.dim)):
        inversions = sum(1 for i in range(m.dim) for j in range(i + 1, m.dim)
                         if perm[i] > perm[j])
        term = ONE
        for i, p in enumerate(perm):
            term = term * m.entries[i][p]
        total = total + (term if inversions % 2 == 0 else -term)
    return total


def test_trace_of_traceless_factor():
    assert kron(G.X, G.I).trace() == ZERO


def test_bell_det_against_leibniz_oracle():
    assert _leibniz_det(G.BELL) == ONE
    assert G.BELL.det() == ONE


def test_bell_unitary_by_direct_multiplication():
    assert G.BELL.adjoint() * G.BELL == GateMatrix.identity(4)
    approx = [[abs(x) for x in row]
              for row in (G.BELL.adjoint() * G.BELL).approx()]
    assert all(abs(approx[i][j] - (1 if i == j else 0)) < 1e-12
               for i in range(4) for j in range(4))


def test_is_scalar():
    assert GateMatrix.identity(4).is_scalar() == ONE
    assert G.iII.is_scalar() == IM
    assert G.CNOT12.is_scalar() is None


def test_monomial_parts_dcnot():
    perm, diag = G.DCNOT.monomial_parts()
    assert perm == (0, 2, 3, 1)
    assert diag == GateMatrix.identity(4)


def test_monomial_parts_cz():
    from su4atlas.cyclo import root_of_unity
    perm, diag = G.CZ.monomial_parts()
    assert perm == (0, 1, 2, 3)
    w = root_of_unity(8).conj()  # CZ = zeta8^* diag(1,1,1,-1)
    assert [diag.entries[i][i] for i in range(4)] == [w, w, w, -w]


def test_monomial_parts_dense_matrix_is_none():
    assert G.BELL.monomial_parts() is None


def test_monomial_round_trip():
    rng = random.Random(5)
    mats = [G.DCNOT, G.CZ, G.SWAP, G.CNOT12, G.CNOT21, G.A, G.V1, G.iII]
    for m in mats:
        perm, diag = m.monomial_parts()
        assert permutation_matrix(perm) * diag == m


def test_tensor_factorizable():
    assert kron(G.S, G.H).tensor_factorizable()
    assert not G.CNOT12.tensor_factorizable()
    assert not G.SWAP.tensor_factorizable()


def test_tensor_factorizable_scalar_invariance():
    m = kron(G.S, G.H)
    assert m.scale(IM).tensor_factorizable()
    n = G.CNOT12.scale(-IM)
    assert not n.tensor_factorizable()


def test_kron_multiplicative():
    pairs = [(G.S, G.H), (G.F, G.Z), (G.X, G.S), (G.H, G.F)]
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        assert kron(a, b) * kron(c, d) == kron(a * c, b * d)


def test_det_and_trace_identities():
    a, b = G.BELL, G.CNOT12
    assert (a * b).det() == a.det() * b.det()
    assert (a * b).trace() == (b * a).trace()


def test_dimension_mismatch_raises():
    with pytest.raises(LinalError):
        G.S * G.BELL
    with pytest.raises(LinalError):
        kron(G.BELL, G.BELL)


def test_matrix_json_round_trip():
    for m in [G.BELL, G.K, G.V2, G.PHI]:
        obj = m.to_json()
        assert set(obj) == {"dim", "entries"}
        assert GateMatrix.from_json(obj) == m
