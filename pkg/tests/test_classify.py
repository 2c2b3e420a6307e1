from fractions import Fraction

import numpy as np
import pytest

from su4atlas import classify as C
from su4atlas import gates as G
from su4atlas.gates import parse_gate, parse_generators
from su4atlas.group import closure


def test_pauli_group_irreducible_with_brute_force_sum(p2):
    # brute force: only +-II have nonzero trace, |tr|^2 = 16 each
    total = 0
    for i in range(p2.order):
        t = complex(p2.element(i).trace())
        total += abs(t) ** 2
    assert round(total) == 32
    assert C.is_irreducible(p2)
    assert C.frame_potential(p2, 1) == 1


def test_abelian_diagonal_group_reducible(close):
    delta = close("⟨ZI, IZ⟩")
    assert not C.is_irreducible(delta)


def test_clifford_group_is_irreducible(c2):
    assert C.is_irreducible(c2)


def test_frame_potential_trivial_group():
    from su4atlas.linal import GateMatrix
    g = closure([GateMatrix.identity(4)])
    assert C.frame_potential(g, 1) == 16


def test_clifford_is_three_design(c2):
    assert C.frame_potential(c2, 1) == 1
    assert C.frame_potential(c2, 2) == 2
    assert C.frame_potential(c2, 3) == 6


def test_galois_qudit_clifford_is_two_design_only(close):
    g = close("⟨P2, HH, BELL⟩")
    assert C.frame_potential(g, 2) == 2
    assert C.frame_potential(g, 3) == 9  # > 6: not a 3-design


def test_haar_moments_by_monte_carlo():
    rng = np.random.default_rng(20260810)
    n = 100_000
    z = (rng.standard_normal((n, 4, 4)) + 1j * rng.standard_normal((n, 4, 4)))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r, axis1=1, axis2=2)
    q = q * (d / np.abs(d))[:, None, :]
    tr = np.abs(np.trace(q, axis1=1, axis2=2)) ** 2
    for t, want in C.HAAR_MOMENTS.items():
        got = (tr ** t).mean()
        assert abs(got - want) / want < 0.05, (t, got)


def test_frame_potential_bounded_below_by_haar(close):
    for text in ["P2", "⟨P2, BELL⟩", "⟨ZI, FI, IZ, IF⟩"]:
        g = close(text)
        for t, want in C.HAAR_MOMENTS.items():
            assert C.frame_potential(g, t) >= want


def test_entanglement_classes(close):
    assert C.entanglement_class(close("⟨ZI, FI, IZ, IF⟩")) is C.EntanglementClass.LOCAL
    assert C.entanglement_class(close("⟨SI, HI, SWAP⟩")) is \
        C.EntanglementClass.NON_ENTANGLING
    assert C.entanglement_class(close("⟨P2, BELL⟩")) is \
        C.EntanglementClass.ENTANGLING


def test_monomial_shape_a4(close):
    g = close("⟨P2, DCNOT⟩")
    shape, delta = C.monomial_shape(g)
    assert shape.tag == "A4"
    assert delta.order == 16
    assert delta.same_group(closure(parse_generators("⟨iII, ZI, IZ⟩"),
                                    check_det=False))


def test_monomial_shape_of_diagonal_group_is_trivial(close):
    delta = close("⟨ZI, IZ⟩")
    shape, kernel = C.monomial_shape(delta)
    assert shape.tag == "other:order 1"
    assert kernel.order == delta.order


def test_monomial_shape_none_for_dense(close):
    assert C.monomial_shape(close("⟨SI, HI, IS, IH⟩")) is None


def test_shape_round_trip_on_monomial_elements(close):
    from su4atlas.linal import permutation_matrix
    g = close("⟨P2, CNOT12⟩")
    for i in range(g.order):
        m = g.element(i)
        perm, diag = m.monomial_parts()
        assert permutation_matrix(perm) * diag == m


def test_character_ring_of_pauli_group(p2):
    # oracle: enumerate all 32 traces first
    traces = {str(p2.element(i).trace()) for i in range(32)}
    assert traces == {"c1:", "c1:0=4/1", "c1:0=-4/1"}
    ring = C.character_ring(p2)
    assert ring.label == "Z"


def test_character_ring_labels(close):
    assert C.character_ring(close("⟨P2, CNOT12, CNOT21⟩")).label == "Z[i,2ζ8]"
    assert C.character_ring(close("⟨P2, CNOT12·SI, CNOT21·IS⟩")).label == "Z[i]"
    assert C.character_ring(close("⟨V1, V2⟩")).label == "Z[(1+√-7)/2]"


def test_character_ring_contains_one_and_is_order_stable(close):
    ring = C.character_ring(close("⟨P2, CNOT12, CNOT21⟩"))
    from su4atlas.cyclo import ONE
    assert ONE in ring.basis
    ring2 = C.character_ring(closure(parse_generators("⟨IZ, CNOT21, IX, CNOT12, ZI, XI⟩")))
    assert ring2.label == ring.label


def test_hierarchy_levels_of_gates():
    assert C.hierarchy_level(parse_gate("ZI")).level == 1
    assert C.hierarchy_level(parse_gate("SI")).level == 2
    assert C.hierarchy_level(parse_gate("CZ")).level == 2
    assert C.hierarchy_level(parse_gate("Ph8⊗I")).level == 3
    assert C.hierarchy_level(parse_gate("Ph16⊗I"), max_level=4).level == 4
    phi = C.hierarchy_level(parse_gate("Φ⊗I"), max_level=4)
    assert phi.level is None and str(phi) == "not within level <= 4"


def test_hierarchy_single_qubit_variant():
    assert C.hierarchy_level(G.Z).level == 1
    assert C.hierarchy_level(G.S).level == 2
    assert C.hierarchy_level(G.ph(8)).level == 3
    assert C.hierarchy_level(G.PHI, max_level=3).level is None


def test_hierarchy_monotone_for_clifford_generators():
    # if in_level(m, r) then in_level(m, r+1): minimal levels spot-check
    for expr in ["SI", "CZ", "BELL", "SWAP", "CNOT12"]:
        lv = C.hierarchy_level(parse_gate(expr), max_level=3)
        assert lv.level == 2  # minimal, hence inside level 3 too


def test_group_hierarchy_level(close):
    assert C.group_hierarchy_level(close("P2")).level == 1
    assert C.group_hierarchy_level(close("⟨P2, BELL⟩")).level == 2
    series = closure(parse_generators("⟨Q3⊗Q3, CNOT12, CNOT21⟩"))
    assert C.group_hierarchy_level(series).level == 3
    assert C.is_exotic_up_to(close("⟨ZI, ΦI, IZ, IΦ⟩"), 4)


def test_irreducibility_invariant_under_conjugation(close):
    g = close("⟨P2, BELL⟩")
    swap = G.SWAP
    conj = closure([swap * m * swap.adjoint()
                    for m in [g.element(int(i)) for i in g.gen_indices]])
    assert C.is_irreducible(conj) == C.is_irreducible(g)


def test_classification_report_json(close):
    rep = C.classification_report(close("⟨P2, BELL⟩"), "demo")
    d = rep.to_json()
    assert d["order"] == 320 and d["lift"] == "σ"
    assert d["frame_potentials"]["t1"] == "1"
    assert d["contains_pauli"] is True
