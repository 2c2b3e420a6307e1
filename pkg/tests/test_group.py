import numpy as np
import pytest

from su4atlas import gates as G
from su4atlas.gates import parse_generators
from su4atlas.group import (ClosureCapExceeded, FiniteMatrixGroup, GroupCache,
                            GroupError, closure)
from su4atlas.linal import GateMatrix


def test_closure_identity_only():
    g = closure([GateMatrix.identity(4)])
    assert g.order == 1


def test_closure_pauli_group(close):
    p2 = close("P2")
    assert p2.order == 32
    assert p2.projective_order == 16
    assert str(p2.lift_class()) == "τ"


def test_closure_pauli_bell(close):
    g = close("⟨P2, BELL⟩")
    assert g.order == 320
    assert g.projective_order == 80
    assert str(g.lift_class()) == "σ"


def test_trivial_lift(close):
    g = close("⟨CZ†·SWAP, BELL⟩")
    assert g.order == 60
    assert g.projective_order == 60
    assert g.lift_class().symbol is None


def test_cap_exceeded():
    with pytest.raises(ClosureCapExceeded):
        closure(parse_generators("⟨SI, HI, IS, IH, BELL⟩"), cap=1000)


def test_det_precondition():
    bad = GateMatrix([[2, 0], [0, 1]])
    with pytest.raises(GroupError):
        closure([bad])


def test_closure_idempotent(close):
    g = close("⟨P2, BELL⟩")
    again = closure([g.element(i) for i in range(g.order)], check_det=False)
    assert again.order == g.order and again.same_group(g)


def test_derived_of_local_cliffords(close):
    g = close("⟨SI, HI, IS, IH⟩")
    derived = g.derived_subgroup()
    assert derived.order == 288
    assert derived.same_group(close("⟨ZI, FI, IZ, IF⟩"))


def test_derived_of_abelian_is_trivial(close):
    delta = close("⟨ZI, IZ⟩")
    assert delta.derived_subgroup().order == 1


def test_center_of_pauli_group(close):
    p2 = close("P2")
    center = p2.center()
    # brute-force oracle over all 32 elements
    mats = [p2.element(i) for i in range(32)]
    manual = [m for m in mats if all(m * x == x * m for x in mats)]
    assert center.order == len(manual) == 2
    assert GateMatrix.identity(4).scale(-1) in center


def test_conjugacy_of_trivial_group():
    g = closure([GateMatrix.identity(2)])
    assert g.conjugacy_class_sizes() == ((1, 1),)


def test_abelianization_of_single_qubit_clifford(close):
    c1 = close("⟨S, H⟩")
    # oracle: |C1| / |C1'| = 48 / 24 = 2, prime, hence cyclic
    assert c1.order // c1.derived_subgroup().order == 2
    assert c1.abelianization() == (2,)


def test_membership(close, c2):
    assert G.BELL in c2
    assert G.parse_gate("Φ⊗I") not in c2
    assert G.constant("U1") not in c2


def test_pauli_normal_in_clifford(close, c2, p2):
    assert p2.is_subgroup_of(c2)
    # P2 itself is not normal (conjugates pick up i phases); its scalar
    # saturation is
    sat = closure(parse_generators("⟨P2, iII⟩"), check_det=False)
    assert sat.is_normal_in(c2)


def test_lagrange_for_computed_subgroups(close, c2):
    for sub in [c2.center(), c2.derived_subgroup()]:
        assert c2.order % sub.order == 0


def test_fingerprint_generator_order_invariance(close):
    a = closure(parse_generators("⟨XI, ZI, IX, IZ⟩"))
    b = closure(parse_generators("⟨IZ, IX, ZI, XI⟩"))
    assert a.fingerprint() == b.fingerprint()


def test_element_orders(close):
    p2 = close("P2")
    orders = sorted(p2.element_order_multiset())
    assert sum(c for _, c in orders) == 32
    assert dict(orders)[1] == 1
    assert p2.element_orders().max() == 4


def test_projective_times_scalar_is_order(close):
    for text in ["P2", "⟨P2, BELL⟩", "⟨SI, HI, SWAP⟩"]:
        g = close(text)
        assert g.order == g.projective_order * g.lift_class().scalar_subgroup_order


def test_cache_round_trip(tmp_path, close):
    cache = GroupCache(str(tmp_path))
    gens = parse_generators("⟨P2, BELL⟩")
    g = closure(gens, cache=cache)
    assert g.order == 320
    loaded = cache.load(gens)
    assert loaded is not None and loaded.order == 320
    assert loaded.same_group(g)
    g2 = closure(gens, cache=cache)
    assert g2.order == 320
    # version bump invalidates
    import json, os
    meta = [p for p in os.listdir(tmp_path) if p.endswith(".json")][0]
    payload = json.load(open(tmp_path / meta))
    payload["engine_version"] = -1
    json.dump(payload, open(tmp_path / meta, "w"))
    assert cache.load(gens) is None
    assert cache.clear() > 0
