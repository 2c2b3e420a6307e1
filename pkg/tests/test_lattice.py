import itertools

import numpy as np
import pytest

from su4atlas import lattice
from su4atlas.gates import parse_generators
from su4atlas.group import GroupError, closure


def _brute_force_subgroups(table, e):
    """Independent oracle: test every subset of a tiny table group."""
    q = table.shape[0]
    assert q <= 8
    subs = []
    for r in range(q + 1):
        for cand in itertools.combinations(range(q), r):
            s = set(cand)
            if e not in s or not s:
                continue
            if all(table[a, b] in s for a in s for b in s):
                subs.append(frozenset(s))
    return set(subs)


def test_all_table_subgroups_against_brute_force():
    # quotient of <P2, CNOT12, CNOT21> by its scalar saturation
    g = closure(parse_generators("⟨P2, CNOT12, CNOT21⟩"))
    sat = closure(parse_generators("⟨P2, iII⟩"), check_det=False)
    quo = lattice.quotient(g, sat)
    got = {frozenset(s.members.tolist())
           for s in lattice.all_table_subgroups(quo.table, quo.identity_coset)}
    assert got == _brute_force_subgroups(quo.table, quo.identity_coset)


def test_intermediate_subgroups_of_pauli_cnot(p2):
    g = closure(parse_generators("⟨P2, CNOT12⟩"))
    subs = lattice.intermediate_subgroups(g, p2)
    assert [h.order for h in subs] == [64]
    assert subs[0].same_group(closure(parse_generators("⟨P2, iII⟩"),
                                      check_det=False))


def test_intermediate_subgroups_endpoints_empty(p2):
    assert lattice.intermediate_subgroups(p2, p2) == []


def test_intermediate_subgroup_properties(p2):
    g = closure(parse_generators("⟨P2, CNOT12, CNOT21⟩"))
    subs = lattice.intermediate_subgroups(g, p2)
    assert len(subs) == 5
    for h in subs:
        assert p2.is_subgroup_of(h)
        assert h.is_subgroup_of(g)
        assert g.order % h.order == 0
        again = closure([h.element(i) for i in range(h.order)],
                        check_det=False)
        assert again.same_group(h)


def test_quotient_requires_containment(p2):
    g = closure(parse_generators("⟨SI, HI, SWAP⟩"))
    with pytest.raises(GroupError):
        lattice.quotient(g, closure(parse_generators("⟨V1, V2⟩")))


def test_perm_action_is_a_faithful_homomorphism(close):
    g = close("⟨P2, K, BELL⟩")
    action = lattice.PermAction(g)
    rng = np.random.default_rng(1)
    a = rng.integers(0, g.order, size=50)
    b = rng.integers(0, g.order, size=50)
    prod = action.prod(a, b)
    for i in range(0, 50, 10):
        assert g.element(int(a[i])) * g.element(int(b[i])) == \
            g.element(int(prod[i]))
    inv = action.inv(a)
    ident = action.prod(a, inv)
    assert (ident == action.identity).all()


def test_quotient_table_is_a_group(close):
    g = close("⟨P2, CNOT12, CNOT21⟩")
    sat = closure(parse_generators("⟨P2, iII⟩"), check_det=False)
    quo = lattice.quotient(g, sat)
    t = quo.table
    q = t.shape[0]
    assert (t[quo.identity_coset] == np.arange(q)).all()
    rng = np.random.default_rng(0)
    for _ in range(100):
        a, b, c = rng.integers(0, q, size=3)
        assert t[t[a, b], c] == t[a, t[b, c]]


def test_tau_members_of_small_lattice(p2, close):
    # the 384-element S4 group: its lattice members of tau type must not
    # contain iII and must have index 2 in their scalar saturation
    g = close("⟨P2, CNOT12, CNOT21⟩")
    members, _ = lattice.enumerate_lattice(g, p2)
    taus = [m for m in members if m.scalar_order == 2]
    assert taus and all(m.order in (32, 64, 96, 192) for m in taus)
    total = len(members)
    sats = [m for m in members if m.scalar_order == 4]
    assert total == len(taus) + len(sats)
