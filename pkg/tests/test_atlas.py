from fractions import Fraction

import pytest

from su4atlas import atlas
from su4atlas.cyclo import ONE
from su4atlas.gates import parse_gate


def test_catalog_integrity():
    entries = atlas.all_entries()
    names = [e.name for e in entries]
    assert len(names) == len(set(names))
    assert len(atlas.pauli_containing()) == 56
    for e in entries:
        for s in e.generators:
            m = parse_gate(s)
            assert m.det() == ONE, (e.name, s)


def test_monomial_table_counts():
    assert len(atlas.all_entries(family="monomial-s4")) == 6
    assert len(atlas.all_entries(family="monomial-a4")) == 4
    assert len(atlas.all_entries(family="monomial-d4")) == 13
    assert len(atlas.all_entries(family="monomial-v4")) == 6
    monomial = [e for e in atlas.pauli_containing()
                if e.family.startswith("monomial")]
    assert len(monomial) == 29


def test_lookup_and_aliases():
    assert atlas.entry("C2").expected["order"] == 46080
    assert atlas.entry("C(1920s)_Z[z8]") is atlas.entry("C(1920σ)_Z[ζ8]")
    assert atlas.entry("Q2") is atlas.entry("Q^(2)")
    with pytest.raises(atlas.AtlasLookupError):
        atlas.entry("NOSUCH")


def test_order_strings():
    assert atlas.entry("M(384σ,S4)_Z[i]").order_string() == "1536=384σ"
    assert atlas.entry("C2").order_string() == "46080=11520σ"
    assert atlas.entry("C(60)").order_string() == "60=60"


def test_verify_p2_empty_diff(build):
    r = atlas.verify(atlas.entry("P2"))
    assert r.ok and r.diff == {}


def test_verify_negative_control():
    r = atlas.verify(atlas.entry("P2"), override={"order": 1})
    assert not r.ok
    assert set(r.diff) == {"order"}
    assert r.diff["order"]["computed"] == 32


def test_subgroup_relations_from_the_text(build, close):
    # C1(F4) = derived(C(1920σ)_Z[ζ8])
    big = build("C(1920σ)_Z[ζ8]")
    assert big.derived_subgroup().same_group(build("C1(F4)"))
    # C2⋈' = derived(⟨C1⊗C1, SWAP⟩)
    bow = build("C1⋈C1")
    assert bow.derived_subgroup().same_group(build("C2⋈'"))
    # C(960τ) = derived(C(1920σ)_Z[i,√2])
    assert build("C(1920σ)_Z[i,√2]").derived_subgroup().same_group(
        build("C(960τ)"))


def test_ring_pairs_differ():
    for a, b in [("C(576σ)_Z[ζ8]", "C(576σ)_Z[i]"),
                 ("C(1920σ)_Z[ζ8]", "C(1920σ)_Z[i,√2]"),
                 ("M(384σ,S4)_Z[i]", "M(384σ,S4)_Z[i,√2]"),
                 ("M(96σ,S4)_Z[i]", "M(96σ,S4)_Z[i,2ζ8]")]:
        ra = atlas.entry(a).expected["character_ring"]
        rb = atlas.entry(b).expected["character_ring"]
        assert ra and rb and ra != rb


def test_isomorphism_exception_pair(build):
    a = build("C(120σ)_Z[i]")
    b = build("Ex(120σ)")
    assert a.fingerprint() == b.fingerprint()
    from su4atlas.classify import character_ring
    assert character_ring(a).label == "Z[i]"
    assert character_ring(b).label == "Z[i,√3]"


def test_series_formulas_reproduce_table_rows(close):
    name, gens, expected = atlas.instantiate_series("M(24·2^(3r-1)σ,S4)", 2)
    assert expected["projective_order"] == 768
    from su4atlas.group import closure
    assert closure(gens).order == expected["order"] == 3072

    name, gens, expected = atlas.instantiate_series("M(8·2^(r1+r2)σ,V4)", 1, 1)
    assert expected["projective_order"] == 32
    assert closure(gens).order == 128

    name, gens, expected = atlas.instantiate_series("M(8·2^((r1+2r2)-1)σ,D4)", 1, 1)
    g = closure(gens)
    assert g.order == expected["order"] == 128
    assert g.same_group(atlas.build_group(atlas.entry("M(32σ,D4)")))


def test_series_bounds():
    with pytest.raises(atlas.AtlasLookupError):
        atlas.instantiate_series("M(24·2^(3r-1)σ,S4)", 9)
    with pytest.raises(atlas.AtlasLookupError):
        atlas.instantiate_series("M(24·2^(3r-1)σ,S4)", 2, 2)
    with pytest.raises(atlas.AtlasLookupError):
        atlas.series("NOSUCH")


def test_all_series_present():
    assert len(atlas.SERIES) == 12


def test_delta_generator_check_catches_corruption(build):
    e = atlas.entry("M(48σ,A4)")
    import dataclasses
    bad = dataclasses.replace(e, delta_generators=("ZI", "IZ"))
    r = atlas.verify(bad)
    assert "delta_generators" in r.diff
