"""The catalog: every named group with generators, expected invariants and
citations, the infinite-series constructors, and the verifier that diffs
computed invariants against the expectations.

Expected values are data (data/atlas.json), not code: a transcription fix
never touches engine logic.  External group-database identifiers are opaque
strings; `su4atlas export gap` emits a cross-check script for them."""

from __future__ import annotations

import importlib.resources
import json
import time
from dataclasses import dataclass, field as dfield
from fractions import Fraction
from functools import lru_cache

from .classify import classification_report
from .gates import I as I2, X, kron, parse_gate, ph
from .group import DEFAULT_CAP, closure


class AtlasLookupError(KeyError):
    """Unknown atlas entry or series name."""


@dataclass(frozen=True)
class AtlasEntry:
    name: str
    family: str
    generators: tuple
    expected: dict
    delta_generators: tuple | None = None
    citations: tuple = ()
    external_ids: dict = dfield(default_factory=dict)
    aliases: tuple = ()
    dim: int = 4

    def generator_matrices(self):
        return [parse_gate(s) for s in self.generators]

    def order_string(self):
        """Paper notation "total=projective<lift>", e.g. "1536=384σ"."""
        total = self.expected.get("order")
        proj = self.expected.get("projective_order")
        lift = self.expected.get("lift", "")
        lift = "" if lift == "1" else lift
        return "%d=%d%s" % (total, proj, lift)


def _ascii_alias(name):
    table = {"σ": "s", "τ": "t", "ζ": "z", "⊗": "x", "⋈": "bow", "√": "sqrt",
             "·": ".", "Φ": "Phi", "′": "'"}
    out = "".join(table.get(ch, ch) for ch in name)
    return out


@lru_cache(maxsize=1)
def _catalog():
    data = json.loads(importlib.resources.files("su4atlas.data")
                      .joinpath("atlas.json").read_text("utf-8"))
    if data.get("schema_version") != 1:
        raise AtlasLookupError("unsupported catalog schema")
    by_name, order = {}, []
    for raw in data["entries"]:
        gens = tuple(raw["generators"])
        dim = parse_gate(gens[0]).dim
        e = AtlasEntry(
            name=raw["name"],
            family=raw["family"],
            generators=gens,
            expected=raw["expected"],
            delta_generators=(tuple(raw["delta_generators"])
                              if raw.get("delta_generators") else None),
            citations=tuple(raw.get("citations", ())),
            external_ids=raw.get("external_ids", {}),
            aliases=tuple(raw.get("aliases", ())),
            dim=dim,
        )
        by_name[e.name] = e
        order.append(e.name)
    lookup = dict(by_name)
    for e in by_name.values():
        for alias in (_ascii_alias(e.name),) + e.aliases:
            lookup.setdefault(alias, e)
    return by_name, order, lookup


def entry(name):
    by_name, _, lookup = _catalog()
    e = lookup.get(name) or lookup.get(_ascii_alias(name))
    if e is None:
        raise AtlasLookupError("no atlas entry named %r" % (name,))
    return e


def all_entries(family=None, contains_pauli=None, dim=None):
    by_name, order, _ = _catalog()
    out = []
    for name in order:
        e = by_name[name]
        if family is not None and e.family != family:
            continue
        if contains_pauli is not None and \
                bool(e.expected.get("contains_pauli")) != contains_pauli:
            continue
        if dim is not None and e.dim != dim:
            continue
        out.append(e)
    return out


CLIFFORD_FAMILIES = (
    "primitive-local", "primitive-nonentangling", "primitive-entangling",
    "monomial-s4", "monomial-a4", "monomial-d4", "monomial-v4",
    "nonmonomial-local", "nonmonomial-entangling",
)


def pauli_containing():
    """The 56 two-qubit Clifford subgroups containing the Pauli group.

    The exotic 2I-tensor groups also contain P2 but live outside the
    Clifford hierarchy, so they are excluded here.
    """
    return [e for e in all_entries(contains_pauli=True, dim=4)
            if e.family in CLIFFORD_FAMILIES]


def families():
    return sorted({e.family for e in all_entries()})


# ---------------------------------------------------------------------------
# Appendix C series


def _q_side(r, side):
    gens = [X, ph(2 ** r)]
    if side == 0:
        return [kron(g, I2) for g in gens]
    return [kron(I2, g) for g in gens]


def _qq(r1, r2):
    return _q_side(r1, 0) + _q_side(r2, 1)


def _q_p1(r):
    return _q_side(r, 0) + [kron(I2, X), kron(I2, parse_gate("Z"))]


def _p1_q(r):
    return [kron(X, I2), kron(parse_gate("Z"), I2)] + _q_side(r, 1)


def _q_c1(r):
    return _q_side(r, 0) + [kron(I2, parse_gate("S")), kron(I2, parse_gate("H"))]


def _q_c1p(r):
    return _q_side(r, 0) + [kron(I2, parse_gate("Z")), kron(I2, parse_gate("F"))]


@dataclass(frozen=True)
class SeriesSpec:
    """One Appendix-C family: generator recipe plus closed-form expectations."""

    name: str
    params: tuple                  # ("r",) or ("r1", "r2")
    projective_order: object       # callable on the parameters
    lift: str
    shape: str | None
    build: object                  # callable -> generator matrices
    extra: tuple = ()              # fixed named gates appended to the recipe

    def instantiate(self, *args, bound=5):
        if len(args) != len(self.params):
            raise AtlasLookupError("series %s takes parameters %s"
                                   % (self.name, self.params))
        if any(r < 1 or r > bound for r in args):
            raise AtlasLookupError("series parameter out of bounds 1..%d" % bound)
        gens = self.build(*args) + [parse_gate(s) for s in self.extra]
        proj = self.projective_order(*args)
        lift_order = {"σ": 4, "τ": 2, "1": 1}[self.lift]
        level = max(args)
        expected = {
            "order": proj * lift_order,
            "projective_order": proj,
            "lift": self.lift,
            "shape": self.shape,
            "hierarchy_level": level if level >= 2 else None,
        }
        pname = self.name + "[" + ",".join("%s=%d" % (p, v)
                                           for p, v in zip(self.params, args)) + "]"
        return pname, gens, expected


SERIES = {
    "M(24·2^(3r-1)σ,S4)": SeriesSpec(
        "M(24·2^(3r-1)σ,S4)", ("r",), lambda r: 24 * 2 ** (3 * r - 1), "σ",
        "S4", lambda r: _qq(r, r), extra=("CNOT12", "CNOT21")),
    "M(12·2^(3r-1)σ,A4)": SeriesSpec(
        "M(12·2^(3r-1)σ,A4)", ("r",), lambda r: 12 * 2 ** (3 * r - 1), "σ",
        "A4", lambda r: _qq(r, r), extra=("DCNOT",)),
    "M(8·2^((r1+2r2)-1)σ,D4)": SeriesSpec(
        "M(8·2^((r1+2r2)-1)σ,D4)", ("r1", "r2"),
        lambda r1, r2: 8 * 2 ** (r1 + 2 * r2 - 1), "σ", "D4", _qq,
        extra=("CNOT12",)),
    "M(32·2^rσ,D4)": SeriesSpec(
        "M(32·2^rσ,D4)", ("r",), lambda r: 32 * 2 ** r, "σ", "D4", _q_p1,
        extra=("CNOT12", "CZ")),
    "M(8·4^rσ,D4)": SeriesSpec(
        "M(8·4^rσ,D4)", ("r",), lambda r: 8 * 4 ** r, "σ", "D4", _p1_q,
        extra=("CNOT12",)),
    "M(16·2^rσ,D4)": SeriesSpec(
        "M(16·2^rσ,D4)", ("r",), lambda r: 16 * 2 ** r, "σ", "D4", _q_p1,
        extra=("CNOT12",)),
    "M(8·2^(r1+r2)σ,V4)": SeriesSpec(
        "M(8·2^(r1+r2)σ,V4)", ("r1", "r2"),
        lambda r1, r2: 8 * 2 ** (r1 + r2), "σ", "V4", _qq, extra=("CZ",)),
    "Q^(r1)⊗Q^(r2)": SeriesSpec(
        "Q^(r1)⊗Q^(r2)", ("r1", "r2"),
        lambda r1, r2: 4 * 2 ** (r1 + r2), "τ", "V4", _qq),
    "Q^(r)⊗C1": SeriesSpec(
        "Q^(r)⊗C1", ("r",), lambda r: 48 * 2 ** r, "τ", None, _q_c1),
    "Q^(r)⊗C1'": SeriesSpec(
        "Q^(r)⊗C1'", ("r",), lambda r: 24 * 2 ** r, "τ", None, _q_c1p),
    "N(192·2^rσ)": SeriesSpec(
        "N(192·2^rσ)", ("r",), lambda r: 192 * 2 ** r, "σ", None, _q_c1,
        extra=("CNOT12",)),
    "N(96·2^rσ)": SeriesSpec(
        "N(96·2^rσ)", ("r",), lambda r: 96 * 2 ** r, "σ", None, _q_c1p,
        extra=("CNOT12",)),
}


def series(name):
    spec = SERIES.get(name) or SERIES.get(_ascii_alias(name))
    if spec is None:
        lookup = {_ascii_alias(k): v for k, v in SERIES.items()}
        spec = lookup.get(_ascii_alias(name))
    if spec is None:
        raise AtlasLookupError("no series named %r" % (name,))
    return spec


def instantiate_series(name, *params, bound=5):
    """Generators + closed-form expected invariants for one series member."""
    return series(name).instantiate(*params, bound=bound)


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerifyResult:
    entry: AtlasEntry
    report: object
    diff: dict
    seconds: float

    @property
    def ok(self):
        return not self.diff


def build_group(e, cap=DEFAULT_CAP, cache=None):
    return closure(e.generator_matrices(), cap=cap, cache=cache)


def verify(e, cap=DEFAULT_CAP, cache=None, max_level=4, override=None):
    """Build the group, classify it, and diff against the catalog row."""
    t0 = time.monotonic()
    g = build_group(e, cap=cap, cache=cache)
    rep = classification_report(g, e.name, max_level=max_level)
    expected = dict(e.expected)
    if override:
        expected.update(override)
    diff = {}

    def check(key, got):
        want = expected.get(key)
        if want is None:
            return
        if want != got:
            diff[key] = {"expected": want, "computed": got}

    check("order", rep.order)
    check("projective_order", rep.projective_order)
    check("lift", rep.lift)
    check("irreducible", rep.irreducible)
    check("perfect", rep.perfect)
    check("contains_pauli", rep.contains_pauli)
    check("entanglement", rep.entanglement)
    check("character_ring", rep.character_ring)
    if "shape" in expected:
        want = expected["shape"]
        if want != rep.shape:
            diff["shape"] = {"expected": want, "computed": rep.shape}
    if expected.get("delta_order") is not None:
        check("delta_order", rep.delta_order)
    want_level = expected.get("hierarchy_level")
    if want_level is not None:
        got = rep.hierarchy_level
        if want_level == "not_within":
            if got is not None:
                diff["hierarchy_level"] = {"expected": "not_within", "computed": got}
        elif got != want_level:
            diff["hierarchy_level"] = {"expected": want_level, "computed": got}
    for key, want in expected.get("frame_potentials", {}).items():
        t = int(key[1:])
        got = rep.frame_potentials.get(t)
        if got is None or Fraction(want) != got:
            diff["frame_potentials." + key] = {"expected": want,
                                               "computed": str(got)}
    if e.delta_generators:
        dg = closure([parse_gate(s) for s in e.delta_generators], check_det=False)
        from .classify import monomial_shape
        ms = monomial_shape(g)
        if ms is None or not ms[1].same_group(dg):
            diff["delta_generators"] = {
                "expected": list(e.delta_generators),
                "computed": "diagonal subgroup of order %s"
                            % (ms[1].order if ms else None)}
    return VerifyResult(e, rep, diff, time.monotonic() - t0)
