"""Classification invariants: irreducibility, entanglement class, monomial
shape with diagonal subgroup, character ring, Clifford-hierarchy level and
frame potentials.  All decisions are exact; no floating point enters any
predicate."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import backend
from .cyclo import Cyclotomic, ONE, I as IM, root_of_unity, sqrt_named
from .gates import I as I2, X, Z, kron
from .group import FiniteMatrixGroup, closure
from .groupcalc import GroupFingerprint
from .linal import GateMatrix
from .packed import field, keys_of


class ClassifyError(RuntimeError):
    """Internal invariant violated (non-integral trace, irrational sum)."""


class EntanglementClass(Enum):
    LOCAL = "local"
    NON_ENTANGLING = "non-entangling"
    ENTANGLING = "entangling"


@dataclass(frozen=True)
class Shape:
    """Isomorphism type of the permutation-part image of a monomial group."""

    tag: str                 # "S4" | "A4" | "D4" | "V4" | "other:<desc>"
    witness: tuple           # the permutation image group on dim points


@dataclass(frozen=True)
class CharacterRing:
    basis: tuple             # Hermite-reduced Z-module basis, Cyclotomic values
    label: str | None

    def __str__(self):
        return self.label or "Z[" + ", ".join(str(b) for b in self.basis) + "]"


@dataclass(frozen=True)
class HierarchyLevel:
    level: int | None        # minimal level, or None = not within the bound
    bound: int

    @property
    def is_within(self):
        return self.level is not None

    def __str__(self):
        if self.level is None:
            return "not within level <= %d" % self.bound
        return str(self.level)


# ---------------------------------------------------------------------------
# Pauli base groups


@lru_cache(maxsize=None)
def pauli_group(dim):
    """The determinant-1 Pauli matrix group: 8 elements on 1 qubit, 32 on 2."""
    if dim == 2:
        return closure([X, Z])
    if dim == 4:
        return closure([kron(X, I2), kron(Z, I2), kron(I2, X), kron(I2, Z)])
    raise ClassifyError("no Pauli group in dimension %d" % dim)


def contains_pauli_group(g):
    return pauli_group(g.dim).is_subgroup_of(g)


@lru_cache(maxsize=None)
def _pauli_level_base(dim):
    """Level-1 membership set: the Pauli group saturated by SU(dim) scalars.

    Global phase is unphysical, so the hierarchy recursion tests Pauli
    membership up to the scalar subgroup of SU(dim) (iII on two qubits);
    with the bare 32-element matrix group the recursion would not return
    the Clifford group at level 2 (e.g. CZ conjugates XI to i*XZ).
    """
    p = pauli_group(dim)
    if dim == 4:
        from .gates import iII
        return closure([p.element(i) for i in p.gen_indices] + [iII],
                       check_det=False)
    return p


# ---------------------------------------------------------------------------
# frame potentials and irreducibility


def frame_potential(g, t):
    """(1/|G|) sum |tr m|^(2t), exact.  Integral for every finite group."""
    if t not in (1, 2, 3):
        raise ClassifyError("frame potential implemented for t in {1,2,3}")
    tr, dens = g.packed_traces()
    fld = g.field
    ctr = backend.conj_values(tr, fld)
    p = backend.value_mul(tr, ctr, fld)     # |tr|^2 numerators, denominator dens^2
    for _ in range(t - 1):
        p = backend.value_mul(p, np.ascontiguousarray(tr), fld)
        p = backend.value_mul(p, np.ascontiguousarray(ctr), fld)
    total = [Fraction(0)] * fld.d
    for den in np.unique(dens):
        mask = dens == den
        colsum = p[mask].astype(object).sum(axis=0)
        dd = int(den) ** (2 * t)
        for k in range(fld.d):
            if colsum[k]:
                total[k] += Fraction(int(colsum[k]), dd)
    if any(total[1:]):
        raise ClassifyError("frame potential sum is not rational")
    return total[0] / g.order


def is_irreducible(g):
    """Character norm test: sum |tr|^2 equals |G| iff irreducible."""
    return frame_potential(g, 1) == 1


HAAR_MOMENTS = {1: 1, 2: 2, 3: 6}


# ---------------------------------------------------------------------------
# entanglement class


_RI = np.array([[2 * (a // 2) + (c // 2) for c in range(4)] for a in range(4)])
_RJ = np.array([[2 * (a % 2) + (c % 2) for c in range(4)] for a in range(4)])


def _nonfactorizable_mask(coeffs, fld):
    """Per-matrix realignment rank>1 flags via the 36 exact 2x2 minors."""
    n = coeffs.shape[0]
    R = coeffs[:, _RI, _RJ, :]
    bad = np.zeros(n, dtype=bool)
    for a, b in itertools.combinations(range(4), 2):
        for c, e in itertools.combinations(range(4), 2):
            p = backend.value_mul(np.ascontiguousarray(R[:, a, c]),
                                  np.ascontiguousarray(R[:, b, e]), fld)
            q = backend.value_mul(np.ascontiguousarray(R[:, a, e]),
                                  np.ascontiguousarray(R[:, b, c]), fld)
            bad |= (p != q).any(axis=1)
    return bad


def entanglement_class(g):
    """Local / non-entangling / entangling, deciding every element exactly."""
    if g.dim != 4:
        raise ClassifyError("entanglement classification needs two qubits")
    bad = _nonfactorizable_mask(g.coeffs, g.field)
    if not bad.any():
        return EntanglementClass.LOCAL
    fails = np.flatnonzero(bad)
    from .gates import SWAP
    if g.field.n % 8 == 0:
        sc, sd = g.field.pack_matrices([SWAP.adjoint()])
        pc, _ = backend.matmul(np.ascontiguousarray(g.coeffs[fails]),
                               g.dens[fails], sc[0], sd[0], g.field)
        still = _nonfactorizable_mask(pc, g.field)
        return EntanglementClass.ENTANGLING if still.any() \
            else EntanglementClass.NON_ENTANGLING
    swap_adj = SWAP.adjoint()
    for i in fails:
        if not (g.element(int(i)) * swap_adj).tensor_factorizable():
            return EntanglementClass.ENTANGLING
    return EntanglementClass.NON_ENTANGLING


# ---------------------------------------------------------------------------
# monomial shape


def _perm_order(perm):
    seen = [False] * len(perm)
    out = 1
    for i in range(len(perm)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                length += 1
            out = out * length // math.gcd(out, length)
    return out


def monomial_shape(g):
    """(Shape, diagonal subgroup) or None when some element is non-monomial."""
    nz = (g.coeffs != 0).any(axis=3)
    if not (nz.sum(axis=1) == 1).all():
        return None
    perms = nz.argmax(axis=1)          # column -> row maps, one per element
    image = {tuple(int(x) for x in p) for p in np.unique(perms, axis=0)}
    tag = _shape_tag(image)
    ident = tuple(range(g.dim))
    diag_idx = np.flatnonzero((perms == np.arange(g.dim)).all(axis=1))
    delta = g._subgroup_from_indices(diag_idx.astype(np.int64))
    return Shape(tag, tuple(sorted(image))), delta


def _shape_tag(image):
    order = len(image)
    orders = sorted(_perm_order(p) for p in image)
    if order == 24:
        return "S4"
    if order == 12 and max(orders) <= 3:
        return "A4"
    if order == 8 and orders == [1, 2, 2, 2, 2, 2, 4, 4]:
        return "D4"
    if order == 4 and max(orders) <= 2:
        return "V4"
    return "other:order %d" % order


# ---------------------------------------------------------------------------
# character ring


def hermite_normal_form(rows):
    """Canonical row HNF of an integer matrix; zero rows dropped."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return []
    ncols = len(mat[0])
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, len(mat)):
            if mat[i][c]:
                piv = i
                break
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        # clear below by gcd steps
        for i in range(r + 1, len(mat)):
            while mat[i][c]:
                q = mat[r][c] // mat[i][c]
                mat[r] = [x - q * y for x, y in zip(mat[r], mat[i])]
                mat[r], mat[i] = mat[i], mat[r]
        if mat[r][c] < 0:
            mat[r] = [-x for x in mat[r]]
        for i in range(r):
            q = mat[i][c] // mat[r][c]
            if q:
                mat[i] = [x - q * y for x, y in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return [row for row in mat[:r] if any(row)]


def _integral_coords(value, conductor):
    dense = value.dense(conductor)
    out = []
    for c in dense:
        if c.denominator != 1:
            raise ClassifyError("trace is not an algebraic integer: %s" % value)
        out.append(int(c))
    return out


def _module_closure(values):
    """Hermite basis of the ring Z[values] viewed as a Z-module."""
    conductor = 1
    for v in values:
        conductor = conductor * v.conductor // math.gcd(conductor, v.conductor)
    rows = [_integral_coords(ONE, conductor)]
    rows += [_integral_coords(v, conductor) for v in values]
    basis = hermite_normal_form(rows)
    while True:
        gens = [Cyclotomic(conductor, dict(enumerate(row))) for row in basis]
        rows = list(basis)
        for a, b in itertools.combinations_with_replacement(gens, 2):
            rows.append(_integral_coords(a * b, conductor))
        nxt = hermite_normal_form(rows)
        if nxt == basis:
            return conductor, basis
        basis = nxt


@lru_cache(maxsize=1)
def _reference_rings():
    i = IM
    z3 = root_of_unity(3)
    z8 = root_of_unity(8)
    s2 = sqrt_named(2)
    s3 = sqrt_named(3)
    kappa = (ONE + sqrt_named(-7)) / 2
    return (
        ("Z", (ONE,)),
        ("Z[i]", (ONE, i)),
        ("Z[ζ3]", (ONE, z3)),
        ("Z[ζ8]", (ONE, z8, z8 ** 2, z8 ** 3)),
        ("Z[i,√2]", (ONE, i, s2, i * s2)),
        ("Z[i,2ζ8]", (ONE, i, 2 * z8, 2 * z8 ** 3)),
        ("Z[(1+√-7)/2]", (ONE, kappa)),
        ("Z[i,√3]", (ONE, i, s3, i * s3)),
    )


def character_ring(g):
    """Ring generated by all element traces, with a reference label if any."""
    traces = g.trace_values()
    conductor, basis = _module_closure(traces)
    label = None
    for name, ref in _reference_rings():
        refc = 1
        for v in ref:
            refc = refc * v.conductor // math.gcd(refc, v.conductor)
        common = conductor * refc // math.gcd(conductor, refc)
        mine = hermite_normal_form(
            [_integral_coords(Cyclotomic(conductor, dict(enumerate(row))), common)
             for row in basis])
        theirs = hermite_normal_form([_integral_coords(v, common) for v in ref])
        if mine == theirs:
            label = name
            break
    values = tuple(Cyclotomic(conductor, dict(enumerate(row))) for row in basis)
    return CharacterRing(values, label)


# ---------------------------------------------------------------------------
# Clifford hierarchy


_LEVEL_CACHE = {}


def hierarchy_level(m, max_level=4):
    """Minimal hierarchy level of a gate, searched up to max_level.

    Level 1 is Pauli membership; level r requires every Pauli conjugate
    m P m^dagger to sit in level r-1.  Levels >= 3 are not groups, so the
    check quantifies over all Pauli elements, not just generators.
    """
    cache_key = (m.key(), m.dim, max_level)
    if cache_key in _LEVEL_CACHE:
        return _LEVEL_CACHE[cache_key]
    paulis = pauli_group(m.dim)
    base = _pauli_level_base(m.dim)
    conductor = paulis.field.n
    for row in m.entries:
        for e in row:
            conductor = conductor * e.conductor // math.gcd(conductor, e.conductor)
    fld = field(conductor)
    pc, pd = fld.pack_matrices([paulis.element(i) for i in range(paulis.order)])
    bc, bd = fld.pack_matrices([base.element(i) for i in range(base.order)])
    pauli_keys = set(keys_of(bc, bd))
    mc, md = fld.pack_matrices([m])
    memo = {}

    def in_level(c, d, key, r):
        if r == 1:
            return key in pauli_keys
        got = memo.get((key, r))
        if got is not None:
            return got
        cc = np.ascontiguousarray(np.broadcast_to(c, pc.shape))
        cd = np.broadcast_to(d, pd.shape)
        left, ld = backend.matmul(cc, cd, pc, pd, fld, pairs=True)
        adj_c, adj_d = backend.adjoint(c.reshape((1,) + c.shape),
                                       np.array([d]), fld)
        out, od = backend.matmul(left, ld, adj_c[0], adj_d[0], fld)
        keys = keys_of(out, od)
        ok = True
        for i, k in enumerate(keys):
            if not in_level(out[i], od[i], k, r - 1):
                ok = False
                break
        memo[(key, r)] = ok
        return ok

    key0 = keys_of(mc, md)[0]
    result = HierarchyLevel(None, max_level)
    for r in range(1, max_level + 1):
        if in_level(mc[0], md[0], key0, r):
            result = HierarchyLevel(r, max_level)
            break
    _LEVEL_CACHE[cache_key] = result
    return result


def group_hierarchy_level(g, max_level=4):
    """max over generators of the minimal gate level (NotWithin if any)."""
    gens = g.generators if isinstance(g, FiniteMatrixGroup) else list(g)
    best = 1
    for m in gens:
        lv = hierarchy_level(m, max_level)
        if lv.level is None:
            return HierarchyLevel(None, max_level)
        best = max(best, lv.level)
    return HierarchyLevel(best, max_level)


def is_exotic_up_to(g, max_level=4):
    return not group_hierarchy_level(g, max_level).is_within


# ---------------------------------------------------------------------------
# the assembled report


@dataclass
class ClassificationReport:
    name: str
    order: int
    projective_order: int
    lift: str
    irreducible: bool
    entanglement: str | None
    shape: str | None
    delta_order: int | None
    character_ring: str | None
    hierarchy_level: int | None
    hierarchy_bound: int
    frame_potentials: dict
    perfect: bool
    contains_pauli: bool
    fingerprint: GroupFingerprint

    def to_json(self):
        return {
            "name": self.name,
            "order": self.order,
            "projective_order": self.projective_order,
            "lift": self.lift,
            "irreducible": self.irreducible,
            "entanglement": self.entanglement,
            "shape": self.shape,
            "delta_order": self.delta_order,
            "character_ring": self.character_ring,
            "hierarchy_level": (self.hierarchy_level
                                if self.hierarchy_level is not None
                                else "not within level <= %d" % self.hierarchy_bound),
            "frame_potentials": {("t%d" % t): str(v)
                                 for t, v in sorted(self.frame_potentials.items())},
            "perfect": self.perfect,
            "contains_pauli": self.contains_pauli,
            "fingerprint": self.fingerprint.to_json(),
        }


def classification_report(g, name="", max_level=4):
    """Run every classifier on a closed group."""
    shape = delta_order = None
    entanglement = None
    potentials = {}
    if g.dim == 4:
        ms = monomial_shape(g)
        if ms is not None:
            shape, delta = ms
            shape = shape.tag
            delta_order = delta.order
        entanglement = entanglement_class(g).value
        potentials = {t: frame_potential(g, t) for t in (1, 2, 3)}
    ring = character_ring(g)
    level = group_hierarchy_level(g, max_level)
    return ClassificationReport(
        name=name,
        order=g.order,
        projective_order=g.projective_order,
        lift=str(g.lift_class()),
        irreducible=is_irreducible(g),
        entanglement=entanglement,
        shape=shape,
        delta_order=delta_order,
        character_ring=ring.label or str(ring),
        hierarchy_level=level.level,
        hierarchy_bound=max_level,
        frame_potentials=potentials,
        perfect=g.is_perfect,
        contains_pauli=contains_pauli_group(g) if g.dim == 4 else
        pauli_group(2).is_subgroup_of(g),
        fingerprint=g.fingerprint(),
    )
