"""Quotients and the intermediate-subgroup lattice.

The quotient of a closed group by a normal subgroup is materialized as a
multiplication table on cosets (each coset labelled by its minimal
canonical key).  All subgroups of the quotient are enumerated by closing
the prime-power cyclic subgroups under pairwise joins, which reaches every
subgroup (any subgroup is the join of its prime-power cyclic subgroups);
each is pulled back to a matrix subgroup containing the normal subgroup.

Fingerprints of the pulled-back groups are computed in index space through
a faithful permutation action of the ambient group on the orbit of the
standard basis vectors, which turns one product into four array gathers
and a binary search.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field as dfield

import numpy as np

from . import backend
from .groupcalc import (ProductOracle, commutator_census, element_orders,
                        extended_fingerprint, fingerprint as _fingerprint,
                        subgroup_closure)
from .cyclo import ONE, ZERO
from .group import FiniteMatrixGroup, GroupError
from .packed import keys_of


class LatticeError(RuntimeError):
    """Resource error: quotient too large or machinery infeasible."""


DEFAULT_QUOTIENT_CAP = 2000


# ---------------------------------------------------------------------------
# faithful permutation action


class PermAction(ProductOracle):
    """Action of a closed group on the orbit union of the basis vectors.

    Elements are identified by the images of the basis-vector columns, so
    one product costs a few gathers plus one binary search; this is what
    makes fingerprinting all ~1450 lattice subgroups cheap.
    """

    def __init__(self, group):
        self.group = group
        self.n = group.order
        fld, dim = group.field, group.dim
        parent, genof = _spanning_tree(group)
        gens = group.gen_indices
        gc = np.ascontiguousarray(group.coeffs[gens])
        gd = group.dens[gens]

        seeds = []
        for i in range(dim):
            seeds.append([ONE if j == i else ZERO for j in range(dim)])
        vc, vd = fld.pack_vectors(seeds)
        index = {k: i for i, k in enumerate(keys_of(vc, vd))}
        batches_c, batches_d = [vc], [vd]
        frontier_c, frontier_d = vc, vd
        m = dim
        while frontier_c.shape[0]:
            round_c, round_d = [], []
            for gi in range(len(gens)):
                pc, pd = backend.matvec(gc[gi], gd[gi], frontier_c, frontier_d, fld)
                keys = keys_of(pc, pd)
                kept = []
                for r, k in enumerate(keys):
                    if k not in index:
                        index[k] = m
                        m += 1
                        kept.append(r)
                if kept:
                    round_c.append(pc[kept])
                    round_d.append(pd[kept])
            if not round_c:
                break
            frontier_c = np.concatenate(round_c)
            frontier_d = np.concatenate(round_d)
            batches_c.append(frontier_c)
            batches_d.append(frontier_d)
        orbit_c = np.ascontiguousarray(np.concatenate(batches_c))
        orbit_d = np.concatenate(batches_d)
        if m >= (1 << 15):
            raise LatticeError("orbit too large for the permutation action")

        genperm = np.empty((len(gens), m), dtype=np.int16)
        for gi in range(len(gens)):
            pc, pd = backend.matvec(gc[gi], gd[gi], orbit_c, orbit_d, fld)
            keys = keys_of(pc, pd)
            genperm[gi] = [index[k] for k in keys]

        perms = np.empty((self.n, m), dtype=np.int16)
        for i in _toporder(parent):
            if parent[i] < 0:
                perms[i] = np.arange(m, dtype=np.int16)
            else:
                perms[i] = perms[parent[i]][genperm[genof[i]]]
        self.perms = perms
        self.base = np.arange(dim, dtype=np.int64)

        keys = self._pack(perms[:, :dim])
        sort = np.argsort(keys, kind="stable")
        skeys = keys[sort]
        if np.unique(skeys).size != self.n:
            raise LatticeError("basis columns failed to separate the group")
        self._skeys = skeys
        self._sort = sort.astype(np.int64)
        from .linal import GateMatrix
        ic, idn = group.field.pack_matrices([GateMatrix.identity(dim)])
        self.identity = int(group.index[keys_of(ic, idn)[0]])

        inv = np.empty_like(perms)
        rows = np.arange(self.n)[:, None]
        inv[rows, perms] = np.arange(m, dtype=np.int16)[None, :]
        self._inv = self._lookup(self._pack(inv[:, :dim]))
        del inv
        self._orders = None

    def _pack(self, cols):
        out = np.zeros(cols.shape[0], dtype=np.int64)
        for j in range(cols.shape[1]):
            out = (out << 15) | cols[:, j].astype(np.int64)
        return out

    def _lookup(self, keys):
        pos = np.searchsorted(self._skeys, keys)
        if (pos >= self.n).any() or (self._skeys[pos] != keys).any():
            raise LatticeError("product left the closed group")
        return self._sort[pos]

    def prod(self, a, b):
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        if a.shape != b.shape:
            a, b = np.broadcast_arrays(a, b)
        mid = self.perms[b[:, None], self.base[None, :].astype(np.int16)]
        img = self.perms[a[:, None], mid]
        return self._lookup(self._pack(img))

    def inv(self, a):
        return self._inv[np.asarray(a, dtype=np.int64)]

    def orders(self):
        if self._orders is None:
            self._orders = element_orders(self)
        return self._orders


def _toporder(parent):
    """Element indices ordered so that parents precede children."""
    n = len(parent)
    depth = np.full(n, -1, dtype=np.int64)
    depth[parent < 0] = 0
    while (depth < 0).any():
        pending = np.flatnonzero(depth < 0)
        ready = pending[depth[parent[pending]] >= 0]
        if ready.size == 0:
            raise GroupError("broken spanning tree")
        depth[ready] = depth[parent[ready]] + 1
    return np.argsort(depth, kind="stable")


def _spanning_tree(group):
    """parent/genof arrays (x = parent * gens[genof]); rebuilt if absent."""
    if group.parent is not None and group.genof is not None \
            and len(group.parent) == group.order:
        return group.parent, group.genof
    oracle = group.oracle()
    n = group.order
    parent = np.full(n, -2, dtype=np.int32)
    genof = np.full(n, -1, dtype=np.int32)
    parent[oracle.identity] = -1
    frontier = np.array([oracle.identity], dtype=np.int64)
    gens = group.gen_indices.astype(np.int64)
    while frontier.size:
        fresh = []
        for gi, g in enumerate(gens):
            out = oracle.prod(frontier, np.full(frontier.size, g))
            new_mask = parent[out] == -2
            new = out[new_mask]
            if new.size:
                uniq, first = np.unique(new, return_index=True)
                parent[uniq] = frontier[new_mask][first]
                genof[uniq] = gi
                fresh.append(uniq)
        frontier = np.concatenate(fresh) if fresh else np.empty(0, dtype=np.int64)
    if (parent == -2).any():
        raise GroupError("generators do not generate the closed set")
    return parent, genof


# ---------------------------------------------------------------------------
# quotient construction


@dataclass
class Quotient:
    group: FiniteMatrixGroup
    action: PermAction
    normal_indices: np.ndarray      # indices of the normal subgroup in group
    coset_of: np.ndarray            # element index -> coset id
    reps: np.ndarray                # coset id -> minimal-key representative
    coset_elems: np.ndarray         # (q, |p|) element indices per coset
    table: np.ndarray               # (q, q) multiplication table
    identity_coset: int


def _indices_in(group, sub):
    """Indices of sub's elements inside group, or None if not contained."""
    out = []
    for i in range(sub.order):
        idx = group.index_of(sub.element(i))
        if idx is None:
            return None
        out.append(idx)
    return np.array(sorted(out), dtype=np.int64)


def quotient(group, normal, cap=DEFAULT_QUOTIENT_CAP, action=None):
    """Coset multiplication table of group/normal; cosets keyed by the
    lexicographically minimal canonical key they contain."""
    p_idx = _indices_in(group, normal)
    if p_idx is None:
        raise GroupError("the designated subgroup is not contained in the group")
    q = group.order // p_idx.size
    if q > cap:
        raise LatticeError("quotient of order %d exceeds the cap %d" % (q, cap))
    action = action or PermAction(group)
    # normality check on generators
    gens = group.gen_indices.astype(np.int64)
    pset = np.zeros(group.order, dtype=bool)
    pset[p_idx] = True
    for g in gens:
        garr = np.full(p_idx.size, g, dtype=np.int64)
        conj = action.prod(action.prod(garr, p_idx), action.inv(garr))
        if not pset[conj].all():
            raise GroupError("subgroup is not normal in the group")

    n = group.order
    rank = np.empty(n, dtype=np.int64)
    order_by_key = sorted(range(n), key=lambda i: _key_at(group, i))
    rank[np.array(order_by_key)] = np.arange(n)
    cosets = np.empty((p_idx.size, n), dtype=np.int64)
    for j, pj in enumerate(p_idx):
        cosets[j] = action.prod(np.full(n, pj, dtype=np.int64),
                                np.arange(n, dtype=np.int64))
    best = np.argmin(rank[cosets], axis=0)
    rep_of = cosets[best, np.arange(n)]
    reps, coset_of = np.unique(rank[rep_of], return_inverse=True)
    reps = np.array(order_by_key, dtype=np.int64)[reps]
    coset_elems = np.sort(cosets[:, reps].T, axis=1)
    qn = reps.size
    table = np.empty((qn, qn), dtype=np.int16)
    cols = np.tile(reps, qn)
    rows = np.repeat(reps, qn)
    table = coset_of[action.prod(rows, cols)].astype(np.int16).reshape(qn, qn)
    return Quotient(group, action, p_idx, coset_of.astype(np.int32),
                    reps, coset_elems, table,
                    int(coset_of[action.identity]))


def _key_at(group, i):
    flat = group.coeffs[i].reshape(-1)
    return flat.tobytes() + int(group.dens[i]).to_bytes(8, "little", signed=True)


# ---------------------------------------------------------------------------
# all subgroups of a table group


@dataclass
class TableSubgroup:
    members: np.ndarray      # sorted coset ids
    gens: tuple              # small generating set (coset ids)

    @property
    def order(self):
        return int(self.members.size)


def _table_orders(table, e):
    q = table.shape[0]
    orders = np.zeros(q, dtype=np.int64)
    orders[e] = 1
    cur = np.arange(q)
    alive = np.flatnonzero(cur != e)
    k = 1
    while alive.size:
        k += 1
        cur[alive] = table[cur[alive], alive]
        done = alive[cur[alive] == e]
        orders[done] = k
        alive = alive[cur[alive] != e]
    return orders


def _is_prime_power(n):
    if n < 2:
        return False
    p = 2
    while p * p <= n:
        if n % p == 0:
            while n % p == 0:
                n //= p
            return n == 1
        p += 1
    return True


def _small_gens(table, e, members):
    chosen = []
    have = {e}
    orders = _table_orders(table, e)
    for x in members[np.argsort(-orders[members], kind="stable")]:
        if int(x) in have:
            continue
        chosen.append(int(x))
        closed = backend.table_close(table, np.array(chosen, dtype=np.int32), [e])
        have = set(closed.tolist())
        if len(have) == members.size:
            break
    return tuple(chosen)


def all_table_subgroups(table, e):
    """Every subgroup of the table group, via join closure of the
    prime-power cyclic subgroups."""
    q = table.shape[0]
    orders = _table_orders(table, e)
    words = (q + 63) // 64

    def bits_of(members):
        b = np.zeros(words, dtype=np.uint64)
        np.bitwise_or.at(b, (members // 64).astype(np.int64),
                         np.uint64(1) << (members.astype(np.uint64) % np.uint64(64)))
        return b

    subs = []            # list[TableSubgroup]
    bitrows = np.zeros((0, words), dtype=np.uint64)
    seen = {}

    def add(members, gens):
        nonlocal bitrows
        b = bits_of(members)
        key = b.tobytes()
        if key in seen:
            return None
        seen[key] = len(subs)
        subs.append(TableSubgroup(members.astype(np.int32), tuple(gens)))
        bitrows = np.vstack([bitrows, b[None, :]])
        return len(subs) - 1

    add(np.array([e], dtype=np.int32), ())
    for x in range(q):
        if x != e and _is_prime_power(int(orders[x])):
            members = backend.table_close(table, [x], [e])
            add(members, (int(x),))

    j = 1
    while j < len(subs):
        bj = bitrows[j]
        oj = subs[j].order
        prior = bitrows[:j]
        j_in_i = ((prior & bj[None, :]) == bj[None, :]).all(axis=1)
        i_in_j = ((prior & bj[None, :]) == prior).all(axis=1)
        for i in np.flatnonzero(~(j_in_i | i_in_j)):
            gens = subs[i].gens + subs[j].gens
            members = backend.table_close(table, np.array(gens, dtype=np.int32), [e])
            if members is None:
                raise LatticeError("join closure exceeded its cap")
            k = add(members, gens)
            if k is not None and len(subs[k].gens) > 8:
                subs[k] = TableSubgroup(subs[k].members,
                                        _small_gens(table, e, subs[k].members))
        j += 1
    return subs


# ---------------------------------------------------------------------------
# enumeration of all subgroups between p and g

# The designated subgroup p need not be normal in g: the Clifford group
# conjugates det-1 Paulis to i-phase multiples.  Every subgroup p <= H <= g
# either contains the central scalars of g (then H corresponds to a
# subgroup of g/N for N = <p, scalars>), or has index 2 in H*<i> and is the
# kernel of a sign character; those kernels are classified by hyperplanes
# of the F2-space K/W, W = <p, [K,K], squares of K>.


@dataclass
class LatticeMember:
    members: np.ndarray        # sorted element indices in the ambient group
    gens: np.ndarray           # generating indices
    scalar_order: int

    @property
    def order(self):
        return int(self.members.size)


def _normal_closure(action, seed_gens, conjugators):
    genset = np.unique(np.asarray(seed_gens, dtype=np.int64))
    members = subgroup_closure(action, genset)
    flags = np.zeros(action.n, dtype=bool)
    flags[members] = True
    conj = np.concatenate([conjugators, action.inv(conjugators)])
    while True:
        extra = []
        for c in conj:
            carr = np.full(genset.size, c, dtype=np.int64)
            out = action.prod(action.prod(carr, genset), action.inv(carr))
            new = out[~flags[out]]
            if new.size:
                extra.append(np.unique(new))
        if not extra:
            return members, genset
        genset = np.unique(np.concatenate([genset] + extra))
        members = subgroup_closure(action, genset, seed=members)
        flags[:] = False
        flags[members] = True


def enumerate_lattice(group, p, cap=DEFAULT_QUOTIENT_CAP, action=None,
                      progress=None):
    """All subgroups H with p <= H <= group, as LatticeMember records."""
    action = action or PermAction(group)
    p_idx = _indices_in(group, p)
    if p_idx is None:
        raise GroupError("the designated subgroup is not contained in the group")
    pgens = _gen_indices_of(group, p)
    ggens = group.gen_indices.astype(np.int64)
    scalars = np.asarray(group.scalar_indices(), dtype=np.int64)

    nc_members, _ = _normal_closure(action, pgens, ggens)
    pset = np.zeros(group.order, dtype=bool)
    pset[p_idx] = True
    if nc_members.size == p_idx.size:
        sat_idx, sat_gens = p_idx, pgens
        split_tau = False
    else:
        sat_gens = np.unique(np.concatenate([pgens, scalars]))
        sat_idx = subgroup_closure(action, sat_gens)
        if sat_idx.size != nc_members.size or \
                not np.isin(nc_members, sat_idx).all():
            raise LatticeError(
                "normal closure of the subgroup is not its scalar saturation; "
                "unsupported lattice shape")
        if pset[scalars].sum() < 2:
            # index-2 kernels rely on -I sitting inside p already
            raise LatticeError("subgroup does not contain -I")
        split_tau = True

    sat = group._subgroup_from_indices(sat_idx, sat_gens)
    quo = quotient(group, sat, cap=cap, action=action)
    subs = all_table_subgroups(quo.table, quo.identity_coset)
    if progress:
        progress("subgroups of the saturated quotient: %d" % len(subs))

    out = []
    scalar_in = np.zeros(group.order, dtype=bool)
    scalar_in[scalars] = True
    for s in subs:
        members = np.sort(quo.coset_elems[s.members].ravel())
        gens = np.unique(np.concatenate(
            [sat_gens, quo.reps[np.array(s.gens, dtype=np.int64)]])) \
            if s.gens else np.unique(sat_gens)
        sc = int(scalar_in[members].sum())
        out.append(LatticeMember(members, gens, sc))
        if split_tau:
            out.extend(_tau_kernels(action, members, gens, p_idx, pgens,
                                    scalars, scalar_in))
        if progress and len(out) % 500 < 2:
            progress("lattice members so far: %d" % len(out))
    return out, quo


def _tau_kernels(action, kmembers, kgens, p_idx, pgens, scalars, scalar_in,
                 derived_parts=None):
    """Index-2 subgroups of K containing p but not the full scalar group."""
    from .groupcalc import derived_subgroup_indices

    if derived_parts is None:
        derived, dgens = derived_subgroup_indices(action, kgens)
    else:
        derived, dgens = derived_parts
    squares = np.unique(action.prod(kmembers, kmembers))
    from .groupcalc import incremental_closure
    w_members, small_wgens = incremental_closure(
        action, pgens, np.concatenate([dgens, squares]), seed=derived)
    wflags = np.zeros(action.n, dtype=bool)
    wflags[w_members] = True
    r_order = kmembers.size // w_members.size
    if r_order == 1:
        return []
    # K/W is elementary abelian; label every K element with F2 coordinates
    label = np.full(action.n, -1, dtype=np.int64)
    label[w_members] = 0
    basis = []
    coset_members = {0: w_members}
    labeled = w_members.size
    for x in kmembers:
        if label[x] >= 0:
            continue
        bit = 1 << len(basis)
        basis.append(int(x))
        for v, mem in list(coset_members.items()):
            newmem = action.prod(np.full(mem.size, x, dtype=np.int64), mem)
            label[newmem] = v | bit
            coset_members[v | bit] = newmem
            labeled += newmem.size
        if labeled == kmembers.size:
            break
    r = len(basis)
    ibar_any = sorted({int(label[s]) for s in scalars if label[s] > 0})
    out = []
    if not ibar_any:
        return out
    # hyperplanes u.v = 0 avoiding every scalar outside W
    small_wgens = _reduce_gens(action, wgens, w_members)
    for u in range(1, 1 << r):
        if any(bin(u & v).count("1") % 2 == 0 for v in ibar_any):
            continue
        mask = np.array([bin(u & int(label[x])).count("1") % 2 == 0
                         for x in kmembers])
        members = kmembers[mask]
        extra = [b for i, b in enumerate(basis) if not (u >> i) & 1]
        # basis vectors e_i with u_i = 1 pair up; include their differences
        ones = [i for i in range(r) if (u >> i) & 1]
        for a, b in zip(ones, ones[1:]):
            extra.append(int(action.prod(np.array([basis[a]]),
                                         np.array([basis[b]]))[0]))
        gens = np.unique(np.concatenate([small_wgens,
                                         np.array(extra, dtype=np.int64)])) \
            if extra else small_wgens
        sc = int(scalar_in[members].sum())
        out.append(LatticeMember(members, gens, sc))
    return out


def _reduce_gens(action, gens, members, cap=10):
    if gens.size <= cap:
        return gens
    chosen = []
    orders = action.orders()
    for x in members[np.argsort(-orders[members], kind="stable")]:
        chosen.append(int(x))
        closed = subgroup_closure(action, np.array(chosen, dtype=np.int64))
        if closed.size == members.size:
            return np.array(chosen, dtype=np.int64)
        if len(chosen) > 14:
            break
    return gens


def intermediate_subgroups(group, normal, cap=DEFAULT_QUOTIENT_CAP):
    """Matrix subgroups strictly between normal and group.

    Every member contains `normal`, so the unique member of its order is
    the bottom itself; both endpoints are dropped.
    """
    members, _ = enumerate_lattice(group, normal, cap=cap)
    out = []
    for m in members:
        if m.order in (group.order, normal.order):
            continue
        out.append(group._subgroup_from_indices(m.members, m.gens))
    out.sort(key=lambda h: h.order)
    return out


def _gen_indices_of(group, sub):
    idx = [group.index_of(sub.element(int(i))) for i in sub.gen_indices]
    if any(i is None for i in idx):
        raise GroupError("subgroup generators missing from the group")
    return np.array(idx, dtype=np.int64)


@dataclass
class LatticeClass:
    fingerprint: object
    count: int
    sample_order: int
    atlas_name: str | None = None


@dataclass
class LatticeReport:
    total_subgroups: int        # all subgroups between p and g, endpoints included
    strict_count: int           # strictly between, full matrix lattice
    saturated_total: int        # members containing the full scalar group
    saturated_strict: int       # the GAP / paper counting convention
    class_count: int
    classes: list
    unmatched: list
    unresolved: list
    seconds: float

    @property
    def matched_all(self):
        return not self.unmatched and not self.unresolved


def lattice_report(group, normal, atlas_groups=None, cap=DEFAULT_QUOTIENT_CAP,
                   census_cap=4096, progress=None):
    """Criterion-level lattice survey of subgroups between normal and group.

    atlas_groups maps names to closed FiniteMatrixGroup references; every
    fingerprint class is matched against them, escalating the fingerprint
    (extension, then commutator census) whenever two classes or two
    reference groups collide.
    """
    t0 = time.monotonic()
    action = PermAction(group)
    p_idx = _indices_in(group, normal)
    if p_idx is None:
        raise GroupError("the designated subgroup is not contained in the group")
    pgens = _gen_indices_of(group, normal)
    ggens = group.gen_indices.astype(np.int64)
    scalars = np.asarray(group.scalar_indices(), dtype=np.int64)
    scalar_in = np.zeros(group.order, dtype=bool)
    scalar_in[scalars] = True

    nc_members, _ = _normal_closure(action, pgens, ggens)
    split_tau = nc_members.size != p_idx.size
    if split_tau:
        sat_gens = np.unique(np.concatenate([pgens, scalars]))
        sat_idx = subgroup_closure(action, sat_gens)
        if sat_idx.size != nc_members.size or \
                not np.isin(nc_members, sat_idx).all():
            raise LatticeError("normal closure is not the scalar saturation")
        sat = group._subgroup_from_indices(sat_idx, sat_gens)
    else:
        sat, sat_gens = normal, pgens
    quo = quotient(group, sat, cap=cap, action=action)
    subs = all_table_subgroups(quo.table, quo.identity_coset)
    if progress:
        progress("saturated quotient subgroups: %d" % len(subs))

    keyed = {}
    total = saturated = 0
    for si, s in enumerate(subs):
        kmembers = np.sort(quo.coset_elems[s.members].ravel())
        kgens = np.unique(np.concatenate(
            [sat_gens, quo.reps[np.array(s.gens, dtype=np.int64)]])) \
            if s.gens else np.unique(sat_gens)
        sc = int(scalar_in[kmembers].sum())
        fp, parts = _fingerprint(action, kmembers, kgens, sc)
        keyed.setdefault(fp, []).append((kmembers, kgens, parts))
        total += 1
        saturated += 1
        if split_tau:
            derived_parts = (parts[2], parts[3])
            for m in _tau_kernels(action, kmembers, kgens, p_idx, pgens,
                                  scalars, scalar_in, derived_parts):
                fp2, parts2 = _fingerprint(action, m.members, m.gens,
                                           m.scalar_order)
                keyed.setdefault(fp2, []).append((m.members, m.gens, parts2))
                total += 1
        if progress and (si + 1) % 200 == 0:
            progress("processed %d/%d quotient subgroups (%d members)"
                     % (si + 1, len(subs), total))

    classes, unresolved = _split_classes(action, keyed, census_cap)

    unmatched = []
    if atlas_groups is not None:
        _match_classes(classes, atlas_groups, unmatched, census_cap)
    classes.sort(key=lambda c: (c.sample_order, str(c.fingerprint)))
    return LatticeReport(
        total_subgroups=total,
        strict_count=total - 2,
        saturated_total=saturated,
        saturated_strict=saturated - 2,
        classes=classes,
        class_count=len(classes),
        unmatched=unmatched,
        unresolved=unresolved,
        seconds=time.monotonic() - t0,
    )


def _split_classes(action, keyed, census_cap):
    classes, unresolved = [], []
    for fp, bucket in keyed.items():
        if len(bucket) == 1:
            classes.append(LatticeClass((fp,), 1, fp.order))
            continue
        by_ext = {}
        for members, gens, parts in bucket:
            ext = extended_fingerprint(action, members, gens, fp, parts)
            by_ext.setdefault(ext[1:], []).append((members, gens))
        for ext, items in by_ext.items():
            if len(items) == 1:
                classes.append(LatticeClass((fp, ext), 1, fp.order))
                continue
            if fp.order > census_cap:
                classes.append(LatticeClass((fp, ext), len(items), fp.order))
                unresolved.append(("census cap", fp.order, len(items)))
                continue
            by_census = {}
            for members, gens in items:
                c = commutator_census(action, members)
                by_census.setdefault(c, 0)
                by_census[c] += 1
            for census, count in by_census.items():
                classes.append(LatticeClass((fp, ext, census), count, fp.order))
    # merge classes that landed on the same final key from different buckets
    merged = {}
    for c in classes:
        if c.fingerprint in merged:
            merged[c.fingerprint].count += c.count
        else:
            merged[c.fingerprint] = c
    return list(merged.values()), unresolved


def _match_classes(classes, atlas_groups, unmatched, census_cap):
    refs = {}
    for name, g in atlas_groups.items():
        refs.setdefault(g.fingerprint(), []).append((name, g))
    for cls in classes:
        fp = cls.fingerprint[0]
        cands = refs.get(fp, [])
        if len(cands) == 1:
            cls.atlas_name = cands[0][0]
            continue
        if not cands:
            unmatched.append(cls)
            continue
        # escalate on the atlas side with the same chain
        chain = cls.fingerprint
        best = []
        for name, g in cands:
            key = [fp]
            if len(chain) >= 2:
                key.append(g.extended_fingerprint()[1:])
            if len(chain) >= 3 and g.order <= census_cap:
                key.append(g.commutator_census())
            if tuple(key) == chain:
                best.append(name)
        if len(best) == 1:
            cls.atlas_name = best[0]
        else:
            unmatched.append(cls)
