"""Finite matrix group engine: closure, orders, centers, derived subgroups,
membership, conjugacy data and fingerprints.

Closure is plain breadth-first product enumeration with canonical-key
dedup over the packed integer representation; at |C2| = 46080 over
Q(zeta_8) this is the cache-friendly choice.  A constructed group is
immutable and safe to share.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import backend
from .groupcalc import (ProductOracle, GroupFingerprint, center_indices,
                        conjugacy_classes, derived_subgroup_indices,
                        element_order_multiset, extended_fingerprint,
                        fingerprint as _fingerprint,
                        quotient_element_orders,
                        abelian_invariants_from_order_counts)
from .linal import GateMatrix
from .packed import PackedField, field, keys_of

ENGINE_VERSION = 2
DEFAULT_CAP = 200_000

SIGMA = "σ"
TAU = "τ"


class GroupError(ValueError):
    """Bad usage of the group engine."""


class ClosureCapExceeded(RuntimeError):
    """Group too large or infinite: the closure cap was hit."""


@dataclass(frozen=True)
class LiftClass:
    """Scalar subgroup of the lift: order 4 (sigma), 2 (tau) or 1 (none)."""

    scalar_subgroup_order: int
    symbol: str | None

    def __str__(self):
        return self.symbol or "1"


def _lcm(a, b):
    return a * b // math.gcd(a, b)


def closure(generators, cap=DEFAULT_CAP, cache=None, check_det=True):
    """Close a generator list under products; errors past `cap` elements."""
    gens = list(generators)
    if not gens:
        raise GroupError("need at least one generator")
    dim = gens[0].dim
    if any(g.dim != dim for g in gens):
        raise GroupError("generators must share one dimension")
    if check_det:
        from .cyclo import ONE
        for g in gens:
            if g.det() != ONE:
                raise GroupError("generator with det != 1: %r" % (g,))
    if cache is not None:
        got = cache.load(gens)
        if got is not None:
            return got
    conductor = 1
    for g in gens:
        for row in g.entries:
            for e in row:
                conductor = _lcm(conductor, e.conductor)
    fld = field(conductor)
    group = _close_packed(fld, gens, dim, cap)
    if cache is not None:
        cache.store(group)
    return group


def _close_packed(fld, gens, dim, cap):
    gcoe, gden = fld.pack_matrices(gens)
    gkeys = keys_of(gcoe, gden)
    # dedup generators, keep original order
    seen, keep = set(), []
    for i, k in enumerate(gkeys):
        if k not in seen:
            seen.add(k)
            keep.append(i)
    gcoe, gden = np.ascontiguousarray(gcoe[keep]), gden[keep]
    gkeys = [gkeys[i] for i in keep]

    icoe, iden = fld.pack_matrices([GateMatrix.identity(dim)])
    index = {keys_of(icoe, iden)[0]: 0}
    batches_c, batches_d = [icoe], [iden]
    parents, genofs = [np.array([-1], dtype=np.int32)], [np.array([-1], dtype=np.int32)]
    n = 1
    frontier_c, frontier_d = icoe, iden
    frontier_ids = np.array([0], dtype=np.int32)
    while frontier_ids.size:
        round_c, round_d, round_ids = [], [], []
        for gi in range(len(gkeys)):
            pc, pd = backend.matmul(frontier_c, frontier_d, gcoe[gi], gden[gi], fld)
            keys = keys_of(pc, pd)
            fresh = []
            for r, key in enumerate(keys):
                if key not in index:
                    index[key] = n
                    n += 1
                    fresh.append(r)
            if not fresh:
                continue
            if n > cap:
                raise ClosureCapExceeded(
                    "group too large or infinite: closure passed cap %d" % cap)
            fresh = np.array(fresh, dtype=np.int64)
            round_c.append(pc[fresh])
            round_d.append(pd[fresh])
            ids = np.arange(n - fresh.size, n, dtype=np.int32)
            round_ids.append(ids)
            parents.append(frontier_ids[fresh])
            genofs.append(np.full(fresh.size, gi, dtype=np.int32))
        if not round_c:
            break
        frontier_c = np.concatenate(round_c)
        frontier_d = np.concatenate(round_d)
        frontier_ids = np.concatenate(round_ids)
        batches_c.append(frontier_c)
        batches_d.append(frontier_d)
    coeffs = np.ascontiguousarray(np.concatenate(batches_c))
    dens = np.concatenate(batches_d)
    gen_indices = np.array([index[k] for k in gkeys], dtype=np.int32)
    return FiniteMatrixGroup(fld, gens, coeffs, dens, index, gen_indices,
                             np.concatenate(parents), np.concatenate(genofs))


class FiniteMatrixGroup:
    """A closed set of packed matrices with a canonical-key index."""

    def __init__(self, fld, generators, coeffs, dens, index, gen_indices,
                 parent=None, genof=None):
        self.field = fld
        self.generators = tuple(generators)
        self.coeffs = coeffs
        self.dens = dens
        self.index = index
        self.gen_indices = gen_indices
        self.parent = parent
        self.genof = genof
        self.dim = coeffs.shape[1]
        self._cache = {}

    # -- basics ---------------------------------------------------------------

    @property
    def order(self):
        return self.coeffs.shape[0]

    def __len__(self):
        return self.order

    def element(self, i):
        return self.field.unpack_matrix(self.coeffs[i], self.dens[i])

    def elements(self):
        for i in range(self.order):
            yield self.element(i)

    def index_of(self, m):
        """Index of a GateMatrix in this group, or None."""
        if m.dim != self.dim:
            return None
        for row in m.entries:
            for e in row:
                if self.field.n % e.conductor:
                    return None
        c, d = self.field.pack_matrices([m])
        return self.index.get(keys_of(c, d)[0])

    def __contains__(self, m):
        return self.index_of(m) is not None

    def contains_indices(self, mats):
        return all(self.index_of(m) is not None for m in mats)

    # -- comparisons ------------------------------------------------------------

    def _keys_in(self, other):
        """True if every element of self is an element of other."""
        if self.field.n == other.field.n:
            return all(k in other.index for k in self.index)
        if other.field.n % self.field.n == 0:
            coe = other.field.embed_from(self.field, self.coeffs)
            coe, dens = backend.canonicalize(np.ascontiguousarray(coe), self.dens.copy())
            return all(k in other.index for k in keys_of(coe, dens))
        return all(m in other for m in self.elements())

    def is_subgroup_of(self, other):
        return self.order <= other.order and other.order % self.order == 0 \
            and self._keys_in(other)

    def same_group(self, other):
        return self.order == other.order and self._keys_in(other)

    def is_normal_in(self, other):
        """True when `other`'s generators conjugate this subgroup into itself."""
        if not self.is_subgroup_of(other):
            return False
        mine = [self.element(i) for i in self.gen_indices]
        for g in [other.element(i) for i in other.gen_indices]:
            ga = g.adjoint()
            for p in mine:
                if (g * p * ga) not in self:
                    return False
        return True

    # -- oracle -----------------------------------------------------------------

    def oracle(self):
        if "oracle" not in self._cache:
            self._cache["oracle"] = _PackOracle(self)
        return self._cache["oracle"]

    def all_indices(self):
        return np.arange(self.order, dtype=np.int64)

    # -- scalars / lift -----------------------------------------------------------

    def scalar_indices(self):
        if "scalars" not in self._cache:
            c = self.coeffs
            n, dim = self.order, self.dim
            offmask = ~np.eye(dim, dtype=bool)
            off = c[:, offmask, :].reshape(n, -1)
            diag_ok = np.ones(n, dtype=bool)
            for i in range(1, dim):
                diag_ok &= (c[:, i, i, :] == c[:, 0, 0, :]).all(axis=1)
            flags = diag_ok & (off == 0).all(axis=1)
            self._cache["scalars"] = np.flatnonzero(flags).astype(np.int64)
        return self._cache["scalars"]

    def lift_class(self):
        k = int(self.scalar_indices().size)
        if k == 4:
            return LiftClass(4, SIGMA)
        if k == 2:
            return LiftClass(2, TAU)
        if k == 1:
            return LiftClass(1, None)
        raise GroupError("scalar subgroup of unexpected order %d" % k)

    @property
    def projective_order(self):
        return self.order // int(self.scalar_indices().size)

    # -- invariants ------------------------------------------------------------------

    def element_orders(self):
        return self.oracle().orders()

    def element_order_multiset(self):
        return element_order_multiset(self.oracle(), self.all_indices())

    def conjugacy_data(self):
        if "conj" not in self._cache:
            self._cache["conj"] = conjugacy_classes(
                self.oracle(), self.all_indices(), self.gen_indices.astype(np.int64))
        return self._cache["conj"]

    def conjugacy_class_sizes(self):
        _, sizes = self.conjugacy_data()
        vals, cnts = np.unique(sizes, return_counts=True)
        return tuple((int(v), int(c)) for v, c in zip(vals, cnts))

    def center(self):
        if "center" not in self._cache:
            idx = center_indices(self.oracle(), self.all_indices(),
                                 self.gen_indices.astype(np.int64))
            self._cache["center"] = self._subgroup_from_indices(idx)
        return self._cache["center"]

    def derived_subgroup(self):
        if "derived" not in self._cache:
            members, genset = derived_subgroup_indices(
                self.oracle(), self.gen_indices.astype(np.int64))
            self._cache["derived"] = self._subgroup_from_indices(members, genset)
        return self._cache["derived"]

    @property
    def is_perfect(self):
        return self.derived_subgroup().order == self.order

    def abelianization(self):
        """Invariant factors of the quotient by the derived subgroup."""
        derived = self.derived_subgroup()
        dmembers = np.array([self.index[k] for k in derived.index], dtype=np.int64)
        counts = quotient_element_orders(self.oracle(), self.all_indices(), dmembers)
        return abelian_invariants_from_order_counts(counts)

    def fingerprint(self):
        if "fingerprint" not in self._cache:
            fp, parts = _fingerprint(self.oracle(), self.all_indices(),
                                     self.gen_indices.astype(np.int64),
                                     self.scalar_indices().size)
            self._cache["fingerprint"] = fp
            self._cache["fingerprint_parts"] = parts
        return self._cache["fingerprint"]

    def extended_fingerprint(self):
        base = self.fingerprint()
        return extended_fingerprint(self.oracle(), self.all_indices(),
                                    self.gen_indices.astype(np.int64),
                                    base, self._cache["fingerprint_parts"])

    def commutator_census(self):
        from .groupcalc import commutator_census
        if "census" not in self._cache:
            self._cache["census"] = commutator_census(self.oracle(),
                                                      self.all_indices())
        return self._cache["census"]

    # -- subgroup construction ------------------------------------------------------

    def _subgroup_from_indices(self, idx, gen_idx=None):
        idx = np.sort(np.asarray(idx, dtype=np.int64))
        coeffs = np.ascontiguousarray(self.coeffs[idx])
        dens = self.dens[idx].copy()
        keys = keys_of(coeffs, dens)
        index = {k: i for i, k in enumerate(keys)}
        if gen_idx is None:
            gen_idx = self._small_generating_set(idx)
        pos = {int(g): i for i, g in enumerate(idx)}
        local_gens = np.array([pos[int(g)] for g in gen_idx], dtype=np.int32)
        gens = [self.element(int(g)) for g in gen_idx]
        return FiniteMatrixGroup(self.field, gens, coeffs, dens, index, local_gens)

    def _small_generating_set(self, idx):
        from .groupcalc import subgroup_closure
        oracle = self.oracle()
        chosen = []
        have = np.zeros(self.order, dtype=bool)
        have[oracle.identity] = True
        members = None
        for x in idx:
            if have[x]:
                continue
            chosen.append(int(x))
            members = subgroup_closure(oracle, np.array(chosen, dtype=np.int64))
            have[:] = False
            have[members] = True
            if members.size == idx.size:
                break
        return np.array(chosen if chosen else [oracle.identity], dtype=np.int64)

    # -- traces ---------------------------------------------------------------------

    def packed_traces(self):
        """(coords (n, d) int64, dens) of all element traces."""
        tr = self.coeffs[:, 0, 0, :].astype(np.int64).copy()
        for i in range(1, self.dim):
            tr += self.coeffs[:, i, i, :]
        return tr, self.dens

    def trace_values(self):
        """Distinct traces as canonical Cyclotomic values."""
        tr, dens = self.packed_traces()
        joined = np.concatenate([tr, dens.reshape(-1, 1)], axis=1)
        uniq = np.unique(joined, axis=0)
        return [self.field.unpack_value(row[:-1], row[-1]) for row in uniq]


class _PackOracle(ProductOracle):
    """Products on element indices via packed multiplication + key lookup."""

    _CHUNK = 1 << 14

    def __init__(self, group):
        self.g = group
        self.n = group.order
        ic, idn = group.field.pack_matrices([GateMatrix.identity(group.dim)])
        self.identity = group.index[keys_of(ic, idn)[0]]
        self._inv = None
        self._orders = None

    def prod(self, a, b):
        a = np.atleast_1d(np.asarray(a, dtype=np.int64))
        b = np.atleast_1d(np.asarray(b, dtype=np.int64))
        if a.size != b.size:
            a, b = np.broadcast_arrays(a, b)
        out = np.empty(a.size, dtype=np.int64)
        g, fld, index = self.g, self.g.field, self.g.index
        for lo in range(0, a.size, self._CHUNK):
            hi = min(lo + self._CHUNK, a.size)
            pc, pd = backend.matmul(g.coeffs[a[lo:hi]], g.dens[a[lo:hi]],
                                    g.coeffs[b[lo:hi]], g.dens[b[lo:hi]],
                                    fld, pairs=True)
            keys = keys_of(pc, pd)
            for i, k in enumerate(keys):
                out[lo + i] = index[k]
        return out

    def inv(self, a):
        if self._inv is None:
            g = self.g
            ac, ad = backend.adjoint(g.coeffs, g.dens, g.field)
            keys = keys_of(ac, ad)
            self._inv = np.array([g.index[k] for k in keys], dtype=np.int64)
        return self._inv[np.asarray(a, dtype=np.int64)]

    def orders(self):
        if self._orders is None:
            from .groupcalc import element_orders
            self._orders = element_orders(self)
        return self._orders


# ---------------------------------------------------------------------------
# content-addressed disk cache


class GroupCache:
    """Write-through closure cache keyed by generator hash + engine version."""

    CACHE_VERSION = 1

    def __init__(self, directory):
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    def key_for(self, generators):
        h = hashlib.sha256()
        h.update(b"su4atlas-closure-v%d" % ENGINE_VERSION)
        for k in sorted(g.key() for g in generators):
            h.update(k.encode())
            h.update(b";")
        return h.hexdigest()

    def _paths(self, key):
        return (os.path.join(self.directory, key + ".npz"),
                os.path.join(self.directory, key + ".json"))

    def load(self, generators):
        npz_path, meta_path = self._paths(self.key_for(generators))
        if not (os.path.exists(npz_path) and os.path.exists(meta_path)):
            return None
        with open(meta_path) as fh:
            meta = json.load(fh)
        if meta.get("cache_version") != self.CACHE_VERSION or \
                meta.get("engine_version") != ENGINE_VERSION:
            return None
        data = np.load(npz_path)
        fld = field(int(meta["conductor"]))
        coeffs = data["coeffs"]
        dens = data["dens"]
        index = {k: i for i, k in enumerate(keys_of(coeffs, dens))}
        return FiniteMatrixGroup(fld, generators, coeffs, dens, index,
                                 data["gen_indices"],
                                 data["parent"], data["genof"])

    def store(self, group):
        key = self.key_for(group.generators)
        npz_path, meta_path = self._paths(key)
        np.savez_compressed(npz_path, coeffs=group.coeffs, dens=group.dens,
                            gen_indices=group.gen_indices,
                            parent=group.parent if group.parent is not None
                            else np.empty(0, np.int32),
                            genof=group.genof if group.genof is not None
                            else np.empty(0, np.int32))
        meta = {
            "cache_version": self.CACHE_VERSION,
            "engine_version": ENGINE_VERSION,
            "conductor": group.field.n,
            "order": group.order,
            "projective_order": group.projective_order,
            "lift": str(group.lift_class()),
        }
        with open(meta_path, "w") as fh:
            json.dump(meta, fh, indent=1, sort_keys=True)
        return key

    def clear(self):
        removed = 0
        for name in os.listdir(self.directory):
            if name.endswith((".npz", ".json")):
                os.remove(os.path.join(self.directory, name))
                removed += 1
        return removed

    def info(self):
        entries = []
        for name in sorted(os.listdir(self.directory)):
            if name.endswith(".json"):
                with open(os.path.join(self.directory, name)) as fh:
                    meta = json.load(fh)
                entries.append({"key": name[:-5], **meta})
        return entries


def default_cache_dir():
    env = os.environ.get("SU4ATLAS_CACHE")
    if env:
        return env
    return os.path.join(os.path.expanduser("~"), ".cache", "su4atlas")
