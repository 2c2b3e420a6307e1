"""Index-space group algorithms over a product oracle.

Everything here works on element indices of some ambient closed group G,
through an oracle providing batched products, inverses and element orders.
The same algorithms serve packed matrix groups and the permutation-indexed
quotient machinery of the subgroup lattice, and they are the separating
tool behind GroupFingerprint.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ProductOracle:
    """Batched products on element indices of a fixed ambient group."""

    n = 0
    identity = 0

    def prod(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def orders(self):
        raise NotImplementedError


def _as_idx(x):
    return np.atleast_1d(np.asarray(x, dtype=np.int64))


def subgroup_closure(oracle, gens, seed=None):
    """Sorted indices of <gens> (times the subgroup spanned by seed)."""
    gens = np.unique(_as_idx(gens))
    members = np.zeros(oracle.n, dtype=bool)
    members[oracle.identity] = True
    if seed is not None:
        members[_as_idx(seed)] = True
    frontier = np.flatnonzero(members)
    while frontier.size:
        out = oracle.prod(np.repeat(frontier, gens.size),
                          np.tile(gens, frontier.size))
        new = out[~members[out]]
        if new.size:
            new = np.unique(new)
            members[new] = True
        frontier = new
    return np.flatnonzero(members)


def conjugacy_classes(oracle, members, gens):
    """Classes of the group with the given members under its generators.

    Returns (reps, sizes) arrays; members must be closed and gens generate
    (conjugating by the generators alone reaches the whole class).
    """
    gens = np.unique(_as_idx(gens))
    ginv = oracle.inv(gens)
    seen = np.zeros(oracle.n, dtype=bool)
    reps, sizes = [], []
    for seed in members:
        if seen[seed]:
            continue
        seen[seed] = True
        size = 1
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            a = np.repeat(gens, frontier.size)
            b = np.tile(frontier, gens.size)
            out = oracle.prod(oracle.prod(a, b),
                              np.repeat(ginv, frontier.size))
            new = out[~seen[out]]
            if new.size:
                new = np.unique(new)
                seen[new] = True
                size += new.size
            frontier = new
        reps.append(int(seed))
        sizes.append(size)
    return np.array(reps), np.array(sizes)


def center_indices(oracle, members, gens):
    gens = _as_idx(gens)
    a = np.repeat(members, gens.size)
    b = np.tile(gens, members.size)
    ok = (oracle.prod(a, b) == oracle.prod(b, a)).reshape(members.size,
                                                          gens.size)
    return members[ok.all(axis=1)]


def incremental_closure(oracle, base_gens, extras, seed=None):
    """Closure of <base_gens, extras> keeping the generating set small.

    Extras are folded in one at a time and only when not already reached,
    so the working generating set stays logarithmic in the group order.
    Returns (members, generating set).
    """
    gens = list(np.unique(_as_idx(base_gens)).tolist()) if len(base_gens) else []
    members = subgroup_closure(oracle, gens or [oracle.identity], seed=seed)
    flags = np.zeros(oracle.n, dtype=bool)
    flags[members] = True
    extras = _as_idx(extras)
    while True:
        remaining = extras[~flags[extras]]
        if not remaining.size:
            return members, np.array(gens if gens else [oracle.identity],
                                     dtype=np.int64)
        gens.append(int(remaining[0]))
        members = subgroup_closure(oracle, gens, seed=members)
        flags[:] = False
        flags[members] = True


def commutators(oracle, gens):
    gens = _as_idx(gens)
    ginv = oracle.inv(gens)
    k = gens.size
    a = np.repeat(gens, k)
    b = np.tile(gens, k)
    ai = np.repeat(ginv, k)
    bi = np.tile(ginv, k)
    out = oracle.prod(oracle.prod(oracle.prod(a, b), ai), bi)
    out = np.unique(out)
    return out[out != oracle.identity]


def derived_subgroup_indices(oracle, gens):
    """(member indices, generating set) of the derived subgroup of <gens>.

    Normal closure of the generator-pair commutators under conjugation by
    the generators and their inverses, with a small working generating set.
    """
    gens = _as_idx(gens)
    ginv = oracle.inv(gens)
    conjugators = np.concatenate([gens, ginv])
    seeds = commutators(oracle, gens)
    if seeds.size == 0:
        return np.array([oracle.identity], dtype=np.int64), seeds
    members, genset = incremental_closure(oracle, [], seeds)
    flags = np.zeros(oracle.n, dtype=bool)
    flags[members] = True
    while True:
        a = np.repeat(conjugators, genset.size)
        out = oracle.prod(oracle.prod(a, np.tile(genset, conjugators.size)),
                          oracle.inv(a))
        new = np.unique(out[~flags[out]])
        if not new.size:
            return members, genset
        members, genset = incremental_closure(oracle, genset, new,
                                              seed=members)
        flags[:] = False
        flags[members] = True


def quotient_element_orders(oracle, members, normal_members):
    """Order of each coset in members/<normal_members> -> {order: count}.

    The quotient must be abelian for the caller's use, but the counting is
    generic.  Cost is one product per group element plus a batched power
    loop over coset representatives.
    """
    nflags = np.zeros(oracle.n, dtype=bool)
    nflags[normal_members] = True
    covered = np.zeros(oracle.n, dtype=bool)
    reps = []
    for x in members:
        if covered[x]:
            continue
        coset = oracle.prod(np.full(normal_members.size, x, dtype=np.int64),
                            normal_members)
        covered[coset] = True
        reps.append(int(x))
    reps = np.array(reps, dtype=np.int64)
    orders = np.ones(reps.size, dtype=np.int64)
    cur = reps.copy()
    alive = np.flatnonzero(~nflags[cur])
    k = 1
    while alive.size:
        k += 1
        cur[alive] = oracle.prod(cur[alive], reps[alive])
        done = nflags[cur[alive]]
        orders[alive[done]] = k
        alive = alive[~done]
    counts = {}
    for o in orders.tolist():
        counts[o] = counts.get(o, 0) + 1
    return counts


def abelian_invariants_from_order_counts(counts):
    """Invariant factors of a finite abelian group from its order census."""
    total = sum(counts.values())
    if total == 1:
        return ()
    primes = set()
    for o in counts:
        k, d = o, 2
        while d * d <= k:
            if k % d == 0:
                primes.add(d)
                while k % d == 0:
                    k //= d
            d += 1
        if k > 1:
            primes.add(k)
    per_prime = {}
    for p in sorted(primes):
        # f_j = number of elements of order dividing p^j
        maxe = 0
        o = max(counts)
        while p ** (maxe + 1) <= o:
            maxe += 1
        fs = []
        for j in range(maxe + 2):
            f = sum(c for o, c in counts.items() if _divides_prime_power(o, p, j))
            fs.append(f)
        lambdas = []
        for j in range(1, len(fs)):
            if fs[j] == fs[j - 1]:
                break
            ratio = fs[j] // fs[j - 1]
            e = 0
            while ratio % p == 0:
                ratio //= p
                e += 1
            lambdas.append(e)  # number of cyclic p-factors of exponent >= j
        # conjugate partition
        exps = []
        for i in range(1, (lambdas[0] if lambdas else 0) + 1):
            exps.append(sum(1 for lam in lambdas if lam >= i))
        per_prime[p] = sorted(exps, reverse=True)
    width = max(len(v) for v in per_prime.values())
    factors = []
    for k in range(width):
        f = 1
        for p, exps in per_prime.items():
            if k < len(exps):
                f *= p ** exps[k]
        factors.append(f)
    factors.sort()
    assert math.prod(factors) == total
    return tuple(factors)


def element_order_multiset(oracle, members):
    orders = oracle.orders()[members]
    vals, cnts = np.unique(orders, return_counts=True)
    return tuple((int(v), int(c)) for v, c in zip(vals, cnts))


def element_orders(oracle):
    """Multiplicative order of every ambient element, by batched powers."""
    n = oracle.n
    orders = np.zeros(n, dtype=np.int64)
    cur = np.arange(n, dtype=np.int64)
    base = np.arange(n, dtype=np.int64)
    orders[cur == oracle.identity] = 1
    alive = np.flatnonzero(cur != oracle.identity)
    k = 1
    while alive.size:
        k += 1
        if k > 512:
            raise RuntimeError("element order exceeded sanity bound")
        cur[alive] = oracle.prod(cur[alive], base[alive])
        done = alive[cur[alive] == oracle.identity]
        orders[done] = k
        alive = alive[cur[alive] != oracle.identity]
    return orders


def commutator_census(oracle, members, chunk=1 << 16):
    """Multiset of (element order, #{(x,y) in H^2 : [x,y] = g}) over g in H.

    An isomorphism invariant strictly finer than the character-level data;
    used as the last fingerprint-escalation stage (it separates the two
    order-256 monomial D4 groups that agree on everything cheaper).
    """
    members = np.asarray(members, dtype=np.int64)
    h = members.size
    counts = np.zeros(oracle.n, dtype=np.int64)
    a = np.repeat(members, h)
    b = np.tile(members, h)
    for lo in range(0, a.size, chunk):
        hi = min(lo + chunk, a.size)
        aa, bb = a[lo:hi], b[lo:hi]
        comm = oracle.prod(oracle.prod(oracle.prod(aa, bb), oracle.inv(aa)),
                           oracle.inv(bb))
        counts += np.bincount(comm, minlength=oracle.n)
    orders = oracle.orders()
    pairs = {}
    for g in members:
        key = (int(orders[g]), int(counts[g]))
        pairs[key] = pairs.get(key, 0) + 1
    return tuple(sorted(pairs.items()))


@dataclass(frozen=True)
class GroupFingerprint:
    """Isomorphism-invariant separator tuple.

    Equal fingerprints are necessary (not sufficient) for isomorphism; the
    extension fields are only compared when the base tuple collides.
    """

    order: int
    element_orders: tuple
    class_sizes: tuple
    center_order: int
    derived_order: int
    abelian_invariants: tuple
    scalar_order: int

    def to_json(self):
        return {
            "order": self.order,
            "element_orders": [list(x) for x in self.element_orders],
            "class_sizes": [list(x) for x in self.class_sizes],
            "center_order": self.center_order,
            "derived_order": self.derived_order,
            "abelian_invariants": list(self.abelian_invariants),
            "scalar_order": self.scalar_order,
        }


def fingerprint(oracle, members, gens, scalar_order):
    """Assemble the GroupFingerprint of the subgroup with these members."""
    reps, sizes = conjugacy_classes(oracle, members, gens)
    vals, cnts = np.unique(sizes, return_counts=True)
    class_sizes = tuple((int(v), int(c)) for v, c in zip(vals, cnts))
    center_order = int(sizes[sizes == 1].size)
    derived, dgens = derived_subgroup_indices(oracle, gens)
    counts = quotient_element_orders(oracle, members, derived)
    invariants = abelian_invariants_from_order_counts(counts)
    return GroupFingerprint(
        order=int(members.size),
        element_orders=element_order_multiset(oracle, members),
        class_sizes=class_sizes,
        center_order=center_order,
        derived_order=int(derived.size),
        abelian_invariants=invariants,
        scalar_order=int(scalar_order),
    ), (reps, sizes, derived, dgens)


def extended_fingerprint(oracle, members, gens, base, parts):
    """Collision breaker: derived series orders and order/class histogram."""
    reps, sizes, derived, dgens = parts
    series = [int(members.size), int(derived.size)]
    cur_members, cur_gens = derived, dgens
    while series[-1] > 1:
        nxt, ngens = derived_subgroup_indices(oracle, cur_gens)
        if nxt.size == series[-1]:
            break
        series.append(int(nxt.size))
        cur_members, cur_gens = nxt, ngens
    orders = oracle.orders()
    hist = {}
    for r, s in zip(reps, sizes):
        key = (int(orders[r]), int(s))
        hist[key] = hist.get(key, 0) + 1
    histogram = tuple(sorted((o, s, c) for (o, s), c in hist.items()))
    return (base, tuple(series), histogram)


def _divides_prime_power(o, p, j):
    target = p ** j
    return target % o == 0 if o <= target else False
