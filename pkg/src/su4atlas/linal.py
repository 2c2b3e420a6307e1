"""Exact dense 2x2 / 4x4 matrices over Cyclotomic, plus the structural
predicates the classification needs (scalarity, monomial decomposition,
tensor factorizability by the realignment criterion)."""

from __future__ import annotations

import itertools
from fractions import Fraction

from .cyclo import Cyclotomic, CycloError, ZERO, ONE, _coerce


class LinalError(ValueError):
    """Usage error: dimension mismatch or malformed matrix."""


class GateMatrix:
    """Immutable dim x dim matrix of Cyclotomic entries, dim in {2, 4}.

    Entries are canonical, so structural equality is semantic equality and
    the row-major concatenation of entry serializations is a canonical key.
    """

    __slots__ = ("dim", "entries", "_hash")

    def __init__(self, entries):
        entries = tuple(tuple(_entry(x) for x in row) for row in entries)
        dim = len(entries)
        if dim not in (2, 4) or any(len(row) != dim for row in entries):
            raise LinalError("expected a square 2x2 or 4x4 matrix")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "_hash", hash(entries))

    def __setattr__(self, *a):
        raise AttributeError("GateMatrix values are immutable")

    @staticmethod
    def identity(dim):
        return GateMatrix([[ONE if i == j else ZERO for j in range(dim)]
                           for i in range(dim)])

    # -- ring operations ---------------------------------------------------

    def __mul__(self, other):
        if isinstance(other, GateMatrix):
            if self.dim != other.dim:
                raise LinalError("dimension mismatch: %d vs %d" % (self.dim, other.dim))
            n = self.dim
            a, b = self.entries, other.entries
            return GateMatrix([[_dot(a[i], [b[k][j] for k in range(n)])
                                for j in range(n)] for i in range(n)])
        return self.scale(other)

    def __add__(self, other):
        if not isinstance(other, GateMatrix) or self.dim != other.dim:
            raise LinalError("matrix addition needs equal dimensions")
        return GateMatrix([[a + b for a, b in zip(ra, rb)]
                           for ra, rb in zip(self.entries, other.entries)])

    def scale(self, x):
        x = _entry(x)
        return GateMatrix([[e * x for e in row] for row in self.entries])

    __rmul__ = scale

    def __pow__(self, e):
        if e < 0:
            return self.adjoint() ** (-e)
        out = GateMatrix.identity(self.dim)
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def adjoint(self):
        n = self.dim
        return GateMatrix([[self.entries[j][i].conj() for j in range(n)]
                           for i in range(n)])

    def kron(self, other):
        if self.dim != 2 or other.dim != 2:
            raise LinalError("kron combines two 2x2 matrices into one 4x4")
        a, b = self.entries, other.entries
        return GateMatrix([[a[i][j] * b[k][l] for j in range(2) for l in range(2)]
                           for i in range(2) for k in range(2)])

    def trace(self):
        t = ZERO
        for i in range(self.dim):
            t = t + self.entries[i][i]
        return t

    def det(self):
        """Determinant by Leibniz expansion; fine for dim <= 4."""
        n = self.dim
        total = ZERO
        for perm in itertools.permutations(range(n)):
            sign = _perm_sign(perm)
            term = self.entries[0][perm[0]]
            for i in range(1, n):
                term = term * self.entries[i][perm[i]]
            total = total + (term if sign > 0 else -term)
        return total

    # -- predicates ---------------------------------------------------------

    def is_scalar(self):
        """The scalar lambda with self == lambda * I, or None."""
        lam = self.entries[0][0]
        for i in range(self.dim):
            for j in range(self.dim):
                want = lam if i == j else ZERO
                if self.entries[i][j] != want:
                    return None
        return lam

    def monomial_parts(self):
        """(perm, diag) with self == P(perm) * diag, or None if not monomial.

        perm maps column j to the row holding its nonzero entry, so
        P(perm)[i][j] = 1 iff i == perm[j]; diag[j] is that entry.
        """
        n = self.dim
        perm = [None] * n
        diag = [None] * n
        for j in range(n):
            hits = [i for i in range(n) if self.entries[i][j]]
            if len(hits) != 1:
                return None
            perm[j] = hits[0]
            diag[j] = self.entries[hits[0]][j]
        if sorted(perm) != list(range(n)):
            return None
        d = GateMatrix([[diag[j] if i == j else ZERO for j in range(n)]
                        for i in range(n)])
        return tuple(perm), d

    def is_diagonal(self):
        mp = self.monomial_parts()
        return mp is not None and mp[0] == tuple(range(self.dim))

    def tensor_factorizable(self):
        """True iff self = A (x) B up to scalar, by the realignment test.

        Reshape into the 4x4 matrix R[(i,j), (k,l)] = M[(i,k), (j,l)] of
        2x2-block entries; self factorizes iff R has rank 1, decided by the
        vanishing of all 36 exact 2x2 minors.
        """
        if self.dim != 4:
            raise LinalError("tensor factorization test needs a 4x4 matrix")
        m = self.entries
        r = [[m[2 * i + k][2 * j + l] for k in range(2) for l in range(2)]
             for i in range(2) for j in range(2)]
        for r1, r2 in itertools.combinations(range(4), 2):
            for c1, c2 in itertools.combinations(range(4), 2):
                if r[r1][c1] * r[r2][c2] != r[r1][c2] * r[r2][c1]:
                    return False
        return True

    # -- structure -----------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, GateMatrix) and self.dim == other.dim
                and self.entries == other.entries)

    def __hash__(self):
        return self._hash

    def key(self):
        """Canonical text key: row-major entry serializations."""
        return ";".join(e.to_string() for row in self.entries for e in row)

    def __repr__(self):
        return "GateMatrix(%d)[%s]" % (self.dim, self.key())

    def approx(self):
        """complex list-of-lists rendering, debug only."""
        return [[complex(e) for e in row] for row in self.entries]

    # -- JSON schema ----------------------------------------------------------

    def to_json(self):
        return {"dim": self.dim,
                "entries": [[e.to_string() for e in row] for row in self.entries]}

    @staticmethod
    def from_json(obj):
        if set(obj) != {"dim", "entries"}:
            raise LinalError("bad matrix object: %r" % (obj,))
        m = GateMatrix([[Cyclotomic.from_string(s) for s in row]
                        for row in obj["entries"]])
        if m.dim != obj["dim"]:
            raise LinalError("dim field does not match entries")
        return m


def _entry(x):
    if isinstance(x, Cyclotomic):
        return x
    c = _coerce(x)
    if c is NotImplemented:
        raise LinalError("cannot use %r as a matrix entry" % (x,))
    return c


def _dot(row, col):
    t = ZERO
    for a, b in zip(row, col):
        if a and b:
            t = t + a * b
    return t


def _perm_sign(perm):
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def kron(a, b):
    return a.kron(b)


def permutation_matrix(perm):
    """P with P[perm[j]][j] = 1; P * diag reassembles a monomial matrix."""
    n = len(perm)
    return GateMatrix([[ONE if i == perm[j] else ZERO for j in range(n)]
                       for i in range(n)])
