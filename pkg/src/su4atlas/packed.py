"""Fixed-conductor integer packing of cyclotomic matrices.

Group closures run over one field Q(zeta_N) (N = lcm of the generators'
entry conductors).  A matrix is a dim*dim*d int64 coefficient block over
the power basis together with one positive integer denominator, kept
canonical (content coprime to the denominator), so equal matrices have
identical bytes and dedup is a hash lookup.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cyclo import Cyclotomic, _phi, reduction_table
from .linal import GateMatrix


class PackedOverflow(ArithmeticError):
    """Coefficients left the safe int64 window; conductor too wild."""


# canonical coefficients stay tiny for unitary matrices; one product step
# can then never overflow int64
_COEFF_LIMIT = 1 << 26


@lru_cache(maxsize=None)
def field(conductor):
    return PackedField(conductor)


class PackedField:
    """Packing context for one conductor."""

    def __init__(self, conductor):
        self.n = conductor
        self.d = _phi(conductor)
        red = np.array(reduction_table(conductor), dtype=np.int64)
        if red.size and abs(red).max() >= _COEFF_LIMIT:
            raise PackedOverflow("reduction table too large for conductor %d" % conductor)
        self.redtab = red
        # row t (0 <= t <= 2d-2): coordinates of x^t after reduction
        conv = np.zeros((2 * self.d - 1, self.d), dtype=np.int64)
        for t in range(2 * self.d - 1):
            conv[t] = red[t % conductor]
        self.convred = conv
        # complex conjugation as a linear map on coordinates
        cm = np.zeros((self.d, self.d), dtype=np.int64)
        for k in range(self.d):
            cm[k] = red[(conductor - k) % conductor]
        self.conjmat = cm

    # -- value packing -------------------------------------------------------

    def value_coords(self, value):
        if self.n % value.conductor:
            raise ValueError("value of conductor %d not in Q(zeta_%d)"
                             % (value.conductor, self.n))
        return value.dense(self.n)

    def pack_matrices(self, mats):
        """Pack GateMatrix list -> (coeffs (n, dim, dim, d) int64, dens (n,))."""
        dim = mats[0].dim
        out = np.zeros((len(mats), dim, dim, self.d), dtype=np.int64)
        dens = np.ones(len(mats), dtype=np.int64)
        for q, m in enumerate(mats):
            if m.dim != dim:
                raise ValueError("mixed dimensions in packing")
            rows = [[self.value_coords(e) for e in row] for row in m.entries]
            den = 1
            for row in rows:
                for coords in row:
                    for c in coords:
                        den = den * c.denominator // math.gcd(den, c.denominator)
            for i in range(dim):
                for j in range(dim):
                    for k, c in enumerate(rows[i][j]):
                        out[q, i, j, k] = int(c * den)
            dens[q] = den
        return canonicalize(out, dens)

    def pack_vectors(self, vecs):
        """Pack a list of Cyclotomic column vectors -> ((n, dim, d), dens)."""
        dim = len(vecs[0])
        out = np.zeros((len(vecs), dim, self.d), dtype=np.int64)
        dens = np.ones(len(vecs), dtype=np.int64)
        for q, v in enumerate(vecs):
            coords = [self.value_coords(e) for e in v]
            den = 1
            for c0 in coords:
                for c in c0:
                    den = den * c.denominator // math.gcd(den, c.denominator)
            for i in range(dim):
                for k, c in enumerate(coords[i]):
                    out[q, i, k] = int(c * den)
            dens[q] = den
        return canonicalize(out, dens)

    def unpack_matrix(self, coeffs, den):
        dim = coeffs.shape[0]
        den = int(den)
        rows = []
        for i in range(dim):
            row = []
            for j in range(dim):
                row.append(Cyclotomic(self.n, {k: Fraction(int(c), den)
                                               for k, c in enumerate(coeffs[i, j]) if c}))
            rows.append(row)
        return GateMatrix(rows)

    def unpack_value(self, coords, den):
        return Cyclotomic(self.n, {k: Fraction(int(c), int(den))
                                   for k, c in enumerate(coords) if c})

    def embed_from(self, other, coeffs):
        """Re-express coefficient blocks from a subfield packing (other.n | self.n)."""
        if self.n % other.n:
            raise ValueError("conductor %d does not divide %d" % (other.n, self.n))
        step = self.n // other.n
        emb = np.zeros((other.d, self.d), dtype=np.int64)
        for k in range(other.d):
            emb[k] = self.redtab[(k * step) % self.n]
        return np.tensordot(coeffs, emb, axes=([-1], [0]))


def canonicalize(coeffs, dens):
    """Divide out the content so gcd(coeffs, den) = 1; overflow guard."""
    flat = coeffs.reshape(coeffs.shape[0], -1)
    g = np.gcd.reduce(np.abs(flat), axis=1)
    g = np.gcd(g, dens)
    np.maximum(g, 1, out=g)
    mask = g > 1
    if mask.any():
        flat[mask] //= g[mask, None]
        dens = dens.copy()
        dens[mask] //= g[mask]
    if flat.size and abs(flat).max() >= _COEFF_LIMIT:
        raise PackedOverflow("packed coefficients exceeded the safe window")
    return coeffs, dens


def keys_of(coeffs, dens):
    """Canonical bytes key per packed row."""
    flat = coeffs.reshape(coeffs.shape[0], -1)
    joined = np.concatenate([flat, dens.reshape(-1, 1)], axis=1)
    joined = np.ascontiguousarray(joined, dtype="<i8")
    step = joined.shape[1] * 8
    buf = joined.tobytes()
    return [buf[i * step:(i + 1) * step] for i in range(joined.shape[0])]
