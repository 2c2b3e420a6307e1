"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Values are stored on the power basis 1, z, ..., z^(phi(N)-1) of Q(zeta_N)
with Fraction coefficients, where z = exp(2*pi*i/N).  The power basis is an
integral basis of the ring of integers, so algebraic integers have integer
coordinates and equality of values is equality of representations once the
conductor is minimal.  Every value keeps its conductor minimal: no proper
divisor of N supports the same value, and N is never 2 mod 4.

The only irrationalities occurring in the gate atlas are roots of unity and
the named square roots sqrt(2), sqrt(3), sqrt(5), sqrt(-3), sqrt(-7), all of
which are explicit sums of roots of unity (see `sqrt_named`).
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

# The coefficient field.  Fraction already guarantees the invariants the
# engine needs: lowest terms, positive denominator, unique zero.
Rational = Fraction


class CycloError(ValueError):
    """Domain error in cyclotomic arithmetic (bad argument, zero inverse)."""


# ---------------------------------------------------------------------------
# conductor tables


@lru_cache(maxsize=None)
def _divisors(n):
    return tuple(d for d in range(1, n + 1) if n % d == 0)


@lru_cache(maxsize=None)
def _phi(n):
    count = 0
    for k in range(1, n + 1):
        if math.gcd(k, n) == 1:
            count += 1
    return count


def _poly_div_exact(num, den):
    # exact division of integer polynomials, low->high coefficients
    num = list(num)
    d = len(den) - 1
    lead = den[-1]
    out = [0] * (len(num) - d)
    for i in range(len(num) - 1, d - 1, -1):
        c = num[i]
        if c % lead != 0:
            raise ArithmeticError("non-exact polynomial division")
        q = c // lead
        out[i - d] = q
        for j, dc in enumerate(den):
            num[i - d + j] -= q * dc
    if any(num[:d]):
        raise ArithmeticError("nonzero remainder in cyclotomic division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n):
    """Coefficients of Phi_n, low to high, as a tuple of ints."""
    if n == 1:
        return (-1, 1)
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in _divisors(n):
        if d < n:
            poly = _poly_div_exact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def reduction_table(n):
    """Row k: coordinates of zeta_n^k on the power basis, for k in [0, n)."""
    d = _phi(n)
    phi = cyclotomic_polynomial(n)
    # x^d = -(phi_0 + phi_1 x + ... + phi_{d-1} x^{d-1}) since Phi_n is monic
    top = tuple(-c for c in phi[:d])
    rows = []
    for k in range(d):
        row = [0] * d
        row[k] = 1
        rows.append(tuple(row))
    for k in range(d, n):
        prev = rows[k - 1]
        row = [0] * d
        for j in range(d - 1):
            row[j + 1] += prev[j]
        carry = prev[d - 1]
        if carry:
            for j in range(d):
                row[j] += carry * top[j]
        rows.append(tuple(row))
    return tuple(rows)


def _lcm(a, b):
    return a * b // math.gcd(a, b)


# ---------------------------------------------------------------------------
# subfield conversion (conductor reduction)


def _fraction_matrix_inverse(mat):
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ArithmeticError("singular matrix")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


@lru_cache(maxsize=None)
def _subfield_converter(n, m):
    """Data to rewrite coordinates from Q(zeta_n) into Q(zeta_m), m | n.

    Returns (B, pivot_cols, Binv_num, Binv_den): B is the phi(m) x phi(n)
    integer matrix embedding the Q(zeta_m) power basis, pivot_cols selects
    phi(m) independent columns, and Binv_num/Binv_den is the exact inverse
    of that block with denominators cleared.
    """
    dn, dm = _phi(n), _phi(m)
    red = reduction_table(n)
    step = n // m
    B = [list(red[(j * step) % n]) for j in range(dm)]
    # choose pivot columns by Gaussian elimination over Q
    work = [[Fraction(x) for x in row] for row in B]
    pivots = []
    row = 0
    for col in range(dn):
        piv = next((r for r in range(row, dm) if work[r][col] != 0), None)
        if piv is None:
            continue
        work[row], work[piv] = work[piv], work[row]
        inv = Fraction(1) / work[row][col]
        work[row] = [x * inv for x in work[row]]
        for r in range(dm):
            if r != row and work[r][col]:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[row])]
        pivots.append(col)
        row += 1
        if row == dm:
            break
    if len(pivots) != dm:
        raise ArithmeticError("degenerate subfield embedding")
    block = [[Fraction(B[i][c]) for c in pivots] for i in range(dm)]
    inv = _fraction_matrix_inverse(block)
    den = 1
    for r in inv:
        for x in r:
            den = den * x.denominator // math.gcd(den, x.denominator)
    num = tuple(tuple(int(x * den) for x in r) for r in inv)
    return tuple(tuple(r) for r in B), tuple(pivots), num, den


@lru_cache(maxsize=None)
def _galois_witnesses(n, m):
    """Elements of Gal(Q(zeta_n)/Q(zeta_m)) other than the identity."""
    out = []
    for k in range(1, n // m):
        a = 1 + k * m
        if math.gcd(a, n) == 1:
            out.append(a)
    return tuple(out)


def _galois_fixed_int(n, m, num):
    """Cheap pre-test: is the value fixed by Gal(Q_n/Q_m)?"""
    red = reduction_table(n)
    d = len(num)
    for a in _galois_witnesses(n, m):
        image = [0] * d
        for k, c in enumerate(num):
            if not c:
                continue
            row = red[(k * a) % n]
            for j, r in enumerate(row):
                if r:
                    image[j] += c * r
        if image != num:
            return False
    return True


def _try_subfield_int(n, m, num):
    """Integer coordinates of the value in Q(zeta_m) if it lies there.

    Integral coordinates stay integral: the power bases are integral bases
    and Z[zeta_m] = Q(zeta_m) n Z[zeta_n].
    """
    if not _galois_fixed_int(n, m, num):
        return None
    B, pivots, inv_num, inv_den = _subfield_converter(n, m)
    dm = len(B)
    xc = [num[c] for c in pivots]
    y = []
    for i in range(dm):
        total = sum(xc[j] * inv_num[j][i] for j in range(dm))
        q, r = divmod(total, inv_den)
        if r:
            return None
        y.append(q)
    for col in range(len(num)):
        if sum(y[i] * B[i][col] for i in range(dm)) != num[col]:
            return None
    return y


def _minimize_conductor_int(n, num):
    """Reduce (n, integer power-basis numerators) to the minimal conductor."""
    if not any(num):
        return 1, [0]
    changed = True
    while changed and n > 1:
        changed = False
        for p in _prime_factors(n):
            y = _try_subfield_int(n, n // p, num)
            if y is not None:
                n, num = n // p, y
                changed = True
                break
    return n, num


@lru_cache(maxsize=None)
def _prime_factors(n):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return tuple(out)


# ---------------------------------------------------------------------------
# the value type


class Cyclotomic:
    """An exact element of some Q(zeta_N), canonical and immutable.

    `coeffs` maps basis exponent k (0 <= k < phi(conductor)) to a nonzero
    Fraction.  Structural equality is semantic equality.
    """

    __slots__ = ("conductor", "coeffs", "_hash")

    def __init__(self, conductor, coeffs, _canonical=False):
        if not _canonical:
            items = []
            den = 1
            for k, c in (coeffs.items() if isinstance(coeffs, dict) else coeffs):
                c = Fraction(c)
                if c:
                    items.append((k, c))
                    den = den * c.denominator // math.gcd(den, c.denominator)
            num = [0] * _phi(conductor)
            red = reduction_table(conductor)
            for k, c in items:
                iv = int(c * den)
                row = red[k % conductor]
                for j, r in enumerate(row):
                    if r:
                        num[j] += iv * r
            conductor, num = _minimize_conductor_int(conductor, num)
            coeffs = tuple((k, Fraction(v, den)) for k, v in enumerate(num) if v)
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(coeffs))
        object.__setattr__(self, "_hash", hash((conductor, self.coeffs)))

    def __setattr__(self, *a):
        raise AttributeError("Cyclotomic values are immutable")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def rational(x):
        c = Fraction(x)
        return Cyclotomic(1, ((0, c),) if c else (), _canonical=True)

    # -- basic queries -----------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def is_rational(self):
        return self.conductor == 1

    def as_rational(self):
        if self.conductor != 1:
            raise CycloError("value is irrational: %s" % (self,))
        return self.coeffs[0][1] if self.coeffs else Fraction(0)

    def dense(self, conductor=None):
        """Power-basis coordinates, optionally embedded in a larger field."""
        num, den = self.dense_int(conductor)
        return [Fraction(v, den) for v in num]

    def dense_int(self, conductor=None):
        """(integer numerators, common denominator) on the power basis."""
        n = conductor or self.conductor
        if n % self.conductor:
            raise CycloError("cannot embed conductor %d into %d"
                             % (self.conductor, n))
        den = 1
        for _, c in self.coeffs:
            den = den * c.denominator // math.gcd(den, c.denominator)
        out = [0] * _phi(n)
        if n == self.conductor:
            for k, c in self.coeffs:
                out[k] = int(c * den)
            return out, den
        red = reduction_table(n)
        step = n // self.conductor
        for k, c in self.coeffs:
            iv = int(c * den)
            row = red[(k * step) % n]
            for j, r in enumerate(row):
                if r:
                    out[j] += iv * r
        return out, den

    @staticmethod
    def _from_int_dense(conductor, num, den):
        conductor, num = _minimize_conductor_int(conductor, num)
        coeffs = tuple((k, Fraction(v, den)) for k, v in enumerate(num) if v)
        return Cyclotomic(conductor, coeffs, _canonical=True)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        n = _lcm(self.conductor, other.conductor)
        na, da = self.dense_int(n)
        nb, db = other.dense_int(n)
        den = da * db // math.gcd(da, db)
        fa, fb = den // da, den // db
        num = [x * fa + y * fb for x, y in zip(na, nb)]
        return Cyclotomic._from_int_dense(n, num, den)

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic(self.conductor, tuple((k, -c) for k, c in self.coeffs),
                          _canonical=True)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _coerce(other) + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ZERO
        if self.conductor == 1:
            q = self.coeffs[0][1]
            return Cyclotomic(other.conductor,
                              tuple((k, c * q) for k, c in other.coeffs), _canonical=True)
        if other.conductor == 1:
            return other * self
        n = _lcm(self.conductor, other.conductor)
        na, da = self.dense_int(n)
        nb, db = other.dense_int(n)
        d = _phi(n)
        red = reduction_table(n)
        num = [0] * d
        for k1, c1 in enumerate(na):
            if not c1:
                continue
            for k2, c2 in enumerate(nb):
                if not c2:
                    continue
                c = c1 * c2
                e = k1 + k2
                if e < d:
                    num[e] += c
                else:
                    row = red[e % n]
                    for j, r in enumerate(row):
                        if r:
                            num[j] += c * r
        return Cyclotomic._from_int_dense(n, num, da * db)

    __rmul__ = __mul__

    def __truediv__(self, other):
        # division by exact rational scalars only; use .inverse() otherwise
        q = Fraction(other)
        if not q:
            raise CycloError("division by zero")
        return Cyclotomic(self.conductor,
                          tuple((k, c / q) for k, c in self.coeffs), _canonical=True)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out = ONE
        base = self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def galois(self, a):
        """Apply the field automorphism zeta -> zeta^a (a coprime to N)."""
        n = self.conductor
        if math.gcd(a, n) != 1:
            raise CycloError("galois exponent %d not coprime to %d" % (a, n))
        return Cyclotomic(n, [((k * a) % n, c) for k, c in self.coeffs])

    def conj(self):
        """Complex conjugation: exponent k -> -k mod N."""
        return self.galois(self.conductor - 1) if self.conductor > 1 else self

    def inverse(self):
        """Exact inverse via the product of Galois conjugates over the norm."""
        if self.is_zero():
            raise CycloError("zero has no inverse")
        n = self.conductor
        if n == 1:
            return Cyclotomic.rational(1 / self.coeffs[0][1])
        prod = ONE
        for a in range(2, n + 1):
            if math.gcd(a, n) == 1 and a % n != 1:
                prod = prod * self.galois(a)
        norm = self * prod
        return prod / norm.as_rational()

    # -- structure ---------------------------------------------------------

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.conductor == other.conductor and self.coeffs == other.coeffs

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def __complex__(self):
        # debug rendering only; never used in any exact decision
        n = self.conductor
        total = 0j
        for k, c in self.coeffs:
            total += float(c) * complex(math.cos(2 * math.pi * k / n),
                                        math.sin(2 * math.pi * k / n))
        return total

    def __repr__(self):
        return "Cyclotomic(%r)" % (self.to_string(),)

    def __str__(self):
        return self.to_string()

    # -- canonical text form -----------------------------------------------

    def to_string(self):
        """Canonical form "c<N>:<k1>=<num>/<den>,..." with ascending exponents."""
        body = ",".join("%d=%d/%d" % (k, c.numerator, c.denominator)
                        for k, c in self.coeffs)
        return "c%d:%s" % (self.conductor, body)

    @staticmethod
    def from_string(text):
        if not text.startswith("c") or ":" not in text:
            raise CycloError("bad cyclotomic literal: %r" % (text,))
        head, _, body = text.partition(":")
        n = int(head[1:])
        coeffs = []
        if body:
            for item in body.split(","):
                k, _, frac = item.partition("=")
                num, _, den = frac.partition("/")
                coeffs.append((int(k), Fraction(int(num), int(den))))
        return Cyclotomic(n, coeffs)


def _coerce(x):
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, (int, Fraction)):
        return Cyclotomic.rational(x)
    return NotImplemented


# ---------------------------------------------------------------------------
# spec operations


def root_of_unity(n, k=1):
    """zeta_n^k in canonical form; the conductor divides n."""
    if n < 1:
        raise CycloError("order must be positive")
    k %= n
    g = math.gcd(n, k) if k else n
    n, k = n // g, k // g
    return Cyclotomic(n, ((k, Fraction(1)),))


def add(a, b):
    return _coerce(a) + b


def mul(a, b):
    return _coerce(a) * b


def neg(a):
    return -_coerce(a)


def conj(a):
    return _coerce(a).conj()


def inverse(a):
    return _coerce(a).inverse()


ZERO = Cyclotomic.rational(0)
ONE = Cyclotomic.rational(1)
I = root_of_unity(4)


def sqrt_named(d):
    """Principal square roots of 2, 3, 5, -3, -7 as root-of-unity sums.

    Principal means positive real part, then positive imaginary part;
    sqrt(5) enters via 2*cos(2*pi/5) = (sqrt(5)-1)/2 and sqrt(-7) via the
    quadratic-residue Gauss sum mod 7.
    """
    z8 = root_of_unity(8)
    z12 = root_of_unity(12)
    z3 = root_of_unity(3)
    z5 = root_of_unity(5)
    z7 = root_of_unity(7)
    if d == 2:
        return z8 + z8.conj()
    if d == 3:
        return z12 + z12.conj()
    if d == -3:
        return z3 - z3 * z3
    if d == 5:
        return ONE + (z5 + z5 ** 4) * 2
    if d == -7:
        total = ZERO
        for k in range(1, 7):
            chi = 1 if pow(k, 3, 7) == 1 else -1  # k is a QR mod 7 iff k^3 = 1 mod 7
            total = total + root_of_unity(7, k) * chi
        return total
    raise CycloError("no named square root for %r" % (d,))


def golden_ratio():
    """phi = (1 + sqrt(5)) / 2."""
    return (ONE + sqrt_named(5)) / 2
