"""Authoritative gate constants and the gate-expression grammar.

All constants are the determinant-1 matrices, transcribed exactly as
displayed.  DCNOT is the displayed permutation pattern; the product
CNOT12 * CNOT21 equals -i times it (the two are interchangeable inside
every Clifford group here, but only the displayed pattern generates the
exotic tau-lift groups).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cyclo import Cyclotomic, ONE, ZERO, I as IM, root_of_unity, sqrt_named, golden_ratio
from .linal import GateMatrix, kron


class GateLookupError(KeyError):
    """Unknown gate or group name in an expression."""


class GateParseError(ValueError):
    """Malformed gate expression; carries the offending position."""

    def __init__(self, message, pos):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


_z8 = root_of_unity(8)
_z8c = _z8.conj()
_z3 = root_of_unity(3)
_z7 = root_of_unity(7)
_half = Fraction(1, 2)
_sqrt2 = sqrt_named(2)
_sqrt3 = sqrt_named(3)
_isqrt2 = _sqrt2 / 2          # 1/sqrt(2)
_isqrt3 = _sqrt3 / 3          # 1/sqrt(3)
_im3 = sqrt_named(-3)
_im7 = sqrt_named(-7)


def _m(rows):
    return GateMatrix(rows)


# -- single-qubit constants (sans-serif, det 1) ------------------------------

I = GateMatrix.identity(2)
X = _m([[0, -IM], [-IM, 0]])                      # -i * pauli X
Y = _m([[0, -1], [1, 0]])                         # -i * pauli Y
Z = _m([[-IM, 0], [0, IM]])                       # -i * pauli Z
S = _m([[_z8c, 0], [0, _z8]])                     # zeta8^* * diag(1, i)
H = _m([[-IM * _isqrt2, -IM * _isqrt2],
        [-IM * _isqrt2, IM * _isqrt2]])           # -i * Hadamard
F = _m([[_z8c * _isqrt2, -IM * _z8c * _isqrt2],
        [_z8c * _isqrt2, IM * _z8c * _isqrt2]])   # zeta8^* * facet

_phi = golden_ratio()
_phinv = _phi - 1
PHI = _m([[(_phi + IM * _phinv) / 2, Fraction(1, 2)],
          [Fraction(-1, 2), (_phi - IM * _phinv) / 2]])


def ph(m):
    """Generalized phase gate diag(zeta_2m^-1, zeta_2m); ph(2)=Z, ph(4)=S."""
    if m < 1:
        raise GateLookupError("ph() needs a positive order")
    z = root_of_unity(2 * m)
    return _m([[z.conj(), 0], [0, z]])


def bd(m):
    """Generators of the degree-m binary dihedral group."""
    return [ph(m), X]


def q(r):
    """Generators of the generalized quaternion group Q^(r) = BD_{2^r}."""
    if r < 1:
        raise GateLookupError("q() needs r >= 1")
    return bd(2 ** r)


# -- two-qubit constants ------------------------------------------------------

_b = _z8 ** 3 * _isqrt2
BELL = _m([[_b, _b * IM, 0, 0],
           [0, 0, _b * IM, _b],
           [0, 0, _b * IM, -_b],
           [_b, -_b * IM, 0, 0]])

SWAP = _m([[_z8c, 0, 0, 0],
           [0, 0, _z8c, 0],
           [0, _z8c, 0, 0],
           [0, 0, 0, _z8c]])

III = GateMatrix.identity(4)
iII = III.scale(IM)

CNOT12 = _m([[_z8c, 0, 0, 0],
             [0, _z8c, 0, 0],
             [0, 0, 0, _z8c],
             [0, 0, _z8c, 0]])

CNOT21 = _m([[_z8c, 0, 0, 0],
             [0, 0, 0, _z8c],
             [0, 0, _z8c, 0],
             [0, _z8c, 0, 0]])

DCNOT = _m([[1, 0, 0, 0],
            [0, 0, 0, 1],
            [0, 1, 0, 0],
            [0, 0, 1, 0]])

CZ = _m([[_z8c, 0, 0, 0],
         [0, _z8c, 0, 0],
         [0, 0, _z8c, 0],
         [0, 0, 0, -_z8c]])

K = _m([[_isqrt2, 0, -IM * _isqrt2, 0],
        [0, -IM * _isqrt2, 0, -_isqrt2],
        [-IM * _isqrt2, 0, _isqrt2, 0],
        [0, _isqrt2, 0, IM * _isqrt2]])

A = _m([[0, 0, -1, 0],
        [0, -IM, 0, 0],
        [1, 0, 0, 0],
        [0, 0, 0, IM]])

U1 = _m([[1, 0, 0, 0],
         [0, -_im3 / 3, -_im3 / 3, -_im3 / 3],
         [0, -_im3 / 3, -_im3 * _z3 / 3, -_im3 * _z3.conj() / 3],
         [0, -_im3 / 3, -_im3 * _z3.conj() / 3, -_im3 * _z3 / 3]])

U2 = _m([[0, 0, 1, 0],
         [0, -1, 0, 0],
         [1, 0, 0, 0],
         [0, 0, 0, 1]])

V1 = _m([[1, 0, 0, 0],
         [0, 0, 0, _z7.conj()],
         [0, _z7 ** 5, 0, 0],
         [0, 0, _z7 ** 3, 0]])

_s = (ONE + _im7) / 2
_sb = (ONE - _im7) / 2
_iv7 = -_im7 / 7  # 1/sqrt(-7)
V2 = _m([[_iv7 * _sb * _sb, _iv7, _iv7, _iv7],
         [_iv7, _iv7 * _s, _iv7 * _sb, _iv7 * _sb],
         [_iv7, _iv7 * _sb, _iv7 * _s, _iv7 * _sb],
         [_iv7, _iv7 * _sb, _iv7 * _sb, _iv7 * _s]])

W1 = _m([[_isqrt3, 0, 0, _isqrt3 * _sqrt2],
         [0, -_isqrt3, _isqrt3 * _sqrt2, 0],
         [0, _isqrt3 * _sqrt2, _isqrt3, 0],
         [_isqrt3 * _sqrt2, 0, 0, -_isqrt3]])

W2 = _m([[_sqrt3 / 2, _half, 0, 0],
         [_half, -_sqrt3 / 2, 0, 0],
         [0, 0, 0, 1],
         [0, 0, 1, 0]])

W3 = _m([[1, 0, 0, 0],
         [0, 1, 0, 0],
         [0, 0, _z3, 0],
         [0, 0, 0, _z3.conj()]])


_SINGLE = {"I": I, "X": X, "Y": Y, "Z": Z, "S": S, "H": H, "F": F, "Φ": PHI,
           "PHI": PHI}

_NAMED = {
    "BELL": BELL, "SWAP": SWAP, "iII": iII, "III": III,
    "CNOT12": CNOT12, "CNOT21": CNOT21, "CNOT": CNOT12,
    "DCNOT": DCNOT, "CZ": CZ, "K": K, "A": A,
    "U1": U1, "U2": U2, "V1": V1, "V2": V2,
    "W1": W1, "W2": W2, "W3": W3,
}
_NAMED.update(_SINGLE)

# groups usable as atoms in generator lists; value = (dim, generator list)
_GROUP_GENS = {
    "P1": (2, lambda: [X, Z]),
    "C1": (2, lambda: [S, H]),
    "C1'": (2, lambda: [Z, F]),
    "2I": (2, lambda: [Z, PHI]),
    "P2": (4, lambda: [kron(X, I), kron(Z, I), kron(I, X), kron(I, Z)]),
}


def constant(name):
    """The exact paper matrix for a gate name, e.g. "BELL" or "Ph8"."""
    m = _resolve_name(name)
    if m is None:
        raise GateLookupError("unknown gate %r" % (name,))
    return m


def gate_names():
    names = sorted(set(_NAMED) - {"III"})
    names.append("Ph<m>")
    return names


def _resolve_name(name):
    if name in _NAMED:
        return _NAMED[name]
    m = re.fullmatch(r"Ph(\d+)", name)
    if m:
        return ph(int(m.group(1)))
    m = re.fullmatch(r"Q(\d+)", name)
    if m:
        return None  # group name, not a single gate
    # juxtaposition of two single-qubit letters means tensor product
    if len(name) == 2 and name[0] in _SINGLE and name[1] in _SINGLE:
        return kron(_SINGLE[name[0]], _SINGLE[name[1]])
    return None


def _group_atom(name):
    """Generator list for a group atom ("P2", "Q3", "C1'", ...), or None."""
    if name in _GROUP_GENS:
        dim, gens = _GROUP_GENS[name]
        return dim, gens()
    m = re.fullmatch(r"Q(\d+)", name)
    if m:
        r = int(m.group(1))
        return 2, q(r)
    return None


# -- expression grammar -------------------------------------------------------
#
#   expr   = term { ("·" | "*") term }
#   term   = factor { ("⊗" | "x") factor }
#   factor = atom { "†" | "^" integer }
#   atom   = name | "(" expr ")"
#
# left-associative; tensor binds tighter than matrix product.

_TOKEN = re.compile(r"\s*(⊗|†|·|\*|\^|\(|\)|,|⟨|⟩|<|>|-?\d+|[A-Za-z0-9'Φ]+)")


def _tokenize(text):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise GateParseError("unexpected character %r" % text[pos], pos)
        out.append((m.group(1), m.start(1)))
        pos = m.end()
    out.append((None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i][0]

    def next(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, want):
        tok, pos = self.next()
        if tok != want:
            raise GateParseError("expected %r, found %r" % (want, tok), pos)

    def parse_expr(self):
        m = self.parse_term()
        while self.peek() in ("·", "*"):
            self.next()
            m = m * self.parse_term()
        return m

    def parse_term(self):
        m = self.parse_factor()
        while self.peek() in ("⊗", "x"):
            self.next()
            m = kron(m, self.parse_factor())
        return m

    def parse_factor(self):
        m = self.parse_atom()
        while True:
            if self.peek() == "†":
                self.next()
                m = m.adjoint()
            elif self.peek() == "^":
                self.next()
                tok, pos = self.next()
                try:
                    e = int(tok)
                except (TypeError, ValueError):
                    raise GateParseError("expected integer exponent", pos) from None
                m = m ** e if e >= 0 else m.adjoint() ** (-e)
            else:
                return m

    def parse_atom(self):
        tok, pos = self.next()
        if tok == "(":
            m = self.parse_expr()
            self.expect(")")
            return m
        if tok is None:
            raise GateParseError("unexpected end of expression", pos)
        m = _resolve_name(tok)
        if m is None:
            # allow names like "SxH" written without spaces
            if "x" in tok[1:-1]:
                left, _, right = tok.partition("x")
                lm, rm = _resolve_name(left), _resolve_name(right)
                if lm is not None and rm is not None:
                    return kron(lm, rm)
            raise GateParseError("unknown gate %r" % tok, pos)
        return m


def parse_gate(text):
    """Parse a single gate expression such as "CZ·S⊗I" or "K^2"."""
    p = _Parser(text)
    m = p.parse_expr()
    if p.peek() is not None:
        raise GateParseError("trailing input", p.toks[p.i][1])
    return m


def parse_generators(text):
    """Parse a generator list like "⟨P2, BELL⟩" or "Q2⊗Q2, CNOT12".

    Group atoms (P1, P2, Q<r>, C1, C1', 2I) expand to their generator
    lists; a tensor of two group atoms expands factorwise.
    """
    text = text.strip()
    if text[:1] in ("⟨", "<") and text[-1:] in ("⟩", ">"):
        text = text[1:-1]
    gens = []
    for item in _split_top(text):
        gens.extend(_parse_generator_item(item.strip()))
    if not gens:
        raise GateParseError("empty generator list", 0)
    dims = {g.dim for g in gens}
    if len(dims) != 1:
        raise GateParseError("generators mix dimensions %s" % sorted(dims), 0)
    return gens


def _split_top(text):
    depth, start, parts = 0, 0, []
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return parts


def _parse_generator_item(item):
    g = _group_atom(item)
    if g is not None:
        return g[1]
    tensor = re.fullmatch(r"\s*([A-Za-z0-9'Φ]+)\s*(?:⊗|\bx\b)\s*([A-Za-z0-9'Φ]+)\s*", item)
    if tensor:
        lg, rg = _group_atom(tensor.group(1)), _group_atom(tensor.group(2))
        if lg is not None and rg is not None:
            if lg[0] != 2 or rg[0] != 2:
                raise GateParseError("tensor of groups needs single-qubit factors", 0)
            return ([kron(g, I) for g in lg[1]] + [kron(I, g) for g in rg[1]])
        if (lg is None) != (rg is None):
            raise GateParseError("cannot tensor a group with a gate in %r" % item, 0)
    return [parse_gate(item)]
