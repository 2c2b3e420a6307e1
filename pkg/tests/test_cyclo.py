import random
from fractions import Fraction

import pytest

from su4atlas.cyclo import (Cyclotomic, CycloError, ONE, ZERO, I, conj,
                            golden_ratio, mul, root_of_unity, sqrt_named)


def test_root_of_unity_identity_cases():
    assert root_of_unity(1, 0) == ONE
    assert root_of_unity(7, 7) == ONE
    z = root_of_unity(8, 2)
    assert z == root_of_unity(4, 1) == I
    assert z.conductor == 4


def test_inverse_pair_and_square():
    z8 = root_of_unity(8)
    assert mul(z8, root_of_unity(8, 7)) == ONE
    s = z8 + z8.conj()
    assert s * s == Cyclotomic.rational(2)


def test_conjugation_negates_exponents():
    assert conj(root_of_unity(7, 3)) == root_of_unity(7, 4)
    v = root_of_unity(12, 5) + Fraction(1, 3)
    assert v.conj().conj() == v


def _brute_force_gauss_square():
    # independent oracle: expand (sum chi(k) z7^k)^2 on raw exponents and
    # reduce only with z7^7 = 1 and 1 + z7 + ... + z7^6 = 0
    chi = {k: (1 if k in (1, 2, 4) else -1) for k in range(1, 7)}
    acc = {}
    for a in range(1, 7):
        for b in range(1, 7):
            e = (a + b) % 7
            acc[e] = acc.get(e, 0) + chi[a] * chi[b]
    # subtract c * (1 + z + ... + z^6) to kill the top coefficient
    c = acc.get(6, 0)
    return {k: acc.get(k, 0) - c for k in range(7)}


def test_sqrt_minus7_against_brute_force():
    expansion = _brute_force_gauss_square()
    assert expansion[0] == -7 and all(expansion[k] == 0 for k in range(1, 7))
    s = sqrt_named(-7)
    assert s * s == Cyclotomic.rational(-7)
    # principal: positive imaginary part
    assert complex(s).imag > 0


def test_named_square_roots_defining_identities():
    for d in (2, 3, 5, -3, -7):
        r = sqrt_named(d)
        assert r * r == Cyclotomic.rational(d)
    assert complex(sqrt_named(2)).real > 0
    assert complex(sqrt_named(5)).real > 0
    with pytest.raises(CycloError):
        sqrt_named(7)


def test_golden_ratio_identity():
    phi = golden_ratio()
    assert phi * phi == phi + 1
    half = (ONE + sqrt_named(5)) / 2
    assert half == phi


def _random_value(rng, conductors):
    n = rng.choice(conductors)
    coeffs = {}
    for _ in range(rng.randint(1, 3)):
        coeffs[rng.randrange(n)] = Fraction(rng.randint(-4, 4),
                                            rng.randint(1, 5))
    return Cyclotomic(n, coeffs)


def test_field_axioms_on_random_triples():
    rng = random.Random(20260810)
    conductors = [1, 3, 4, 5, 7, 8, 12, 15, 24, 40, 56, 105, 120, 840]
    for _ in range(1000):
        a = _random_value(rng, conductors)
        b = _random_value(rng, conductors)
        c = _random_value(rng, conductors)
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a and a + b == b + a
        assert a * (b + c) == a * b + a * c
        assert (a * b).conj() == a.conj() * b.conj()


def test_inverse_of_random_nonzero_values():
    rng = random.Random(7)
    conductors = [1, 3, 4, 5, 7, 8, 12, 20, 24]
    done = 0
    while done < 1000:
        a = _random_value(rng, conductors)
        if a.is_zero():
            continue
        assert a * a.inverse() == ONE
        done += 1


def test_norm_is_conjugation_fixed():
    rng = random.Random(99)
    for _ in range(50):
        a = _random_value(rng, [8, 12, 5, 7])
        n = a * a.conj()
        assert n.conj() == n


def test_canonicalization_idempotent():
    rng = random.Random(3)
    for _ in range(200):
        a = _random_value(rng, [8, 12, 20, 840])
        again = Cyclotomic(a.conductor, dict(a.coeffs))
        assert again == a and again.conductor == a.conductor


def test_conductor_is_minimal():
    # zeta_8^2 must not stay at conductor 8
    assert root_of_unity(8, 2).conductor == 4
    assert (root_of_unity(3) + root_of_unity(3, 2)).conductor == 1
    assert root_of_unity(6).conductor == 3  # -zeta_3^2


def test_serialization_round_trip_bit_exact():
    rng = random.Random(11)
    values = [ZERO, ONE, I, sqrt_named(2) / 2, golden_ratio(), sqrt_named(-7)]
    values += [_random_value(rng, [8, 12, 20, 105]) for _ in range(100)]
    for v in values:
        text = v.to_string()
        assert Cyclotomic.from_string(text) == v
        assert Cyclotomic.from_string(text).to_string() == text


def test_serialization_format():
    assert ONE.to_string() == "c1:0=1/1"
    assert ZERO.to_string() == "c1:"
    assert I.to_string() == "c4:1=1/1"
    assert (sqrt_named(2)).to_string() == "c8:1=1/1,3=-1/1"


def test_zero_inverse_raises():
    with pytest.raises(CycloError):
        ZERO.inverse()
