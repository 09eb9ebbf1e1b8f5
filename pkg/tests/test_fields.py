from __future__ import annotations

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from hdflow.errors import NotIrreducible, NotPrime
from hdflow.fields import (
    RatFunc,
    embed,
    frobenius_power,
    gf,
    make_ext_field,
    parse_field,
    prime_field,
    ratfunc_field,
    sqrt_in_field,
)

F81_MOD = (2, 0, 1, 0, 1)
FIELDS = [prime_field(3), prime_field(31), make_ext_field(3, F81_MOD), gf(5, 3), gf(7, 2), gf(3, 6)]


def _sympy_mul(field, a, b):
    """Oracle: multiply digit vectors as polynomials in sympy and reduce by the modulus."""
    x = sympy.symbols("x")
    pa = sympy.Poly(list(reversed(field.digits(a))), x, modulus=field.p)
    pb = sympy.Poly(list(reversed(field.digits(b))), x, modulus=field.p)
    pm = sympy.Poly(list(reversed(field.modulus)), x, modulus=field.p)
    r = (pa * pb).rem(pm)
    coeffs = [int(c) % field.p for c in reversed(r.all_coeffs())]
    return field.from_digits(coeffs + [0] * (field.n - len(coeffs)))


def test_f81_from_alpha():
    F = make_ext_field(3, F81_MOD)
    assert F.q == 81
    a = F.gen
    i = F.sub(F.mul(a, a), F.one)  # alpha^2 = 1 + i
    assert F.mul(i, i) == F.neg(F.one)


def test_degree_one_modulus_is_prime_field():
    F = make_ext_field(5, (0, 1))
    assert F.q == 5 and F.n == 1


def test_f9_contains_i():
    F = make_ext_field(3, (1, 0, 1))
    assert F.q == 9
    assert F.mul(F.gen, F.gen) == F.neg(F.one)


def test_reducible_modulus_rejected():
    with pytest.raises(NotIrreducible):
        make_ext_field(3, (2, 0, 1))  # x^2 - 1
    with pytest.raises(NotIrreducible):
        make_ext_field(5, (1, 0, 1))  # x^2 + 1 = (x - 2)(x + 2)


@pytest.mark.parametrize("p", [2, 9, 1, 15])
def test_bad_characteristic(p):
    with pytest.raises(NotPrime):
        prime_field(p)


def test_parse_field_roundtrip():
    for F in FIELDS:
        assert parse_field(F.descriptor) == F
    assert parse_field("3^4:2,0,1,0,1") == make_ext_field(3, F81_MOD)
    with pytest.raises(ValueError):
        parse_field("3^4:1,1")


def test_sqrt_examples():
    F5 = prime_field(5)
    assert int(sqrt_in_field(F5(4))) == 2
    assert sqrt_in_field(F5(2)) is None
    assert int(sqrt_in_field(gf(3, 2)(0))) == 0


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor)
def test_sqrt_exhaustive(F):
    squares = {}
    for y in range(F.q):
        squares.setdefault(F.mul(y, y), []).append(y)
    for a in range(min(F.q, 800)):
        r = F.sqrt(a)
        if a in squares:
            assert r == min(squares[a])
        else:
            assert r is None


def test_frobenius_examples():
    F3 = prime_field(3)
    assert all(int(frobenius_power(F3(a), 1)) == a for a in range(3))
    F = make_ext_field(3, F81_MOD)
    alpha = F(F.gen)
    assert frobenius_power(alpha, 4) == alpha
    assert frobenius_power(alpha, 1) == alpha * alpha * alpha
    assert int(frobenius_power(alpha, 1)) == 27


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor)
def test_field_axioms_random_triples(F):
    rng = np.random.default_rng(1)
    a, b, c = (rng.integers(0, F.q, 10_000).tolist() for _ in range(3))
    for x, y, z in zip(a, b, c):
        assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
        assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
        assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))
        if x:
            assert F.mul(x, F.inv(x)) == F.one


@pytest.mark.parametrize("F", FIELDS[2:], ids=lambda F: F.descriptor)
def test_multiplication_against_sympy(F):
    rng = np.random.default_rng(2)
    for a, b in rng.integers(0, F.q, (300, 2)).tolist():
        assert F.mul(a, b) == _sympy_mul(F, a, b)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor)
def test_vector_ops_match_scalar(F):
    rng = np.random.default_rng(3)
    a = rng.integers(0, F.q, 2000)
    b = rng.integers(0, F.q, 2000)
    assert F.vmul(a, b).tolist() == [F.mul(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vadd(a, b).tolist() == [F.add(x, y) for x, y in zip(a.tolist(), b.tolist())]
    assert F.vpow(a, 7).tolist() == [F.pow(x, 7) for x in a.tolist()]
    nz = np.where(a == 0, 1, a)
    assert F.vinv(nz).tolist() == [F.inv(x) for x in nz.tolist()]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.integers(min_value=0), st.integers(min_value=0))
def test_frobenius_is_ring_homomorphism(F, a, b):
    a, b = a % F.q, b % F.q
    fr = F.frobenius
    assert fr(F.add(a, b)) == F.add(fr(a), fr(b))
    assert fr(F.mul(a, b)) == F.mul(fr(a), fr(b))
    assert fr(a, F.n) == a
    assert fr(a) == F.pow(a, F.p)


@pytest.mark.parametrize("F", FIELDS, ids=lambda F: F.descriptor)
def test_encoding_is_bijection(F):
    seen = set()
    for a in range(F.q):
        d = F.digits(a)
        assert len(d) == F.n and all(0 <= x < F.p for x in d)
        assert F.from_digits(d) == a
        seen.add(d)
    assert len(seen) == F.q


def test_embedding_is_homomorphism():
    small, big = gf(3, 2), gf(3, 6)
    for a in range(small.q):
        for b in range(small.q):
            assert embed(small, big, small.mul(a, b)) == big.mul(embed(small, big, a), embed(small, big, b))
            assert embed(small, big, small.add(a, b)) == big.add(embed(small, big, a), embed(small, big, b))


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.integers(0, 6), min_size=1, max_size=6),
    st.lists(st.integers(0, 6), min_size=1, max_size=6).filter(lambda c: any(c)),
)
def test_ratfunc_canonical_idempotent(num, den):
    x = RatFunc(7, num, den)
    y = x.canonicalize()
    assert y == x
    assert y.canonicalize().num == y.num and y.canonicalize().den == y.den
    assert y.den[-1] == 1
    # coprime: the sympy gcd of the stored pair is 1
    lam = sympy.symbols("L")
    g = sympy.gcd(sympy.Poly(list(reversed(y.num)) or [0], lam, modulus=7), sympy.Poly(list(reversed(y.den)), lam, modulus=7))
    assert g.degree() <= 0


def test_ratfunc_field_arithmetic():
    R = ratfunc_field(5)
    L = R.gen
    one = R.one
    x = (L * L - one) / (L - one)
    assert x == L + one
    assert R.inv(x) * x == one
    assert R.frobenius(L) == L**5
    assert (L / (L + one)).specialize(prime_field(5), 2) == prime_field(5).div(2, 3)
