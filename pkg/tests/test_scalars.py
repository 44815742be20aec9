import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tgc.scalars import (
    Cyclotomic,
    OrderMismatch,
    cyclo_arith,
    cyclotomic_polynomial,
    euler_phi,
    fraction_mod_p,
    root_of_unity,
)

x = sympy.Symbol("x")


@pytest.mark.parametrize("m", range(1, 61))
def test_cyclotomic_polynomial_matches_sympy(m):
    expected = sympy.Poly(sympy.cyclotomic_poly(m, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(m)) == [int(c) for c in expected]
    assert euler_phi(m) == sympy.totient(m)


def test_third_roots_sum_to_zero():
    total = root_of_unity(3, 0) + root_of_unity(3, 1) + root_of_unity(3, 2)
    assert total.is_zero()
    assert total == 0


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8, 9, 10, 12, 15])
def test_sum_of_all_roots_and_primitive_roots(m):
    all_roots = sum((root_of_unity(m, k) for k in range(m)), Cyclotomic(m))
    assert all_roots.is_zero()
    prim = sum((root_of_unity(m, k) for k in range(m) if math.gcd(k, m) == 1), Cyclotomic(m))
    assert prim == int(sympy.mobius(m))


def test_canonical_forms():
    assert root_of_unity(6, 3) == -1
    assert root_of_unity(4, 2) == Cyclotomic(4, [-1])
    assert root_of_unity(5, 7) == root_of_unity(5, 2)
    # zeta^phi rewritten in the basis
    z = root_of_unity(12, 4)
    assert len(z.coeffs) == 4
    assert hash(root_of_unity(6, 9)) == hash(Cyclotomic(6, [-1]))


def test_order_change_and_mismatch():
    assert root_of_unity(3, 1).raise_order(6) == root_of_unity(6, 2)
    with pytest.raises(OrderMismatch):
        root_of_unity(3, 1) + root_of_unity(6, 1)
    with pytest.raises(OrderMismatch):
        cyclo_arith(root_of_unity(3, 1), root_of_unity(5, 1), "mul")
    with pytest.raises(OrderMismatch):
        root_of_unity(4, 1).raise_order(6)


def _numeric(c: Cyclotomic) -> complex:
    z = cmath.exp(2j * math.pi / c.m)
    return sum(float(a) * z**k for k, a in enumerate(c.coeffs))


fracs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyclos(draw, m):
    coeffs = draw(st.lists(fracs, min_size=1, max_size=2 * m))
    return Cyclotomic(m, coeffs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([1, 2, 3, 4, 6, 7, 9, 10, 12]).flatmap(lambda m: st.tuples(cyclos(m), cyclos(m), cyclos(m))))
def test_field_ops_against_floating_point(triple):
    a, b, c = triple
    for got, want in [(a + b, _numeric(a) + _numeric(b)), (a * b, _numeric(a) * _numeric(b)), (a - c, _numeric(a) - _numeric(c))]:
        assert abs(_numeric(got) - want) < 1e-8
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([3, 5, 8, 12]).flatmap(lambda m: st.lists(st.integers(0, 50), min_size=m, max_size=m).map(lambda v: (m, v))))
def test_exponent_counts_equal_root_sums(args):
    m, counts = args
    direct = Cyclotomic(m)
    for k, c in enumerate(counts):
        direct = direct + root_of_unity(m, k) * c
    assert Cyclotomic.from_exponent_counts(m, counts) == direct


def test_equal_values_have_equal_coefficients():
    # 1 + zeta_5 + ... + zeta_5^4 = 0 written two ways
    a = Cyclotomic(5, [1, 1, 1, 1, 1])
    assert a.coeffs == Cyclotomic(5).coeffs
    re, im = root_of_unity(8, 1).approx_complex()
    assert abs(re - math.sqrt(0.5)) < 1e-12 and abs(im - math.sqrt(0.5)) < 1e-12


def test_json_round_trip():
    a = Cyclotomic(12, [Fraction(1, 3), 0, -2, 5])
    assert Cyclotomic.from_json(a.to_json()) == a


def test_fraction_mod_p():
    assert fraction_mod_p(Fraction(1, 2), 5) == 3
    assert fraction_mod_p(Fraction(-7, 3), 11) == (-7 * 4) % 11
    with pytest.raises(ZeroDivisionError):
        fraction_mod_p(Fraction(1, 5), 5)
