import cmath
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from planegerms.cyclo import (
    CycloNumber,
    add,
    as_cyclo,
    cyclotomic_polynomial,
    divisors,
    embed,
    guess_cyclotomic,
    inv,
    is_zero,
    mul,
    nth_root,
    root_of_unity,
    sqrt_conductor,
    sqrt_rational,
    to_complex,
    totient,
)
from planegerms.errors import UnsupportedExtension

CONDUCTORS = [1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 24]


@st.composite
def cyclo_numbers(draw, conductor=None, bound=10):
    n = conductor if conductor is not None else draw(st.sampled_from(CONDUCTORS))
    coeffs = draw(st.lists(st.integers(-bound, bound), min_size=totient(n), max_size=totient(n)))
    return CycloNumber(n, coeffs)


# -- cyclotomic polynomials ------------------------------------------------


def test_cyclotomic_polynomial_small_cases():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)


def test_cyclotomic_polynomial_matches_sympy():
    x = sympy.symbols("x")
    for n in (12, 15, 30, 105):
        expected = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
        assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]


@pytest.mark.parametrize("n", range(1, 61))
def test_product_over_divisors_is_x_n_minus_1(n):
    prod = [1]
    for d in divisors(n):
        phi = cyclotomic_polynomial(d)
        out = [0] * (len(prod) + len(phi) - 1)
        for i, a in enumerate(prod):
            for j, b in enumerate(phi):
                out[i + j] += a * b
        prod = out
    assert prod == [-1] + [0] * (n - 1) + [1]


# -- embedding and roots of unity ------------------------------------------


def test_embed_examples():
    assert embed(0, 7).is_zero()
    assert embed(1, 4).coeffs == (1, 0)
    assert embed(Fraction(-3, 2), 1).coeffs == (Fraction(-3, 2),)


def test_root_of_unity_examples():
    assert root_of_unity(4, 2) == embed(-1)
    for n in (1, 3, 5, 12):
        assert root_of_unity(n, n) == embed(1)
    assert root_of_unity(3, 1) + root_of_unity(3, 2) == embed(-1)


def test_field_operation_examples():
    z4 = root_of_unity(4, 1)
    assert mul(z4, z4) == embed(-1)
    for n in (3, 5, 8, 9):
        assert inv(root_of_unity(n, 1)) == root_of_unity(n, n - 1)
    assert is_zero(add(add(embed(1), root_of_unity(3, 1)), root_of_unity(3, 2)))


def test_to_complex_examples():
    assert to_complex(embed(1)) == 1 + 0j
    assert abs(to_complex(root_of_unity(4, 1)) - 1j) < 1e-15
    assert abs(to_complex(root_of_unity(3, 1) + root_of_unity(3, 2)) + 1) < 1e-15


def test_mixed_conductors_lift_to_lcm():
    s = root_of_unity(4, 1) + root_of_unity(3, 1)
    assert s.conductor == 12
    assert abs(s.to_complex() - (1j + cmath.exp(2j * cmath.pi / 3))) < 1e-12


def test_division_by_zero_raises():
    with pytest.raises(ZeroDivisionError):
        embed(0, 5).inverse()


def test_as_cyclo_accepts_strings_and_ints():
    assert as_cyclo("3/4") == embed(Fraction(3, 4))
    assert as_cyclo(2) == embed(2)


# -- square roots and radicals ---------------------------------------------


@pytest.mark.parametrize("q", [2, 3, 5, -1, -3, Fraction(3, 4), 12, -7, 30])
def test_sqrt_rational_squares_back(q):
    r = sqrt_rational(q)
    assert r * r == embed(q)
    assert r.conductor == sqrt_conductor(Fraction(q))


def test_sqrt_rational_sign_convention():
    assert abs(sqrt_rational(2).to_complex() - 2**0.5) < 1e-12
    assert abs(sqrt_rational(-3).to_complex() - 1j * 3**0.5) < 1e-12


def test_nth_root_finds_cyclotomic_roots():
    for c, n in [(embed(8), 3), (embed(-1), 2), (embed(2), 2), (embed(-4), 4), (root_of_unity(3, 1), 2)]:
        r = nth_root(c, n, 120)
        assert r**n == c


def test_nth_root_respects_the_conductor_cap():
    assert nth_root(embed(-8), 3, 1) == embed(-2)
    assert nth_root(embed(-1), 2, 4) == root_of_unity(4, 1)
    with pytest.raises(UnsupportedExtension):
        nth_root(embed(-1), 2, 2)


def test_nth_root_refuses_non_cyclotomic_radicals():
    with pytest.raises(UnsupportedExtension):
        nth_root(embed(2), 3, 120)


def test_guess_cyclotomic_recovers_exact_value():
    target = sqrt_rational(5) * root_of_unity(8, 3)
    assert any(c == target for c in guess_cyclotomic(target.to_complex(), 120))


# -- properties -------------------------------------------------------------


@given(cyclo_numbers())
def test_inverse_property(a):
    if not a.is_zero():
        assert a * a.inverse() == embed(1)


@given(cyclo_numbers(), cyclo_numbers(), cyclo_numbers())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(cyclo_numbers(), st.sampled_from([2, 3, 5]))
def test_lift_round_trip(a, k):
    lifted = a.lift(a.conductor * k)
    assert lifted == a
    assert abs(lifted.to_complex() - a.to_complex()) < 1e-9


@given(cyclo_numbers(), cyclo_numbers())
def test_to_complex_is_homomorphism(a, b):
    za, zb = a.to_complex(), b.to_complex()
    assert abs((a + b).to_complex() - (za + zb)) < 1e-10
    assert abs((a * b).to_complex() - za * zb) < 1e-10
