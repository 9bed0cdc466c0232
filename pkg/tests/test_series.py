from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from planegerms.cyclo import embed, root_of_unity
from planegerms.errors import AxisTangentBranch, IncompatibleRamification, NotIrreducible
from planegerms.parser import parse_series
from planegerms.series import (
    INF,
    AboveTrunc,
    Arc,
    BranchGerm,
    PuiseuxSeries,
    arc_size_order,
    compose_unit_speed,
    reparameterize,
    revert_unit_speed,
    scale_variable,
    unit_power,
    valuation,
)


@st.composite
def exact_series(draw, integer=False, max_terms=4):
    den = 1 if integer else draw(st.sampled_from([1, 2, 3]))
    exps = draw(st.sets(st.integers(0, 12), max_size=max_terms))
    coeffs = draw(st.lists(st.integers(-4, 4).filter(bool), min_size=len(exps), max_size=len(exps)))
    return PuiseuxSeries([(Fraction(e, den), c) for e, c in zip(sorted(exps), coeffs)])


# -- valuation --------------------------------------------------------------


def test_valuation_examples():
    assert valuation(parse_series("t^3 - t^5")) == 3
    assert valuation(PuiseuxSeries.zero()) == INF
    assert valuation(parse_series("2*t^(3/2)") - parse_series("t^(3/2)")) == Fraction(3, 2)


def test_valuation_of_truncated_zero_is_a_lower_bound():
    s = parse_series("t^2").truncate(1)
    assert valuation(s) == AboveTrunc(Fraction(1))


# -- arithmetic ---------------------------------------------------------------


def test_product_and_cancellation():
    assert parse_series("t^(3/2)") * parse_series("t^(3/2)") == parse_series("t^3")
    t = parse_series("t")
    assert (t - t).is_zero() and (t - t).exact


def test_truncation_propagates_through_product():
    a = parse_series("1 + t")
    b = parse_series("1 - t").truncate(5)
    prod = a * b
    assert not prod.exact and prod.trunc == 5
    assert prod.terms == parse_series("1 - t^2").terms


def test_truncation_of_product_uses_the_lowest_valuation():
    a = parse_series("t^2")
    b = parse_series("1 + t").truncate(3)
    prod = a * b
    assert prod.trunc == 5
    assert prod.terms == parse_series("t^2 + t^3").terms


# -- substitutions ------------------------------------------------------------


def test_scale_variable_examples():
    assert scale_variable(parse_series("t^3"), 2, 1) == parse_series("-t^3")
    assert scale_variable(parse_series("t^2"), 2, 1) == parse_series("t^2")
    with pytest.raises(IncompatibleRamification):
        scale_variable(parse_series("t^(3/2)"), 4, 1)


def test_scale_variable_uses_roots_of_unity():
    s = scale_variable(parse_series("t"), 3, 1)
    assert s.coefficient(1) == root_of_unity(3, 1)


def test_reparameterize_examples():
    assert reparameterize(parse_series("t^2 + t^3"), 1, 2) == parse_series("t + t^(3/2)")
    s = parse_series("t^2 - 3*t^5")
    assert reparameterize(s, 1, 1) == s


@given(exact_series(), st.integers(1, 4), st.integers(1, 4))
def test_reparameterize_scales_valuation_and_inverts(s, p, q):
    r = reparameterize(s, p, q)
    v = valuation(s)
    assert valuation(r) == (INF if v == INF else v * Fraction(p, q))
    assert reparameterize(r, q, p) == s


@given(exact_series(), exact_series())
def test_valuation_is_additive(a, b):
    if not a.is_zero() and not b.is_zero():
        assert valuation(a * b) == valuation(a) + valuation(b)


@given(exact_series(integer=True), st.integers(1, 6))
def test_scale_variable_identity_and_period(s, n):
    assert scale_variable(s, n, 0) == s
    out = s
    for _ in range(n):
        out = scale_variable(out, n, 1)
    assert out == s


@given(exact_series(), exact_series(), st.integers(1, 10))
def test_truncation_soundness(a, b, bound):
    exact = a * b + a
    cut = a.truncate(bound) * b.truncate(bound) + a.truncate(bound)
    assert not cut.exact
    for q, c in cut.terms:
        assert q <= cut.trunc
        assert exact.coefficient(q) == c
    for q, c in exact.terms:
        if q <= cut.trunc:
            assert cut.coefficient(q) == c


# -- unit powers and reversion -----------------------------------------------


def test_unit_power_binomial_series():
    u = parse_series("1 + t")
    root = unit_power(u, Fraction(1, 2), Fraction(4))
    assert root.terms == parse_series("1 + t/2 - t^2/8 + t^3/16 - 5*t^4/128").terms
    assert not root.exact and root.trunc == 4


def test_unit_power_of_one_is_exact():
    assert unit_power(PuiseuxSeries.monomial(0), Fraction(1, 3), Fraction(5)) == PuiseuxSeries.monomial(0)


def test_reversion_inverts_composition():
    bound = Fraction(8)
    g = parse_series("1 + 2*t - t^3")
    inverse = revert_unit_speed(g, bound)
    # s*g(s) composed with its inverse is the identity through the bound
    h = compose_unit_speed(parse_series("t"), g, bound)
    back = compose_unit_speed(h, inverse, bound)
    assert back.terms == parse_series("t").terms


# -- arcs and branches ---------------------------------------------------------


def test_arc_size_order_examples():
    assert arc_size_order(Arc.x_normalized(2, parse_series("t^3"))) == 2
    assert arc_size_order(Arc.x_normalized(2, parse_series("t^2"))) == 2
    assert arc_size_order(Arc.y_axis(1, parse_series("1 + t"))) == 1


def test_arc_validation():
    with pytest.raises(ValueError):
        Arc.x_normalized(0, parse_series("t"))
    with pytest.raises(ValueError):
        Arc.x_normalized(1, parse_series("1 + t"))
    with pytest.raises(ValueError):
        Arc.y_axis(1, parse_series("t"))


def test_branch_validation():
    with pytest.raises(NotIrreducible):
        BranchGerm(4, parse_series("t^6"))
    with pytest.raises(AxisTangentBranch):
        BranchGerm(3, parse_series("t^2"))
    assert BranchGerm(4, parse_series("t^6 + t^7")).m == 4


def test_same_locus_detects_conjugates():
    b = BranchGerm(2, parse_series("t^3 + t^4"))
    c = BranchGerm(2, parse_series("-t^3 + t^4"))
    assert b.same_locus(c)
    assert not b.same_locus(BranchGerm(2, parse_series("t^3 - t^5")))


def test_point_uses_exact_coefficients():
    b = BranchGerm(2, PuiseuxSeries([(3, embed(2))]))
    x, y = b.point(0.5)
    assert x == 0.25 and abs(y - 0.25) < 1e-15
