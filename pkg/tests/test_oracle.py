import pytest

from planegerms.errors import DegenerateContact, RangeError
from planegerms.germ import GermPresentation
from planegerms.invariants import contact, order_of_germ
from planegerms.newton import expand
from planegerms.oracle import estimate_contact, estimate_order, estimate_order_germ, slice_distance
from planegerms.parser import parse_polynomial, parse_series
from planegerms.series import INF, Arc, BranchGerm

CUSP_F = parse_polynomial("y^2 - x^3")
CUSP = BranchGerm(2, parse_series("t^3"))


def arc(p, y):
    return Arc.x_normalized(p, parse_series(y))


def test_order_examples():
    est = estimate_order(CUSP_F, arc(1, "0"))
    assert abs(est.slope - 3) < 0.02 and est.residual < 0.1
    assert abs(estimate_order(CUSP_F, arc(1, "t")).slope - 2) < 0.02
    est = estimate_order(parse_polynomial("x"), arc(1, "0"))
    assert abs(est.slope - 1) < 1e-9 and est.residual < 1e-9
    assert est.samples == 16 and est.t_range == (1e-6, 1e-3)
    assert est.to_json()["t_range"] == [1e-6, 1e-3]


@pytest.mark.parametrize(
    "src, a, nu",
    [
        ("y^2 - x^3", arc(2, "0"), 6),
        ("y^2 - x^3", arc(2, "t^2"), 4),
        ("y^2 - x^3", Arc.y_axis(1, parse_series("1 + t")), 2),
        ("(y^2 - x^3)^2", arc(1, "0"), 6),
        ("y*(y^2 - x^3)", arc(1, "t"), 3),
    ],
)
def test_order_examples_within_tolerance(src, a, nu):
    assert abs(estimate_order(parse_polynomial(src), a).slope - nu) < 0.05


@pytest.mark.parametrize(
    "src, a",
    [
        ("y^4 - 2*x^3*y^2 + x^6 - x^7", arc(2, "2*t^3")),
        ("(y^2 - x^3)*(y^2 - x^5)", arc(1, "t^2")),
        ("y^3 - x^5 + x^4*y", arc(1, "t^2")),
        ("y^3 - x^5 + x^4*y", arc(3, "t^4")),
    ],
)
def test_order_matches_symbolic_path(src, a):
    f = parse_polynomial(src)
    nu = order_of_germ(expand(f).germ(), a) * a.p
    assert nu <= 12
    assert abs(estimate_order(f, a).slope - float(nu)) < 0.05


@pytest.mark.parametrize("src", ["y^2 - x^3", "(y - x^2)*(y^2 - x^5)", "x*y", "(y^2 - x^3)^2*(y + x)"])
def test_germ_estimate_agrees_with_symbolic_order(src):
    g = expand(parse_polynomial(src)).germ()
    for a in (arc(1, "0"), arc(1, "2*t"), arc(2, "t^3 + t^4")):
        nu = order_of_germ(g, a)
        if nu == INF:
            with pytest.raises(RangeError, match="cancellation"):
                estimate_order_germ(g, a)
            continue
        est = estimate_order_germ(g, a)
        scale = a.p if a.kind == "x" else 1
        assert abs(est.slope - float(nu) * scale) < 0.05


def test_contact_examples():
    assert abs(estimate_contact(arc(1, "0"), CUSP).slope - 1.5) < 0.05
    assert abs(estimate_contact(arc(1, "t"), CUSP).slope - 1.0) < 0.05
    explicit = estimate_contact(arc(1, "0"), CUSP, 1e-4, 1e-2, 8)
    assert explicit.samples == 8 and abs(explicit.slope - 1.5) < 0.05


@pytest.mark.parametrize("y", ["t^2", "t^2 + t^3 + t^4", "-t^2 + t^4", "t^2 + 2*t^3"])
def test_contact_matches_symbolic(y):
    b = BranchGerm(2, parse_series("t^2 + t^3"))
    a = arc(2, y)
    assert abs(estimate_contact(a, b).slope - float(contact(a, b))) < 0.05


def test_contact_of_arc_inside_the_curve():
    with pytest.raises(DegenerateContact):
        estimate_contact(arc(2, "t^3"), CUSP)
    with pytest.raises(DegenerateContact):
        estimate_contact(arc(2, "-t^3"), CUSP, 1e-3, 1e-2, 6)


def test_slice_distance_of_a_curve_point_is_zero():
    x, y = CUSP.point(0.1)
    assert slice_distance((x, y), CUSP) < 1e-15


@pytest.mark.parametrize("bounds", [(1e-3, 1e-6, 16), (0, 1e-3, 16), (1e-6, 1.0, 16), (1e-6, 1e-3, 3)])
def test_bad_ranges(bounds):
    with pytest.raises(RangeError):
        estimate_order(CUSP_F, arc(1, "0"), *bounds)


def test_underflow_suggests_a_range():
    with pytest.raises(RangeError) as info:
        estimate_order(parse_polynomial("x^60"), arc(1, "0"))
    lo, hi = info.value.suggested
    assert 1e-6 < lo < hi < 1
    assert "suggested_range" in info.value.to_json()


def test_cancellation_is_reported():
    close = arc(2, "t^3 + t^40")
    with pytest.raises(RangeError, match="cancellation"):
        estimate_order(CUSP_F, close)
    with pytest.raises(RangeError, match="cancellation"):
        estimate_order_germ(GermPresentation([(CUSP, 1)]), close)
