"""Random instance generators and independent oracles shared by the tests."""

from __future__ import annotations

import math
import random
from fractions import Fraction

import sympy

from planegerms.cyclo import CycloNumber, embed, totient
from planegerms.errors import InsufficientTruncation, NotDistinct
from planegerms.invariants import intersection_number
from planegerms.newton import expand_together
from planegerms.poly import BivariatePoly
from planegerms.series import INF, Arc, BranchGerm, PuiseuxSeries, reparameterize, scale_variable, valuation


def random_cyclo(rng: random.Random, conductor: int, nonzero: bool = True) -> CycloNumber:
    while True:
        c = CycloNumber(conductor, [rng.randint(-3, 3) for _ in range(totient(conductor))])
        if not nonzero or not c.is_zero():
            return c


def random_branch(rng: random.Random, max_m: int = 6, max_exp: int = 14, max_conductor: int = 24) -> BranchGerm:
    """Exact branch with ``m <= max_m``, exponents ``<= max_exp``, coefficients in Q(zeta_N)."""
    m = rng.randint(1, max_m)
    n = rng.randint(1, max_conductor)
    while True:
        exps = sorted(rng.sample(range(m, max_exp + 1), rng.randint(1, min(4, max_exp - m + 1))))
        if math.gcd(m, *exps) == 1:
            break
    return BranchGerm(m, PuiseuxSeries([(e, random_cyclo(rng, n)) for e in exps]))


def random_arc(rng: random.Random, b: BranchGerm) -> Arc:
    """Arcs of every kind: y-axis, generic, and following a conjugate of ``b`` for a while."""
    mode = rng.random()
    if mode < 0.1:
        v = PuiseuxSeries([(0, rng.choice([1, -2, 3]))] + [(k, rng.randint(-2, 2)) for k in (1, 2)])
        return Arc.y_axis(rng.randint(1, 3), v)
    if mode < 0.4:
        p = rng.randint(1, 6)
        exps = rng.sample(range(1, 15), rng.randint(0, 3))
        return Arc.x_normalized(p, PuiseuxSeries([(e, rng.randint(-3, 3)) for e in exps]))
    q = rng.randint(1, 2)
    p = b.m * q
    follow = reparameterize(b.conjugate(rng.randrange(b.m)), q)
    if mode < 0.5:
        return Arc.x_normalized(p, follow)
    cut = rng.choice([e for e in follow.exponents()] + [Fraction(100)])
    kept = PuiseuxSeries([(e, c) for e, c in follow.terms if e < cut])
    extra = rng.randint(1, 16)
    return Arc.x_normalized(p, kept + PuiseuxSeries.monomial(extra, rng.choice([1, -1, 2])))


def conjugate_product_valuation(b: BranchGerm, a: Arc):
    """``val_t prod_l (y(t) - psi(zeta_m^l x(t)^(1/m)))``, expanded directly.

    Works in ``u`` with ``t = u^m`` so every factor has integer exponents.
    """
    m = b.m
    if a.kind == "y-axis":
        y = reparameterize(a.v.shift(a.e_prime), m)
        acc = PuiseuxSeries.monomial(0)
        for _ in range(m):
            acc = acc * y
        return _scaled(valuation(acc), m)
    y = reparameterize(a.y, m)
    acc = PuiseuxSeries.monomial(0)
    for l in range(m):
        acc = acc * (y - reparameterize(scale_variable(b.psi, m, l), a.p))
    return _scaled(valuation(acc), m)


def _scaled(v, m: int):
    return INF if v == INF else Fraction(v) / m


# --------------------------------------------------------------------------
# polynomials


def to_sympy(f: BivariatePoly):
    x, y = sympy.symbols("x y")
    expr = 0
    for (i, j), c in f.terms.items():
        if not c.is_rational():
            raise ValueError("sympy oracle needs rational coefficients")
        q = c.rational_value()
        expr += sympy.Rational(q.numerator, q.denominator) * x**i * y**j
    return expr


def resultant_x_order(f: BivariatePoly, g: BivariatePoly):
    """x-adic order of ``Res_y(f, g)`` computed by sympy; ``None`` when it vanishes."""
    x, y = sympy.symbols("x y")
    res = sympy.Poly(sympy.resultant(to_sympy(f), to_sympy(g), y), x)
    if res.is_zero:
        return None
    return min(mon[0] for mon in res.monoms())


def total_intersection(f: BivariatePoly, g: BivariatePoly, cap: int = 120):
    """``(f, g)_0`` from Puiseux coincidences, in a common chart; deepens the expansion as needed."""
    for trunc in (6, 12, 24, 48):
        rf, rg = expand_together([f, g], trunc, cap)
        try:
            total = 0
            for bi, ki in rf.branches:
                for bj, kj in rg.branches:
                    total += ki * kj * intersection_number(bi, bj)
            return total
        except InsufficientTruncation:
            continue
        except NotDistinct:
            return INF
    raise InsufficientTruncation("branches still agree at truncation 48")


def random_monic_germ(rng: random.Random, max_d: int = 3, max_x: int = 4) -> BivariatePoly:
    """``y^d + sum a_j(x) y^j`` with ``a_j(0) = 0``: every root tends to the origin."""
    d = rng.randint(1, max_d)
    terms = {(0, d): embed(1)}
    for j in range(d):
        for i in rng.sample(range(1, max_x + 1), rng.randint(0, 2)):
            c = rng.randint(-3, 3)
            if c:
                terms[(i, j)] = embed(c)
    if all(j == d for (_, j) in terms):
        terms[(rng.randint(1, max_x), 0)] = embed(rng.choice([1, -1]))
    return BivariatePoly(terms)


PRINCIPAL = [
    "y^2 - x^3",
    "y^2 - x^5",
    "y^2 - x^4",
    "y^3 - x^4",
    "y^2 - x^2",
    "y*(y - x^2)",
    "y^3 - x^3",
    "x*y",
    "y^2 + x^3",
    "y^2 - x^7",
    "(y - x)^2 - x^3",
    "y^4 - x^6",
]


def random_polynomial(rng: random.Random) -> BivariatePoly:
    """A singular germ with random higher-order perturbation, sometimes squared or multiplied."""
    from planegerms.parser import parse_polynomial

    f = parse_polynomial(rng.choice(PRINCIPAL))
    low = f.multiplicity()
    extra = {}
    for _ in range(rng.randint(0, 3)):
        i = rng.randint(0, 6)
        j = rng.randint(0, 4)
        if i + j > low + 1 or (i + j > low and rng.random() < 0.3):
            extra[(i, j)] = embed(rng.choice([1, -1, 2, -2, 3]))
    f = f + BivariatePoly(extra)
    r = rng.random()
    if r < 0.15:
        f = f * f
    elif r < 0.35:
        f = f * parse_polynomial(rng.choice(["y", "x", "y - x", "y + 2*x", "y - x^2"]))
    return f

