"""Puiseux characteristic data, orders of germs along arcs, contacts and
intersection numbers of branches.

Conventions follow the usual Puiseux data of a branch ``t -> (t^m, psi(t))``:
``e_0 = m``, ``beta_0 = 0``, ``beta_{s+1} = +inf``, and the order of ``f``
along an arc whose coincidence exponent with the branch is ``lam`` is
``e_k*lam + sum_{i<=k} (e_{i-1} - e_i)*beta_i`` for ``beta_k <= lam < beta_{k+1}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Union

from .errors import InsufficientTruncation, NotDistinct, NotIrreducible
from .series import (
    INF,
    AboveTrunc,
    Arc,
    BranchGerm,
    PuiseuxSeries,
    arc_size_order,
    reparameterize,
    scale_variable,
    valuation,
)

if TYPE_CHECKING:
    from .germ import GermPresentation

Value = Union[Fraction, float]  # float only for +inf


@dataclass(frozen=True)
class CharData:
    m: int
    beta: tuple[int, ...]
    e: tuple[int, ...]
    msub: tuple[int, ...]

    @property
    def s(self) -> int:
        return len(self.beta)

    def e_at(self, k: int) -> int:
        return self.m if k == 0 else self.e[k - 1]

    def beta_at(self, k: int) -> Value:
        if k == 0:
            return 0
        if k > self.s:
            return INF
        return self.beta[k - 1]

    def regime(self, lam: Value) -> int:
        """The unique ``k`` with ``beta_k <= lam < beta_{k+1}``."""
        k = 0
        while k < self.s and self.beta[k] <= lam:
            k += 1
        return k

    def pairs(self) -> list[tuple[int, int]]:
        return list(zip(self.beta, self.e))

    def key(self) -> tuple:
        return (self.m, tuple(self.pairs()))

    def to_json(self) -> dict:
        return {"m": self.m, "pairs": [list(p) for p in self.pairs()], "msub": list(self.msub)}


@dataclass(frozen=True)
class OrderResult:
    nu: Value
    k: int
    lam: Value | None
    contact: Value

    def to_json(self) -> dict:
        from .serialize import value_to_json

        return {
            "nu": value_to_json(self.nu),
            "k": self.k,
            "lambda": None if self.lam is None else value_to_json(self.lam),
            "contact": value_to_json(self.contact),
        }


def characteristic_data(b: BranchGerm) -> CharData:
    e = b.m
    beta: list[int] = []
    es: list[int] = []
    for q, _ in b.psi.terms:
        if e == 1:
            break
        j = q.numerator
        if j % e:
            beta.append(j)
            e = math.gcd(e, j)
            es.append(e)
    if e != 1:
        if b.psi.exact:
            raise NotIrreducible(f"gcd chain of m={b.m} and psi stops at {e} > 1")
        raise InsufficientTruncation(
            f"gcd chain stops at {e} within trunc {b.psi.trunc}; expand psi further"
        )
    msub = tuple(prev // cur for prev, cur in zip([b.m] + es[:-1], es))
    return CharData(b.m, tuple(beta), tuple(es), msub)


def affine_order(cd: CharData, lam: Value) -> tuple[Value, int]:
    """``(nu, k)`` in the t^m parameterization for coincidence exponent ``lam``."""
    if lam == INF:
        return INF, cd.s
    k = cd.regime(lam)
    nu = cd.e_at(k) * Fraction(lam)
    for i in range(1, k + 1):
        nu += (cd.e_at(i - 1) - cd.e_at(i)) * cd.beta_at(i)
    return nu, k


def _conjugate_gaps(y_m: PuiseuxSeries, b: BranchGerm) -> list:
    return [valuation(y_m - b.conjugate(l)) for l in range(b.m)]


def coincidence_exponent(y: PuiseuxSeries, b: BranchGerm, p: int) -> tuple[Value, int]:
    """``(lam, l)``: max over conjugates of ``val(y(t^(m/p)) - psi(zeta_m^l t))``.

    ``l`` is reported in ``0..m-1`` with 0 the identity conjugate.
    """
    y_m = reparameterize(y, b.m, p)
    best, best_l = None, 0
    unknown = None
    for l, v in enumerate(_conjugate_gaps(y_m, b)):
        if isinstance(v, AboveTrunc):
            unknown = v
            continue
        if best is None or v > best:
            best, best_l = v, l
    if unknown is not None and (best is None or best != INF):
        raise InsufficientTruncation(
            f"coincidence with a conjugate is only known to exceed {unknown.bound}"
        )
    return best, best_l


def _transverse(y_m: PuiseuxSeries, b: BranchGerm) -> bool:
    """Arc and branch have different tangent lines (needs only leading terms)."""
    v = valuation(y_m)
    if isinstance(v, AboveTrunc):
        if v.bound < b.m:
            raise InsufficientTruncation("arc too short to decide its tangent line")
        v = b.m + 1
    if v < b.m:
        return True
    return y_m.coefficient(b.m) != b.psi.coefficient(b.m)


def order_along_parameterized(b: BranchGerm, a: Arc) -> OrderResult:
    """Order of the branch equation along ``a`` in the arc's own parameter."""
    cd = characteristic_data(b)
    if a.kind == "y-axis":
        return OrderResult(Fraction(b.m * a.e_prime), 0, None, Fraction(1))
    lam, _ = coincidence_exponent(a.y, b, a.p)
    nu_m, k = affine_order(cd, lam)
    y_m = a.with_first_coordinate(b.m)
    mu_m = arc_size_order(Arc.x_normalized(b.m, y_m))
    contact_value = INF if lam == INF else Fraction(lam) / mu_m
    nu = INF if nu_m == INF else nu_m * Fraction(a.p, b.m)
    return OrderResult(nu, k, lam, contact_value)


def contact(a: Arc, b: BranchGerm) -> Value:
    """Contact exponent ``lam / mu`` of the arc with the branch's curve."""
    if a.kind == "y-axis":
        return Fraction(1)
    y_m = a.with_first_coordinate(b.m)
    if _transverse(y_m, b):
        return Fraction(1)
    lam, _ = coincidence_exponent(a.y, b, a.p)
    if lam == INF:
        return INF
    return Fraction(lam) / arc_size_order(Arc.x_normalized(b.m, y_m))


def order_along_halfbranch(b: BranchGerm, a: Arc) -> OrderResult:
    """Order per unit of distance to the origin, from the contact alone."""
    cd = characteristic_data(b)
    c = contact(a, b)
    if c == INF:
        return OrderResult(INF, cd.s, INF, INF)
    k = cd.regime(b.m * c)
    nu = cd.e_at(k) * c
    for i in range(1, k + 1):
        nu += Fraction((cd.e_at(i - 1) - cd.e_at(i)) * cd.beta_at(i), b.m)
    lam = None
    if a.kind == "x" and k > 0:
        lam = b.m * c
    return OrderResult(nu, k, lam, c)


def factor_orders(g: GermPresentation, a: Arc) -> list[OrderResult]:
    """Per-factor normalized orders along the half-branch of ``a`` (given in the germ's
    original coordinates)."""
    from .germ import ARC_BOUNDS

    last = None
    for bound in ARC_BOUNDS:
        chart_arc = g.arc_in_chart(a, bound)
        try:
            return [order_along_halfbranch(b, chart_arc) for b in g.branches]
        except InsufficientTruncation as exc:
            if g.shear is None:
                raise
            last = exc
    raise last


def order_of_germ(g: GermPresentation, a: Arc) -> Value:
    """Weighted sum of the per-factor orders along the half-branch of ``a``."""
    total: Value = Fraction(0)
    for res, mult in zip(factor_orders(g, a), g.mults):
        if res.nu == INF:
            return INF
        total += mult * res.nu
    return total


def intersection_number(b1: BranchGerm, b2: BranchGerm) -> int:
    """``(X_1, X_2)_0`` as a sum of conjugate coincidences at ``x = t^lcm(m1, m2)``."""
    if b1.same_locus(b2) and b1.psi.exact and b2.psi.exact:
        raise NotDistinct("intersection number of a branch with itself is infinite")
    big = math.lcm(b1.m, b2.m)
    p1 = reparameterize(b1.psi, big // b1.m)
    total = Fraction(0)
    for i in range(b2.m):
        p2 = reparameterize(scale_variable(b2.psi, b2.m, i), big // b2.m)
        v = valuation(p1 - p2)
        if isinstance(v, AboveTrunc):
            raise InsufficientTruncation(
                f"branches agree through exponent {v.bound} at ramification {big}"
            )
        if v == INF:
            raise NotDistinct("the two branches have the same zero locus")
        total += v
    value = total * Fraction(b1.m, big)
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral intersection number {value}")
    return int(value)


def separation_exponent(b1: BranchGerm, b2: BranchGerm) -> Fraction:
    """Largest conjugate coincidence between two branches, in ``b1``'s parameter."""
    big = math.lcm(b1.m, b2.m)
    p1 = reparameterize(b1.psi, big // b1.m)
    worst = Fraction(0)
    for i in range(b2.m):
        v = valuation(p1 - reparameterize(scale_variable(b2.psi, b2.m, i), big // b2.m))
        if isinstance(v, AboveTrunc):
            raise InsufficientTruncation(f"branches agree through exponent {v.bound}")
        worst = max(worst, Fraction(v) * Fraction(b1.m, big))
    return worst
