"""Finitely supported Puiseux series with an explicit truncation marker, arcs
and branch parameterizations.

A series is either *exact* (every omitted term is zero) or truncated at
``trunc``: terms with exponent <= trunc are complete, anything above is
unknown.  Operations propagate the bound instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .cyclo import CycloNumber, as_cyclo, as_rational, embed, format_rational, root_of_unity
from .errors import AxisTangentBranch, IncompatibleRamification, InsufficientTruncation, NotIrreducible

INF = math.inf
Exponent = Union[Fraction, float]


@dataclass(frozen=True)
class AboveTrunc:
    """Valuation of a truncated series whose known part vanishes: only ``> bound`` is known."""

    bound: Fraction

    def __str__(self):
        return f">{format_rational(self.bound)}"


def _lcm_denominators(exps: Iterable[Fraction]) -> int:
    return math.lcm(1, *(q.denominator for q in exps))


class PuiseuxSeries:
    """Immutable series ``sum c_q t^q`` with rational ``q >= 0``."""

    __slots__ = ("terms", "exact", "trunc")

    def __init__(self, terms: Mapping | Iterable = (), exact: bool = True, trunc=None):
        acc: dict[Fraction, CycloNumber] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for q, c in items:
            q = as_rational(q)
            if q < 0:
                raise ValueError("negative exponents are not supported")
            acc[q] = acc.get(q, embed(0)) + as_cyclo(c)
        if exact:
            trunc = None
        else:
            if trunc is None:
                raise ValueError("a truncated series needs a trunc bound")
            trunc = as_rational(trunc)
        self.terms = tuple(
            (q, c) for q, c in sorted(acc.items()) if not c.is_zero() and (trunc is None or q <= trunc)
        )
        self.exact = exact
        self.trunc = trunc

    @classmethod
    def _raw(cls, terms, exact, trunc) -> PuiseuxSeries:
        obj = object.__new__(cls)
        obj.terms = terms
        obj.exact = exact
        obj.trunc = None if exact else trunc
        return obj

    @classmethod
    def _from_dict(cls, acc: dict, exact: bool, trunc) -> PuiseuxSeries:
        terms = tuple(
            (q, c) for q, c in sorted(acc.items()) if not c.is_zero() and (exact or q <= trunc)
        )
        return cls._raw(terms, exact, trunc)

    @classmethod
    def monomial(cls, exponent, coeff=1) -> PuiseuxSeries:
        return cls([(exponent, coeff)])

    @classmethod
    def zero(cls) -> PuiseuxSeries:
        return cls._raw((), True, None)

    # -- inspection ------------------------------------------------------
    @property
    def trunc_bound(self) -> Exponent:
        """``trunc`` with exact series treated as truncated at +inf."""
        return INF if self.exact else self.trunc

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return self.exact and not self.terms

    def exponents(self) -> tuple[Fraction, ...]:
        return tuple(q for q, _ in self.terms)

    def coefficient(self, q) -> CycloNumber:
        q = as_rational(q)
        if not self.exact and q > self.trunc:
            raise InsufficientTruncation(f"coefficient of t^{q} lies beyond trunc {self.trunc}")
        for e, c in self.terms:
            if e == q:
                return c
        return embed(0)

    def lower_valuation(self) -> Exponent:
        """A lower bound for the valuation that is exact whenever the valuation is known."""
        if self.terms:
            return self.terms[0][0]
        return self.trunc_bound

    def ramification(self) -> int:
        return _lcm_denominators(self.exponents())

    def conductor(self) -> int:
        return math.lcm(1, *(c.conductor for _, c in self.terms))

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other: PuiseuxSeries) -> PuiseuxSeries:
        exact = self.exact and other.exact
        trunc = None if exact else min(self.trunc_bound, other.trunc_bound)
        acc = dict(self.terms)
        for q, c in other.terms:
            acc[q] = acc[q] + c if q in acc else c
        return PuiseuxSeries._from_dict(acc, exact, trunc)

    def __neg__(self) -> PuiseuxSeries:
        return PuiseuxSeries._raw(tuple((q, -c) for q, c in self.terms), self.exact, self.trunc)

    def __sub__(self, other: PuiseuxSeries) -> PuiseuxSeries:
        return self + (-other)

    def __mul__(self, other) -> PuiseuxSeries:
        if not isinstance(other, PuiseuxSeries):
            c = as_cyclo(other)
            if c.is_zero():
                return PuiseuxSeries.zero()
            return PuiseuxSeries._raw(tuple((q, a * c) for q, a in self.terms), self.exact, self.trunc)
        if self.is_zero() or other.is_zero():
            return PuiseuxSeries.zero()
        exact = self.exact and other.exact
        trunc = None
        if not exact:
            trunc = min(
                self.lower_valuation() + other.trunc_bound,
                other.lower_valuation() + self.trunc_bound,
            )
        acc: dict[Fraction, CycloNumber] = {}
        for qa, ca in self.terms:
            for qb, cb in other.terms:
                q = qa + qb
                if trunc is not None and q > trunc:
                    break
                p = ca * cb
                acc[q] = acc[q] + p if q in acc else p
        return PuiseuxSeries._from_dict(acc, exact, trunc)

    __rmul__ = __mul__

    def shift(self, q) -> PuiseuxSeries:
        """Multiply by ``t^q``."""
        q = as_rational(q)
        trunc = None if self.exact else self.trunc + q
        return PuiseuxSeries._raw(tuple((e + q, c) for e, c in self.terms), self.exact, trunc)

    def truncate(self, bound) -> PuiseuxSeries:
        """Forget every term above ``bound``."""
        bound = as_rational(bound)
        if not self.exact and self.trunc <= bound:
            return self
        return PuiseuxSeries._raw(tuple(t for t in self.terms if t[0] <= bound), False, bound)

    def __pow__(self, k: int) -> PuiseuxSeries:
        result = PuiseuxSeries.monomial(0)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.exact == other.exact and self.trunc == other.trunc and self.terms == other.terms

    def __hash__(self):
        return hash((self.terms, self.exact, self.trunc))

    def agrees_with(self, other: PuiseuxSeries) -> bool:
        """Equal on the common range of known exponents."""
        bound = min(self.trunc_bound, other.trunc_bound)
        diff = self - other
        return not any(q <= bound for q, _ in diff.terms)

    def evaluate(self, t: float) -> complex:
        """Numeric value at a real ``t > 0`` (truncated tail ignored)."""
        return sum(c.to_complex() * t ** float(q) for q, c in self.terms) + 0j

    def __repr__(self):
        tail = "" if self.exact else f" + O(t^{format_rational(self.trunc)}+)"
        return f"PuiseuxSeries({format_series(self)}{tail})"


def format_series(s: PuiseuxSeries, var: str = "t") -> str:
    if not s.terms:
        return "0"
    parts = []
    for q, c in s.terms:
        mono = "" if q == 0 else (var if q == 1 else f"{var}^{format_rational(q) if q.denominator == 1 else '(' + format_rational(q) + ')'}")
        if not mono:
            parts.append(str(c) if c.is_rational() else f"({c})")
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append((str(c) if c.is_rational() else f"({c})") + "*" + mono)
    return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# functional surface


def valuation(s: PuiseuxSeries) -> Fraction | float | AboveTrunc:
    if s.terms:
        return s.terms[0][0]
    if s.exact:
        return INF
    return AboveTrunc(s.trunc)


def add(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a + b


def mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    return a * b


def scale_variable(s: PuiseuxSeries, n: int, k: int) -> PuiseuxSeries:
    """Substitute ``t -> zeta_n^k * t``; integer exponents only."""
    if n < 1:
        raise ValueError("root-of-unity order must be positive")
    out = []
    for q, c in s.terms:
        if q.denominator != 1:
            raise IncompatibleRamification(
                f"t^{format_rational(q)} under t -> zeta_{n}^{k} t is ambiguous; "
                "reparameterize to integer exponents first"
            )
        e = (k * q.numerator) % n
        out.append((q, c if e == 0 else c * root_of_unity(n, e)))
    return PuiseuxSeries._raw(tuple(out), s.exact, s.trunc)


def reparameterize(s: PuiseuxSeries, p: int, q: int = 1) -> PuiseuxSeries:
    """Substitute ``t -> t^(p/q)``."""
    if p < 1 or q < 1:
        raise ValueError("p and q must be positive")
    r = Fraction(p, q)
    if r == 1:
        return s
    trunc = None if s.exact else s.trunc * r
    return PuiseuxSeries._raw(tuple((e * r, c) for e, c in s.terms), s.exact, trunc)


# --------------------------------------------------------------------------
# unit powers and composition (used to normalize arcs after a coordinate change)


def unit_power(u: PuiseuxSeries, r: Fraction, bound: Fraction) -> PuiseuxSeries:
    """``u^r`` for a unit ``u`` with constant term 1, known through ``bound``."""
    r = as_rational(r)
    if not u.terms or u.terms[0][0] != 0 or u.terms[0][1] != 1:
        raise ValueError("unit_power needs constant term 1")
    h = PuiseuxSeries._raw(u.terms[1:], u.exact, u.trunc)
    if h.is_zero():
        return PuiseuxSeries.monomial(0)
    h = h.truncate(bound)
    if not h.terms:
        return PuiseuxSeries.monomial(0).truncate(bound)
    result = PuiseuxSeries.zero().truncate(bound)
    vh = h.terms[0][0]
    power = PuiseuxSeries.monomial(0)
    binom = Fraction(1)
    j = 0
    while j * vh <= bound:
        if j:
            binom = binom * (r - j + 1) / j
            power = (power * h).truncate(bound)
        result = result + power * binom
        j += 1
    return result


def compose_unit_speed(y: PuiseuxSeries, g: PuiseuxSeries, bound: Fraction) -> PuiseuxSeries:
    """``y(s * g(s))`` for a unit ``g`` with ``g(0) = 1``, known through ``bound``."""
    acc = PuiseuxSeries.zero().truncate(bound)
    for q, c in y.terms:
        if q > bound:
            break
        acc = acc + (unit_power(g, q, bound - q).shift(q) * c)
    if not y.exact:
        acc = acc.truncate(min(bound, y.trunc))
    return acc


def revert_unit_speed(h: PuiseuxSeries, bound: Fraction) -> PuiseuxSeries:
    """Given ``s = t*h(t)`` with ``h(0) = 1``, return ``g`` with ``t = s*g(s)``."""
    g = PuiseuxSeries.monomial(0).truncate(bound)
    inv_h = unit_power(h, Fraction(-1), bound)
    # fixed point g(s) = 1/h(s*g(s)); each pass fixes at least the next exponent
    for _ in range(int(bound * _lcm_denominators(h.exponents()) + 2)):
        new = compose_unit_speed(inv_h, g, bound)
        if new == g:
            break
        g = new
    return g


# --------------------------------------------------------------------------
# arcs and branches


@dataclass(frozen=True)
class Arc:
    """Half-branch parameterization.

    ``kind == "x"``: ``t -> (t^p, y(t))``.  ``kind == "y-axis"``:
    ``t -> (0, t^e' v(t))`` with ``v(0) != 0``.
    """

    kind: str
    p: int = 1
    y: PuiseuxSeries = PuiseuxSeries._raw((), True, None)
    e_prime: int = 1
    v: PuiseuxSeries = PuiseuxSeries._raw(((Fraction(0), embed(1)),), True, None)

    def __post_init__(self):
        if self.kind not in ("x", "y-axis"):
            raise ValueError(f"unknown arc kind {self.kind!r}")
        if self.kind == "x":
            if self.p < 1:
                raise ValueError("arc exponent p must be positive")
            if self.y.terms and self.y.terms[0][0] <= 0:
                raise ValueError("arc second coordinate must vanish at t=0")
        else:
            if self.e_prime < 1:
                raise ValueError("e' must be positive")
            if not self.v.terms or self.v.terms[0][0] != 0:
                raise ValueError("y-axis arc needs a unit v with v(0) != 0")

    @classmethod
    def x_normalized(cls, p: int, y: PuiseuxSeries) -> Arc:
        return cls("x", p=p, y=y)

    @classmethod
    def y_axis(cls, e_prime: int = 1, v: PuiseuxSeries | None = None) -> Arc:
        return cls("y-axis", e_prime=e_prime, v=v if v is not None else PuiseuxSeries.monomial(0))

    def point(self, t: float) -> tuple[complex, complex]:
        if self.kind == "x":
            return complex(t**self.p), self.y.evaluate(t)
        return 0j, t**self.e_prime * self.v.evaluate(t)

    def with_first_coordinate(self, m: int) -> PuiseuxSeries:
        """Second coordinate after substituting t -> t^(m/p), so the first one is t^m."""
        if self.kind != "x":
            raise ValueError("y-axis arcs have no x-normalized form")
        return reparameterize(self.y, m, self.p)


def arc_size_order(a: Arc) -> Fraction:
    """Exponent ``mu`` with ``|a(t)| ~ M t^mu``."""
    if a.kind == "y-axis":
        return Fraction(a.e_prime)
    v = valuation(a.y)
    if isinstance(v, AboveTrunc):
        if v.bound >= a.p:
            return Fraction(a.p)
        raise InsufficientTruncation(f"order of the arc's y-coordinate is only known to exceed {v.bound}")
    return Fraction(min(Fraction(a.p), v)) if v != INF else Fraction(a.p)


@dataclass(frozen=True)
class BranchGerm:
    """Irreducible branch ``t -> (t^m, psi(t))``, y-axis not tangent (``val psi >= m``)."""

    m: int
    psi: PuiseuxSeries

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("branch multiplicity must be positive")
        for q, _ in self.psi.terms:
            if q.denominator != 1 or q <= 0:
                raise ValueError(f"branch exponents must be positive integers, got {q}")
        if self.psi.terms and self.psi.terms[0][0] < self.m:
            raise AxisTangentBranch(
                f"psi has order {self.psi.terms[0][0]} < m = {self.m}: the branch is tangent to the "
                "y-axis; change coordinates so that it is not"
            )
        if self.psi.exact and math.gcd(self.m, *(q.numerator for q in self.psi.exponents())) != 1:
            raise NotIrreducible(
                f"gcd of m={self.m} and the exponents of psi is not 1: the parameterization is not primitive"
            )

    def conjugate(self, l: int) -> PuiseuxSeries:
        """``psi(zeta_m^l t)``."""
        return scale_variable(self.psi, self.m, l)

    def same_locus(self, other: BranchGerm) -> bool:
        """Whether two parameterizations describe the same curve (up to known terms)."""
        if self.m != other.m:
            return False
        return any(self.conjugate(l).agrees_with(other.psi) for l in range(self.m))

    def point(self, u: complex) -> tuple[complex, complex]:
        return u**self.m, sum(c.to_complex() * u ** int(q) for q, c in self.psi.terms) + 0j
