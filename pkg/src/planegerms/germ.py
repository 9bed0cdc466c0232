"""Function germs presented as a list of branches with factor multiplicities."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

from .cyclo import as_cyclo, as_rational, nth_root
from .errors import NotDistinct
from .series import (
    INF,
    Arc,
    BranchGerm,
    PuiseuxSeries,
    compose_unit_speed,
    reparameterize,
    revert_unit_speed,
    unit_power,
    valuation,
)

DEFAULT_CAP = 120

# successive truncation bounds tried when an arc has to be re-expanded in a chart
ARC_BOUNDS = (12, 24, 48, 96)


class GermPresentation:
    """``f = f_1^{m_1} ... f_r^{m_r}`` given by the branches ``f_i = 0``.

    ``shear`` records the chart: branches are expressed in coordinates
    ``(X, Y) = (x - a*y, y)`` when the original germ had a branch tangent to
    the y-axis.  Invariants do not depend on the chart; arcs given in the
    original coordinates are moved into it before any order computation.
    """

    def __init__(
        self,
        factors: Iterable[tuple[BranchGerm, int]],
        shear: Fraction | None = None,
        cap: int = DEFAULT_CAP,
    ):
        self.factors: tuple[tuple[BranchGerm, int], ...] = tuple((b, int(k)) for b, k in factors)
        if not self.factors:
            raise ValueError("a germ presentation needs at least one branch")
        for b, k in self.factors:
            if k < 1:
                raise ValueError(f"factor multiplicity must be positive, got {k}")
        for i, (bi, _) in enumerate(self.factors):
            for j in range(i):
                if bi.same_locus(self.factors[j][0]):
                    raise NotDistinct(f"branches {j} and {i} have the same zero locus")
        self.shear = None if shear is None or shear == 0 else as_rational(shear)
        self.cap = cap
        self._chars = None
        self._matrix = None
        # set by readers that start from a polynomial
        self.source_poly = None
        self.report = None

    @property
    def branches(self) -> list[BranchGerm]:
        return [b for b, _ in self.factors]

    @property
    def mults(self) -> list[int]:
        return [k for _, k in self.factors]

    def __len__(self):
        return len(self.factors)

    def multiplicity(self) -> int:
        """Multiplicity of ``f`` at the origin: ``sum mult_i * m_i``."""
        return sum(k * b.m for b, k in self.factors)

    def char_data(self) -> list:
        if self._chars is None:
            from .invariants import characteristic_data

            self._chars = [characteristic_data(b) for b in self.branches]
        return self._chars

    def intersection_matrix(self) -> list[list[int]]:
        """Symmetric matrix of pairwise intersection numbers; the diagonal is 0."""
        if self._matrix is None:
            from .invariants import intersection_number

            r = len(self.factors)
            mat = [[0] * r for _ in range(r)]
            for i in range(r):
                for j in range(i):
                    mat[i][j] = mat[j][i] = intersection_number(self.factors[i][0], self.factors[j][0])
            self._matrix = mat
        return self._matrix

    def permuted(self, order: Sequence[int]) -> GermPresentation:
        return GermPresentation([self.factors[i] for i in order], self.shear, self.cap)

    def arc_in_chart(self, a: Arc, bound: int = ARC_BOUNDS[0]) -> Arc:
        if self.shear is None:
            return a
        return shear_arc(a, self.shear, bound, self.cap)

    def __repr__(self):
        parts = ", ".join(f"(m={b.m}, psi={b.psi!r}, mult={k})" for b, k in self.factors)
        chart = "" if self.shear is None else f", shear={self.shear}"
        return f"GermPresentation([{parts}]{chart})"


def _integer_exponents(s: PuiseuxSeries) -> int:
    return math.lcm(1, *(q.denominator for q in s.exponents()), *(() if s.exact else (s.trunc.denominator,)))


def _scale_coefficients(s: PuiseuxSeries, rho) -> PuiseuxSeries:
    """``s(t / rho)`` for integer exponents."""
    inv = rho.inverse()
    return PuiseuxSeries._raw(tuple((q, c * inv ** int(q)) for q, c in s.terms), s.exact, s.trunc)


def shear_arc(a: Arc, shear, bound: int, cap: int = DEFAULT_CAP) -> Arc:
    """Express an arc in the chart ``(X, Y) = (x - shear*y, y)``, with ``X = s^p`` exactly.

    The new second coordinate is known through ``s^bound``.
    """
    shear = as_cyclo(shear)
    if a.kind == "x":
        d = _integer_exponents(a.y)
        y = reparameterize(a.y, d)
        x = PuiseuxSeries.monomial(a.p * d)
    else:
        d = _integer_exponents(a.v)
        y = reparameterize(a.v, d).shift(a.e_prime * d)
        x = PuiseuxSeries.zero()
    big_x = x - y * shear
    v = valuation(big_x)
    if v == INF:
        vy = valuation(y)
        return Arc.y_axis(int(vy), y.shift(-vy))
    if not isinstance(v, Fraction):
        raise ValueError("arc first coordinate is not determined")
    c = big_x.coefficient(v)
    n = int(v)
    rho = nth_root(c, n, cap)
    unit = big_x.shift(-v) * c.inverse()
    if unit.exact and unit == PuiseuxSeries.monomial(0):
        # X = (rho*s)^n already: rescaling the parameter is exact
        return Arc.x_normalized(n, _scale_coefficients(y, rho))
    bound = Fraction(bound)
    g = unit_power(unit, Fraction(1, n), bound)
    inverse_speed = revert_unit_speed(_scale_coefficients(g, rho), bound)
    new_y = compose_unit_speed(_scale_coefficients(y, rho), inverse_speed, bound)
    return Arc.x_normalized(n, new_y)
