"""Newton-Puiseux expansion of a bivariate polynomial into branches at the origin.

The singular part of each branch is found by walking Newton polygons with
exact face roots in the cyclotomic tower; once a face root is simple the rest
of the branch is the unique solution of a regular implicit equation, computed
by Newton iteration on dense truncated series.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .cyclo import CycloNumber, as_cyclo, embed, guess_cyclotomic, nth_root
from .errors import DegenerateAxis, GermNotVanishing, InsufficientTruncation, UnsupportedExtension
from .germ import DEFAULT_CAP, GermPresentation
from .poly import (
    BivariatePoly,
    UPoly,
    squarefree_decomposition,
    u_divmod,
    u_eval,
    u_format,
    u_monic,
    u_squarefree_part,
    u_trim,
)
from .series import BranchGerm, PuiseuxSeries

ZERO = embed(0)
ONE = embed(1)

#: environment variable holding the default conductor cap
CAP_ENV = "PLANEGERMS_CONDUCTOR_CAP"

MAX_PRECISION = 1024


def default_cap() -> int:
    value = os.environ.get(CAP_ENV)
    if value:
        try:
            cap = int(value)
        except ValueError:
            raise ValueError(f"{CAP_ENV} must be a positive integer, got {value!r}") from None
        if cap >= 1:
            return cap
        raise ValueError(f"{CAP_ENV} must be a positive integer, got {value!r}")
    return DEFAULT_CAP


# --------------------------------------------------------------------------
# Newton polygon


@dataclass(frozen=True)
class Edge:
    slope: Fraction
    face: tuple[CycloNumber, ...]
    start: tuple[int, int]
    end: tuple[int, int]

    def face_string(self) -> str:
        return u_format(list(self.face))


@dataclass(frozen=True)
class NewtonPolygon:
    edges: tuple[Edge, ...]
    y_order: int
    x_order: int

    @property
    def vertical(self) -> bool:
        """``x`` divides ``f``: the y-axis is a component."""
        return self.x_order > 0


def newton_polygon(f: BivariatePoly) -> NewtonPolygon:
    """Edges of the lower-left hull; along an edge of slope ``g`` the roots are ``y ~ z x^g``."""
    if f.is_zero():
        raise ValueError("the zero polynomial has no Newton polygon")
    pts = list(f.terms)
    i_min = min(i for i, _ in pts)
    j_min = min(j for _, j in pts)
    cur = (i_min, min(j for i, j in pts if i == i_min))
    edges = []
    while cur[1] > j_min:
        i1, j1 = cur
        best, nxt = None, None
        for i, j in pts:
            if j < j1:
                s = Fraction(i - i1, j1 - j)
                if best is None or s < best or (s == best and j < nxt[1]):
                    best, nxt = s, (i, j)
        face = [ZERO] * (j1 + 1)
        for (i, j), c in f.terms.items():
            if j <= j1 and (i - i1) == best * (j1 - j):
                face[j] = c
        edges.append(Edge(best, tuple(u_trim(face)), cur, nxt))
        cur = nxt
    return NewtonPolygon(tuple(edges), j_min, i_min)


# --------------------------------------------------------------------------
# face roots


def _numeric_roots(p: UPoly) -> np.ndarray:
    return np.roots([c.to_complex() for c in reversed(p)])


def _linear_factor_out(p: UPoly, r: CycloNumber) -> UPoly:
    q, rem = u_divmod(p, [-r, ONE])
    if rem:
        raise ArithmeticError("root does not divide")
    return q


def face_roots(p: Sequence[CycloNumber], cap: int) -> list[tuple[CycloNumber, int]]:
    """Nonzero roots of a univariate polynomial with multiplicities, exactly.

    Raises UnsupportedExtension when some root lies outside Q(zeta_M), M <= cap.
    """
    p = u_trim(list(p))
    while p and p[0].is_zero():
        p = p[1:]
    rest = u_squarefree_part(p)
    found: list[CycloNumber] = []
    if len(rest) > 2:
        for z in sorted(_numeric_roots(rest), key=lambda w: (round(w.real, 9), round(w.imag, 9))):
            for cand in guess_cyclotomic(complex(z), cap):
                if cand.conductor <= cap and u_eval(rest, cand).is_zero():
                    found.append(cand)
                    rest = _linear_factor_out(rest, cand)
                    break
            if len(rest) <= 3:
                break
    if len(rest) == 3:
        c, b, _ = u_monic(rest)
        disc = b * b - c * 4
        try:
            root = nth_root(disc, 2, cap)
        except UnsupportedExtension:
            root = None
        if root is not None:
            for sign in (1, -1):
                found.append((-b + root * sign) / 2)
            rest = [ONE]
    if len(rest) == 2:
        c, lead = rest
        found.append(-c / lead)
        rest = [ONE]
    if len(rest) > 1:
        raise UnsupportedExtension(
            f"face polynomial {u_format(p)} has roots outside the cyclotomic fields of "
            f"conductor <= {cap}; supply the branch data directly"
        )
    out = []
    for r in found:
        k, q = 0, p
        while True:
            quo, rem = u_divmod(q, [-r, ONE])
            if rem:
                break
            k, q = k + 1, quo
        out.append((r, k))
    return out


# --------------------------------------------------------------------------
# dense truncated series in one variable, integer exponents 0..n-1


def _d_mul(a: list, b: list, n: int) -> list:
    out = [ZERO] * n
    for i, x in enumerate(a[:n]):
        if x.is_zero():
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return out


def _d_inv(a: list, n: int) -> list:
    inv0 = a[0].inverse()
    out = [inv0] + [ZERO] * (n - 1)
    for k in range(1, n):
        acc = ZERO
        for i in range(1, min(k, len(a) - 1) + 1):
            if not a[i].is_zero():
                acc = acc + a[i] * out[k - i]
        out[k] = -acc * inv0
    return out


def _d_eval(rows: list[UPoly], y: list, n: int) -> list:
    """``sum_j rows[j](t) * y^j`` mod ``t^n`` (Horner in y)."""
    acc = [ZERO] * n
    for row in reversed(rows):
        acc = _d_mul(acc, y, n)
        for i, c in enumerate(row[:n]):
            acc[i] = acc[i] + c
    return acc


# --------------------------------------------------------------------------
# branch seeds


@dataclass
class _Seed:
    """``x = t^M``, ``y = P(t) + t^E * Y(t)`` with ``g(t, Y) = 0`` regular at the origin.

    ``rows`` is ``None`` for an exact branch ``Y = 0``.
    """

    M: int
    P: PuiseuxSeries
    E: int
    rows: list[UPoly] | None = None
    drows: list[UPoly] | None = None
    Y: list = field(default_factory=list)
    exact_tail: bool = False

    @property
    def exact(self) -> bool:
        return self.rows is None or self.exact_tail

    def precision(self) -> int:
        """Exponents of psi known so far."""
        return self.E + len(self.Y) - 1

    def extend(self, psi_trunc: int) -> None:
        if self.exact:
            return
        n = psi_trunc - self.E + 1
        if len(self.Y) >= n:
            return
        y = self.Y + [ZERO] * (n - len(self.Y)) if self.Y else [ZERO] * n
        prec = max(1, len(self.Y))
        while prec < n:
            prec = min(2 * prec, n)
            r = _d_eval(self.rows, y, prec)
            d = _d_eval(self.drows, y, prec)
            corr = _d_mul(r, _d_inv(d, prec), prec)
            y = [y[i] - corr[i] if i < prec else y[i] for i in range(n)]
        self.Y = y
        self._check_exact_tail()

    def _check_exact_tail(self) -> None:
        nz = [(i, c) for i, c in enumerate(self.Y) if not c.is_zero()]
        if len(nz) > 4:
            return
        ys = PuiseuxSeries({i: c for i, c in nz})
        acc = PuiseuxSeries.zero()
        for j, row in enumerate(self.rows):
            if row:
                acc = acc + PuiseuxSeries({i: c for i, c in enumerate(row)}) * ys**j
        if acc.is_zero():
            self.exact_tail = True

    def psi(self) -> PuiseuxSeries:
        if self.rows is None:
            return self.P
        tail = PuiseuxSeries({i: c for i, c in enumerate(self.Y)})
        full = self.P + tail.shift(self.E)
        if self.exact_tail:
            return full
        return full.truncate(self.precision())


def _substitute(g: BivariatePoly, b: int, a: int, z0: CycloNumber, level: int) -> BivariatePoly:
    """``g(t^b, t^a (z0 + Y)) / t^level``."""
    acc: dict[tuple[int, int], CycloNumber] = {}
    dy = g.degree_y()
    binom_powers: list[list[CycloNumber]] = []
    zpow = [ONE]
    for _ in range(dy):
        zpow.append(zpow[-1] * z0)
    for j in range(dy + 1):
        binom_powers.append([zpow[j - k] * math.comb(j, k) for k in range(j + 1)])
    for (i, j), c in g.terms.items():
        e = b * i + a * j - level
        for k, w in enumerate(binom_powers[j]):
            key = (e, k)
            p = c * w
            acc[key] = acc[key] + p if key in acc else p
    return BivariatePoly._raw({k: v for k, v in acc.items() if not v.is_zero()})


def _drop_y_factor(g: BivariatePoly) -> BivariatePoly:
    return BivariatePoly._raw({(i, j - 1): c for (i, j), c in g.terms.items()})


def _seeds(g: BivariatePoly, M: int, P: PuiseuxSeries, E: int, cap: int, out: list) -> None:
    while g.terms and g.y_order() >= 1:
        out.append(_Seed(M, P, E))
        g = _drop_y_factor(g)
    if not g.terms:
        return
    d = min((j for (i, j) in g.terms if i == 0), default=None)
    if not d:
        return  # g(0, 0) != 0, or x | g (impossible after the chart change)
    if d == 1:
        rows = g.as_y_poly()
        drows = [u_trim([c * j for c in rows[j]]) for j in range(1, len(rows))]
        seed = _Seed(M, P, E, rows, drows, [ZERO])
        out.append(seed)
        return
    poly = newton_polygon(g)
    for edge in poly.edges:
        a, b = edge.slope.numerator, edge.slope.denominator
        j_low = edge.end[1]
        # face(z) = z^j_low * Phi(z^b)
        phi = [edge.face[j] for j in range(j_low, len(edge.face), b)]
        level = b * edge.start[0] + a * edge.start[1]
        for w, _ in face_roots(phi, cap):
            z0 = nth_root(w, b, cap)
            g1 = _substitute(g, b, a, z0, level)
            P1 = _reramify(P, b) + PuiseuxSeries.monomial(E * b + a, z0)
            _seeds(g1, M * b, P1, E * b + a, cap, out)


def _reramify(P: PuiseuxSeries, b: int) -> PuiseuxSeries:
    return PuiseuxSeries._raw(tuple((q * b, c) for q, c in P.terms), P.exact, None if P.exact else P.trunc * b)


# --------------------------------------------------------------------------
# chart selection


def shear_candidates() -> Iterable[Fraction]:
    """1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, ..."""
    n = 1
    while True:
        seen = set()
        for q in (Fraction(n), Fraction(1, n)):
            if q not in seen:
                seen.add(q)
                yield q
                yield -q
        n += 1


def tangent_cone_blocks_y(f: BivariatePoly) -> bool:
    """True when the lowest homogeneous part has no ``y^d`` term (some branch is tangent to x = 0)."""
    return f.coefficient(0, f.multiplicity()).is_zero()


def choose_shear(f: BivariatePoly) -> Fraction | None:
    if not tangent_cone_blocks_y(f):
        return None
    d = f.multiplicity()
    cone = [(i, c) for (i, j), c in f.terms.items() if i + j == d]
    for a in shear_candidates():
        if not sum((c * a**i for i, c in cone), ZERO).is_zero():
            return a
    raise AssertionError("unreachable")  # pragma: no cover


# --------------------------------------------------------------------------
# expansion driver


@dataclass
class ExpansionReport:
    branches: list[tuple[BranchGerm, int]]
    applied_shear: Fraction | None
    certified_trunc: list[Fraction | None]
    cap: int = DEFAULT_CAP

    def germ(self) -> GermPresentation:
        return GermPresentation(self.branches, self.applied_shear, self.cap)


def _branch_key(b: BranchGerm, k: int):
    return (k, b.m, [(q, str(c)) for q, c in b.psi.terms], b.psi.exact)


def _certify(seeds: list[tuple[_Seed, int]], target: int) -> tuple[list[BranchGerm], list[Fraction | None]]:
    from .invariants import characteristic_data, separation_exponent

    for s, _ in seeds:
        s.extend(max(target, s.E + 1))
    while True:
        branches = [BranchGerm(s.M, s.psi()) for s, _ in seeds]
        need = [Fraction(target) if not s.exact else None for s, _ in seeds]
        try:
            for i, (b, (s, _)) in enumerate(zip(branches, seeds)):
                cd = characteristic_data(b)
                if need[i] is not None and cd.beta:
                    need[i] = max(need[i], Fraction(cd.beta[-1] + 1))
            for i in range(len(branches)):
                for j in range(len(branches)):
                    if i != j and need[i] is not None:
                        v = separation_exponent(branches[i], branches[j])
                        need[i] = max(need[i], math.floor(v) + 1)
        except InsufficientTruncation:
            grow = False
            for s, _ in seeds:
                if not s.exact:
                    if s.precision() >= MAX_PRECISION:
                        raise
                    s.extend(2 * s.precision() + 1)
                    grow = True
            if not grow:
                raise
            continue
        lacking = [s for (s, _), n in zip(seeds, need) if n is not None and s.precision() < n]
        if not lacking:
            break
        for (s, _), n in zip(seeds, need):
            if n is not None:
                s.extend(int(n))
    final = []
    certs = []
    for b, n, (s, _) in zip(branches, need, seeds):
        if s.exact:
            final.append(BranchGerm(b.m, s.psi()))
            certs.append(None)
        else:
            final.append(BranchGerm(b.m, s.psi().truncate(n)))
            certs.append(Fraction(n))
    return final, certs


def expand(
    f: BivariatePoly,
    target_trunc: int = 6,
    cap: int | None = None,
    shear: Fraction | None | str = "auto",
) -> ExpansionReport:
    """Branches of ``f = 0`` at the origin with factor multiplicities.

    ``shear="auto"`` applies ``x -> x + a*y`` only when a branch is tangent to
    the y-axis; an explicit rational forces that chart.
    """
    cap = default_cap() if cap is None else cap
    if f.is_zero():
        raise GermNotVanishing("the zero polynomial does not define a germ")
    if not f.constant_term().is_zero():
        raise GermNotVanishing(f"f(0,0) = {f.constant_term()} is not zero")
    if shear == "auto":
        shear = choose_shear(f)
    elif shear is not None:
        shear = Fraction(shear)
        if shear == 0:
            shear = None
    g = f.shear(shear) if shear is not None else f
    if tangent_cone_blocks_y(g):
        raise DegenerateAxis(
            f"a branch is tangent to the y-axis in the chart x -> x + ({shear})*y; choose another shear"
        )
    seeds: list[tuple[_Seed, int]] = []
    for s, k in squarefree_decomposition(g):
        found: list[_Seed] = []
        _seeds(s, 1, PuiseuxSeries.zero(), 0, cap, found)
        seeds.extend((seed, k) for seed in found)
    if not seeds:
        raise GermNotVanishing("no branch passes through the origin")
    branches, certs = _certify(seeds, int(target_trunc))
    order = sorted(range(len(branches)), key=lambda i: _branch_key(branches[i], seeds[i][1]))
    return ExpansionReport(
        [(branches[i], seeds[i][1]) for i in order],
        shear,
        [certs[i] for i in order],
        cap,
    )


def germ_from_branch_data(specs: Iterable, cap: int | None = None) -> GermPresentation:
    """Germ from explicit branches ``{m, psi, mult}``; ``psi`` is exact.

    ``psi`` may be a :class:`PuiseuxSeries`, an expression in ``t``, or a list
    of ``(exp, coeff)`` pairs.
    """
    from .parser import parse_series

    cap = default_cap() if cap is None else cap
    factors = []
    for spec in specs:
        if isinstance(spec, dict):
            m, psi, mult = spec["m"], spec["psi"], spec.get("mult", 1)
        else:
            m, psi, mult = spec
        if isinstance(psi, str):
            psi = parse_series(psi)
        elif not isinstance(psi, PuiseuxSeries):
            psi = PuiseuxSeries([(e, as_cyclo(c)) for e, c in psi])
        factors.append((BranchGerm(int(m), psi), int(mult)))
    return GermPresentation(factors, None, cap)


def residual_valuation(f: BivariatePoly, b: BranchGerm, shear: Fraction | None = None):
    """``val f(t^m, psi(t))`` in the chart of the expansion (truncation-aware)."""
    from .series import valuation

    g = f.shear(shear) if shear is not None else f
    acc = PuiseuxSeries.zero()
    rows = g.as_y_poly()
    for row in reversed(rows):
        acc = acc * b.psi
        acc = acc + PuiseuxSeries({i * b.m: c for i, c in enumerate(row)})
    return valuation(acc)


def expand_together(
    polys: Sequence[BivariatePoly], target_trunc: int = 6, cap: int | None = None
) -> list[ExpansionReport]:
    """Expansions of several germs in one chart, so their branches can be compared."""
    product = polys[0]
    for f in polys[1:]:
        product = product * f
    shear = choose_shear(product)
    return [expand(f, target_trunc, cap, shear) for f in polys]
