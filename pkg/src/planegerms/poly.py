"""Polynomials over cyclotomic fields: univariate helpers and bivariate ``f(x, y)``.

Univariate polynomials are plain lists of :class:`CycloNumber`, lowest degree
first, with no trailing zeros.  Bivariate polynomials wrap a dict
``{(i, j): coeff}`` for the monomial ``x^i y^j``.
"""

from __future__ import annotations

from math import comb
from typing import Iterable, Mapping

from .cyclo import CycloNumber, as_cyclo, embed

UPoly = list  # list[CycloNumber]

ZERO = embed(0)
ONE = embed(1)


# --------------------------------------------------------------------------
# univariate


def u_trim(p: UPoly) -> UPoly:
    p = list(p)
    while p and p[-1].is_zero():
        p.pop()
    return p


def u_add(a: UPoly, b: UPoly) -> UPoly:
    n = max(len(a), len(b))
    return u_trim([(a[i] if i < len(a) else ZERO) + (b[i] if i < len(b) else ZERO) for i in range(n)])


def u_sub(a: UPoly, b: UPoly) -> UPoly:
    return u_add(a, [-c for c in b])


def u_mul(a: UPoly, b: UPoly) -> UPoly:
    if not a or not b:
        return []
    out = [ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x.is_zero():
            continue
        for j, y in enumerate(b):
            if not y.is_zero():
                out[i + j] = out[i + j] + x * y
    return u_trim(out)


def u_scale(a: UPoly, c) -> UPoly:
    c = as_cyclo(c)
    return u_trim([x * c for x in a])


def u_divmod(a: UPoly, b: UPoly) -> tuple[UPoly, UPoly]:
    b = u_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(u_trim(a))
    if len(a) < len(b):
        return [], a
    inv_lead = b[-1].inverse()
    quo = [ZERO] * (len(a) - len(b) + 1)
    for k in range(len(quo) - 1, -1, -1):
        c = a[k + len(b) - 1] * inv_lead
        quo[k] = c
        if not c.is_zero():
            for i, y in enumerate(b):
                a[k + i] = a[k + i] - c * y
    return u_trim(quo), u_trim(a[: len(b) - 1])


def u_exact_div(a: UPoly, b: UPoly) -> UPoly:
    q, r = u_divmod(a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def u_monic(a: UPoly) -> UPoly:
    a = u_trim(a)
    if not a:
        return a
    return u_scale(a, a[-1].inverse())


def u_gcd(a: UPoly, b: UPoly) -> UPoly:
    a, b = u_monic(a), u_monic(b)
    while b:
        # monic remainders keep the rational coefficients small
        a, b = b, u_monic(u_divmod(a, b)[1])
    return a


def u_deriv(a: UPoly) -> UPoly:
    return u_trim([a[i] * i for i in range(1, len(a))])


def u_eval(a: UPoly, z) -> CycloNumber:
    acc = ZERO
    for c in reversed(a):
        acc = acc * z + c
    return acc


def u_squarefree_part(a: UPoly) -> UPoly:
    a = u_trim(a)
    if len(a) <= 2:
        return u_monic(a)
    return u_monic(u_exact_div(a, u_gcd(a, u_deriv(a))))


def u_format(a: UPoly, var: str = "z") -> str:
    parts = []
    for i in range(len(a) - 1, -1, -1):
        c = a[i]
        if c.is_zero():
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        cs = str(c) if c.is_rational() else f"({c})"
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ") or "0"


# --------------------------------------------------------------------------
# bivariate


class BivariatePoly:
    """Polynomial in ``x`` and ``y`` with cyclotomic coefficients (immutable)."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int], object] | Iterable = ()):
        acc: dict[tuple[int, int], CycloNumber] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for (i, j), c in items:
            if i < 0 or j < 0:
                raise ValueError("negative exponents in a polynomial")
            c = as_cyclo(c)
            key = (int(i), int(j))
            acc[key] = acc[key] + c if key in acc else c
        self.terms = {k: c for k, c in sorted(acc.items()) if not c.is_zero()}

    @classmethod
    def _raw(cls, terms: dict) -> BivariatePoly:
        obj = object.__new__(cls)
        obj.terms = {k: c for k, c in sorted(terms.items()) if not c.is_zero()}
        return obj

    @classmethod
    def x(cls) -> BivariatePoly:
        return cls({(1, 0): 1})

    @classmethod
    def y(cls) -> BivariatePoly:
        return cls({(0, 1): 1})

    @classmethod
    def constant(cls, c) -> BivariatePoly:
        return cls({(0, 0): c})

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, i: int, j: int) -> CycloNumber:
        return self.terms.get((i, j), ZERO)

    def constant_term(self) -> CycloNumber:
        return self.coefficient(0, 0)

    def degree_y(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def degree_x(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    def multiplicity(self) -> int:
        """Lowest total degree (order at the origin)."""
        return min((i + j for i, j in self.terms), default=-1)

    def y_order(self) -> int:
        return min((j for _, j in self.terms), default=0)

    def x_order(self) -> int:
        return min((i for i, _ in self.terms), default=0)

    def conductor(self) -> int:
        from math import lcm

        return lcm(1, *(c.conductor for c in self.terms.values()))

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.terms.values())

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _as_poly(other)
        acc = dict(self.terms)
        for k, c in other.terms.items():
            acc[k] = acc[k] + c if k in acc else c
        return BivariatePoly._raw(acc)

    __radd__ = __add__

    def __neg__(self):
        return BivariatePoly._raw({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        acc: dict[tuple[int, int], CycloNumber] = {}
        for (i1, j1), c1 in self.terms.items():
            for (i2, j2), c2 in other.terms.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                acc[k] = acc[k] + p if k in acc else p
        return BivariatePoly._raw(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = BivariatePoly.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, BivariatePoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def derivative_y(self) -> BivariatePoly:
        return BivariatePoly._raw({(i, j - 1): c * j for (i, j), c in self.terms.items() if j})

    def shear(self, a) -> BivariatePoly:
        """``f(x + a*y, y)``."""
        a = as_cyclo(a)
        acc: dict[tuple[int, int], CycloNumber] = {}
        for (i, j), c in self.terms.items():
            apow = embed(1)
            for k in range(i + 1):
                # choose k factors a*y out of (x + a*y)^i
                key = (i - k, j + k)
                p = c * apow * comb(i, k)
                acc[key] = acc[key] + p if key in acc else p
                apow = apow * a
        return BivariatePoly._raw(acc)

    def linear_change(self, a, b, c, d) -> BivariatePoly:
        """``f(a*x + b*y, c*x + d*y)``."""
        X = BivariatePoly({(1, 0): a, (0, 1): b})
        Y = BivariatePoly({(1, 0): c, (0, 1): d})
        out = BivariatePoly()
        xp = _powers(X, self.degree_x())
        yp = _powers(Y, self.degree_y())
        for (i, j), coef in self.terms.items():
            out = out + xp[i] * yp[j] * coef
        return out

    def evaluate(self, x: complex, y: complex) -> complex:
        return sum(c.to_complex() * x**i * y**j for (i, j), c in self.terms.items()) + 0j

    def numeric(self) -> list[tuple[int, int, complex]]:
        return [(i, j, c.to_complex()) for (i, j), c in self.terms.items()]

    # -- views -------------------------------------------------------------
    def as_y_poly(self) -> list[UPoly]:
        """Coefficients of ``y^j`` as univariate polynomials in ``x``."""
        out: list[UPoly] = [[] for _ in range(self.degree_y() + 1)]
        for (i, j), c in self.terms.items():
            row = out[j]
            row.extend([ZERO] * (i + 1 - len(row)))
            row[i] = c
        return [u_trim(r) for r in out]

    @classmethod
    def from_y_poly(cls, rows: list[UPoly]) -> BivariatePoly:
        return cls._raw({(i, j): c for j, row in enumerate(rows) for i, c in enumerate(row)})

    def __repr__(self):
        return f"BivariatePoly({format_poly(self)!r})"


def _as_poly(v) -> BivariatePoly:
    if isinstance(v, BivariatePoly):
        return v
    return BivariatePoly.constant(v)


def _powers(p: BivariatePoly, n: int) -> list[BivariatePoly]:
    out = [BivariatePoly.constant(1)]
    for _ in range(n):
        out.append(out[-1] * p)
    return out


def format_poly(f: BivariatePoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for (i, j), c in sorted(f.terms.items(), key=lambda kv: (-(kv[0][0] + kv[0][1]), -kv[0][1])):
        mono = "*".join(
            s for s in (("x" if i == 1 else f"x^{i}") if i else "", ("y" if j == 1 else f"y^{j}") if j else "") if s
        )
        cs = str(c) if c.is_rational() else f"({c})"
        if not mono:
            parts.append(cs)
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append("-" + mono)
        else:
            parts.append(f"{cs}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# gcd and square-free decomposition in K[x][y]


def _content(rows: list[UPoly]) -> UPoly:
    g: UPoly = []
    for r in rows:
        if r:
            g = u_gcd(g, r) if g else u_monic(r)
            if len(g) == 1:
                break
    return g


def _primitive(rows: list[UPoly]) -> list[UPoly]:
    rows = _ytrim(rows)
    if not rows:
        return rows
    c = _content(rows)
    if len(c) > 1:
        rows = [u_exact_div(r, c) for r in rows]
    # normalize the leading coefficient to be monic in its top x-degree
    lead = rows[-1][-1]
    if lead != 1:
        inv = lead.inverse()
        rows = [u_scale(r, inv) for r in rows]
    return rows


def _ytrim(rows: list[UPoly]) -> list[UPoly]:
    rows = [u_trim(r) for r in rows]
    while rows and not rows[-1]:
        rows.pop()
    return rows


def _prem(a: list[UPoly], b: list[UPoly]) -> list[UPoly]:
    a = _ytrim(a)
    lb = b[-1]
    db = len(b) - 1
    while len(a) - 1 >= db and a:
        la = a[-1]
        shift = len(a) - 1 - db
        a = [u_mul(r, lb) for r in a]
        for i, r in enumerate(b):
            a[i + shift] = u_sub(a[i + shift], u_mul(r, la))
        a = _ytrim(a)
    return a


def _ygcd(a: list[UPoly], b: list[UPoly]) -> list[UPoly]:
    a, b = _primitive(a), _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b and len(b) > 1:
        r = _prem(a, b)
        a, b = b, _primitive(r)
    if not b:
        return a
    return [[ONE]]  # b is a nonzero polynomial free of y


def _ydiv_exact(a: list[UPoly], b: list[UPoly]) -> list[UPoly]:
    a = _ytrim(a)
    b = _ytrim(b)
    db = len(b) - 1
    if len(a) - 1 < db:
        if any(a):
            raise ArithmeticError("inexact division in K[x][y]")
        return []
    quo: list[UPoly] = [[] for _ in range(len(a) - db)]
    for k in range(len(quo) - 1, -1, -1):
        c = u_exact_div(a[k + db], b[-1]) if a[k + db] else []
        quo[k] = c
        if c:
            for i, r in enumerate(b):
                a[k + i] = u_sub(a[k + i], u_mul(c, r))
    if any(_ytrim(a)):
        raise ArithmeticError("inexact division in K[x][y]")
    return quo


def _yderiv(a: list[UPoly]) -> list[UPoly]:
    return _ytrim([u_scale(a[j], j) for j in range(1, len(a))])


def squarefree_decomposition(f: BivariatePoly) -> list[tuple[BivariatePoly, int]]:
    """Yun's algorithm in y over K(x): ``f = content * prod s_k^k``.

    Returns the non-constant (in y) square-free factors with their exponents.
    The content in K[x] is dropped.
    """
    a = _primitive(f.as_y_poly())
    if len(a) <= 1:
        return []
    da = _yderiv(a)
    b = _ygcd(a, da)
    c = _ydiv_exact(a, b)
    d = _ytrim([u_sub(x, y) for x, y in _zip_rows(_ydiv_exact(da, b), _yderiv(c))])
    out = []
    k = 1
    while len(c) > 1:
        g = _ygcd(c, d) if d else _primitive(c)
        c = _ydiv_exact(c, g)
        if d:
            d = _ytrim([u_sub(x, y) for x, y in _zip_rows(_ydiv_exact(d, g), _yderiv(c))])
        if len(g) > 1:
            out.append((BivariatePoly.from_y_poly(g), k))
        k += 1
    return out


def _zip_rows(a: list[UPoly], b: list[UPoly]):
    n = max(len(a), len(b))
    for i in range(n):
        yield (a[i] if i < len(a) else []), (b[i] if i < len(b) else [])
