"""Recursive-descent parser for polynomial expressions.

Grammar::

    expr    := term (('+'|'-') term)*
    term    := factor (('*'|'/') factor)*
    factor  := ('+'|'-') factor | power
    power   := atom (('^'|'**') exponent)?
    exponent:= integer | '(' ['-'] integer ['/' integer] ')'
    atom    := number | variable | 'zeta' '(' integer ')' | '(' expr ')'

Division is only by nonzero constants; rational exponents are accepted on
bare variables when ``rational_exponents`` is set (arc and series input).
"""

from __future__ import annotations

import re
from fractions import Fraction

from .cyclo import CycloNumber, embed, root_of_unity
from .errors import PolynomialSyntaxError, UnknownIdentifier
from .poly import BivariatePoly
from .series import PuiseuxSeries

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")

Monomials = dict  # {tuple[Fraction, ...]: CycloNumber}


class _Parser:
    def __init__(self, src: str, variables: tuple[str, ...], rational_exponents: bool):
        self.src = src
        self.variables = variables
        self.rational_exponents = rational_exponents
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if not m:
                bad = pos + len(src[pos:]) - len(src[pos:].lstrip())
                raise PolynomialSyntaxError(f"unexpected character {src[bad]!r}", bad)
            start = m.start(m.lastindex)
            kind = ("int", "name", "op")[m.lastindex - 1]
            self.tokens.append((kind, m.group(m.lastindex), start))
            pos = m.end()
        self.i = 0

    # -- token helpers ---------------------------------------------------
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else ("end", "", len(self.src))

    def take(self, value=None):
        tok = self.peek()
        if value is not None and tok[1] != value:
            what = "end of input" if tok[0] == "end" else repr(tok[1])
            raise PolynomialSyntaxError(f"expected {value!r}, found {what}", tok[2])
        self.i += 1
        return tok

    # -- polynomial algebra on monomial dicts --------------------------------
    def const(self, c) -> Monomials:
        return {(Fraction(0),) * len(self.variables): c if isinstance(c, CycloNumber) else embed(c)}

    @staticmethod
    def add(a: Monomials, b: Monomials, sign: int = 1) -> Monomials:
        out = dict(a)
        for k, c in b.items():
            c = c if sign > 0 else -c
            out[k] = out[k] + c if k in out else c
        return {k: c for k, c in out.items() if not c.is_zero()}

    @staticmethod
    def mul(a: Monomials, b: Monomials) -> Monomials:
        out: Monomials = {}
        for ka, ca in a.items():
            for kb, cb in b.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                p = ca * cb
                out[k] = out[k] + p if k in out else p
        return {k: c for k, c in out.items() if not c.is_zero()}

    # -- grammar ---------------------------------------------------------
    def parse(self) -> Monomials:
        if not self.tokens:
            raise PolynomialSyntaxError("empty expression", 0)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise PolynomialSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expr(self) -> Monomials:
        value = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            value = self.add(value, self.term(), 1 if op == "+" else -1)
        return value

    def term(self) -> Monomials:
        value = self.factor()
        while self.peek()[1] in ("*", "/"):
            _, op, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = self.mul(value, rhs)
            else:
                zero = (Fraction(0),) * len(self.variables)
                if set(rhs) != {zero} or rhs[zero].is_zero():
                    raise PolynomialSyntaxError("division only by nonzero constants", pos)
                value = {k: c / rhs[zero] for k, c in value.items()}
        return value

    def factor(self) -> Monomials:
        if self.peek()[1] in ("+", "-"):
            negate = self.take()[1] == "-"
            value = self.factor()
            return self.add({}, value, -1) if negate else value
        return self.power()

    def power(self) -> Monomials:
        start = self.peek()[2]
        base = self.atom()
        if self.peek()[1] in ("^", "**"):
            self.take()
            exp_pos = self.peek()[2]
            e = self.exponent()
            if e.denominator == 1 and e >= 0:
                out = self.const(1)
                for _ in range(int(e)):
                    out = self.mul(out, base)
                return out
            if not self.rational_exponents or len(base) != 1:
                raise PolynomialSyntaxError(f"exponent {e} not allowed here", exp_pos)
            (k, c), = base.items()
            if c != 1 or sum(1 for v in k if v) != 1 or e < 0:
                raise PolynomialSyntaxError("rational exponents apply only to a bare variable", start)
            return {tuple(v * e for v in k): c}
        return base

    def exponent(self) -> Fraction:
        kind, text, pos = self.peek()
        if kind == "int":
            self.take()
            return Fraction(int(text))
        if text == "(":
            self.take()
            sign = 1
            if self.peek()[1] == "-":
                self.take()
                sign = -1
            kind, text, pos = self.take()
            if kind != "int":
                raise PolynomialSyntaxError("expected an integer exponent", pos)
            value = Fraction(int(text))
            if self.peek()[1] == "/":
                self.take()
                kind, den, pos = self.take()
                if kind != "int" or int(den) == 0:
                    raise PolynomialSyntaxError("expected a nonzero integer denominator", pos)
                value /= int(den)
            self.take(")")
            return sign * value
        raise PolynomialSyntaxError("expected an exponent", pos)

    def atom(self) -> Monomials:
        kind, text, pos = self.peek()
        if kind == "int":
            self.take()
            return self.const(int(text))
        if kind == "name":
            self.take()
            if text in self.variables:
                k = tuple(Fraction(1 if v == text else 0) for v in self.variables)
                return {k: embed(1)}
            if text == "zeta":
                self.take("(")
                kind, n, npos = self.take()
                if kind != "int" or int(n) < 1:
                    raise PolynomialSyntaxError("zeta needs a positive integer order", npos)
                self.take(")")
                return self.const(root_of_unity(int(n), 1))
            raise UnknownIdentifier(text, pos)
        if text == "(":
            self.take()
            value = self.expr()
            self.take(")")
            return value
        what = "end of input" if kind == "end" else repr(text)
        raise PolynomialSyntaxError(f"unexpected {what}", pos)


def parse_polynomial(src: str) -> BivariatePoly:
    """Parse an expression in ``x`` and ``y`` into an expanded polynomial."""
    mons = _Parser(src, ("x", "y"), False).parse()
    return BivariatePoly({(int(i), int(j)): c for (i, j), c in mons.items()})


def parse_series(src: str, var: str = "t") -> PuiseuxSeries:
    """Parse a finite (exact) series in one variable; ``t^(3/2)`` is allowed."""
    mons = _Parser(src, (var,), True).parse()
    return PuiseuxSeries({k[0]: c for k, c in mons.items()})
