"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, z, ..., z^(phi(N)-1)`` of
``Q[z]/Phi_N(z)`` as an integer numerator vector over one positive common
denominator.  That form is canonical, so equality inside one conductor is a
tuple comparison; operands with different conductors are lifted to the lcm.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from functools import lru_cache, reduce
from numbers import Rational as _RationalABC
from typing import Iterable, Union

from .errors import DivisionByZero

Rational = Fraction
Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot interpret {value!r} as a rational")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


# --------------------------------------------------------------------------
# integer polynomials, coefficient lists low degree first


def _poly_divmod_exact(num: list[int], den: Iterable[int]) -> list[int]:
    den = list(den)
    num = list(num)
    assert den[-1] in (1, -1)
    out = [0] * (len(num) - len(den) + 1)
    for shift in range(len(out) - 1, -1, -1):
        c = num[shift + len(den) - 1] * den[-1]
        out[shift] = c
        if c:
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Phi_n with integer coefficients, lowest degree first.

    Obtained by dividing ``x^n - 1`` by every ``Phi_d`` with ``d`` a proper
    divisor of ``n``.
    """
    if n < 1:
        raise ValueError("conductor must be positive")
    num = [-1] + [0] * (n - 1) + [1]
    for d in divisors(n)[:-1]:
        num = _poly_divmod_exact(num, cyclotomic_polynomial(d))
    return tuple(num)


@lru_cache(maxsize=None)
def totient(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


@lru_cache(maxsize=None)
def _mobius(n: int) -> int:
    result, p = 1, 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    return -result if n > 1 else result


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[int, ...], ...]:
    """``z^e`` reduced mod Phi_n for ``e = 0 .. 2*phi(n)`` and ``e = 0 .. n-1``."""
    phi = cyclotomic_polynomial(n)
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1)
    for _ in range(max(n, 2 * deg + 1)):
        rows.append(tuple(cur))
        top = cur[-1]
        cur = [0] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


def _normalize(nums: list[int], den: int) -> tuple[tuple[int, ...], int]:
    if den < 0:
        nums = [-a for a in nums]
        den = -den
    g = reduce(math.gcd, nums, den)
    if g != 1:
        nums = [a // g for a in nums]
        den //= g
    if not any(nums):
        den = 1
    return tuple(nums), den


class CycloNumber:
    """An element of Q(zeta_N), immutable."""

    __slots__ = ("conductor", "_num", "_den", "_hash")

    def __init__(self, conductor: int, coeffs: Iterable[Scalar | str] = ()):
        if conductor < 1:
            raise ValueError("conductor must be positive")
        deg = totient(conductor)
        fr = [as_rational(c) for c in coeffs]
        if len(fr) > deg:
            raise ValueError(f"expected at most {deg} coefficients for conductor {conductor}")
        fr += [Fraction(0)] * (deg - len(fr))
        den = reduce(lambda a, b: a * b // math.gcd(a, b), (c.denominator for c in fr), 1)
        self.conductor = conductor
        self._num, self._den = _normalize([int(c * den) for c in fr], den)
        self._hash = None

    @classmethod
    def _raw(cls, conductor: int, nums, den: int) -> CycloNumber:
        obj = object.__new__(cls)
        obj.conductor = conductor
        obj._num, obj._den = _normalize(list(nums), den)
        obj._hash = None
        return obj

    # -- accessors -------------------------------------------------------
    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(a, self._den) for a in self._num)

    @property
    def degree(self) -> int:
        return len(self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def is_rational(self) -> bool:
        return not any(self._num[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return Fraction(self._num[0], self._den)

    def lift(self, conductor: int) -> CycloNumber:
        """The same element viewed in Q(zeta_M); ``M`` must be a multiple of N."""
        if conductor == self.conductor:
            return self
        if conductor % self.conductor:
            raise ValueError(f"cannot lift conductor {self.conductor} to {conductor}")
        table = _power_table(conductor)
        step = conductor // self.conductor
        out = [0] * totient(conductor)
        for i, a in enumerate(self._num):
            if a:
                for j, r in enumerate(table[i * step]):
                    if r:
                        out[j] += a * r
        return CycloNumber._raw(conductor, out, self._den)

    def galois(self, j: int) -> CycloNumber:
        """Image under the automorphism zeta_N -> zeta_N^j (gcd(j, N) = 1)."""
        n = self.conductor
        if math.gcd(j, n) != 1:
            raise ValueError("Galois exponent must be coprime to the conductor")
        table = _power_table(n)
        out = [0] * self.degree
        for i, a in enumerate(self._num):
            if a:
                for k, r in enumerate(table[(i * j) % n]):
                    if r:
                        out[k] += a * r
        return CycloNumber._raw(n, out, self._den)

    def to_complex(self) -> complex:
        z = cmath.exp(2j * math.pi / self.conductor)
        acc = 0j
        for i, a in enumerate(self._num):
            if a:
                acc += a * z**i
        return acc / self._den

    def trace(self) -> Fraction:
        """Trace to Q divided by the degree; independent of the conductor used."""
        n = self.conductor
        total = Fraction(0)
        for i, a in enumerate(self._num):
            if a:
                q = n // math.gcd(i, n)
                total += Fraction(a * _mobius(q), totient(q))
        return total / self._den

    # -- arithmetic ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> CycloNumber | None:
        if isinstance(other, CycloNumber):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return embed(other, 1)
        return None

    def _common(self, other: CycloNumber) -> tuple[CycloNumber, CycloNumber]:
        if self.conductor == other.conductor:
            return self, other
        if other.is_rational():
            return self, embed(other.rational_value(), self.conductor)
        if self.is_rational():
            return embed(self.rational_value(), other.conductor), other
        n = math.lcm(self.conductor, other.conductor)
        return self.lift(n), other.lift(n)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        if a._den == b._den:
            return CycloNumber._raw(a.conductor, [x + y for x, y in zip(a._num, b._num)], a._den)
        return CycloNumber._raw(
            a.conductor,
            [x * b._den + y * a._den for x, y in zip(a._num, b._num)],
            a._den * b._den,
        )

    __radd__ = __add__

    def __neg__(self):
        return CycloNumber._raw(self.conductor, [-x for x in self._num], self._den)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if other.is_rational():
            q = other.rational_value()
            return CycloNumber._raw(
                self.conductor, [x * q.numerator for x in self._num], self._den * q.denominator
            )
        if self.is_rational():
            return other * self
        a, b = self._common(other)
        n = a.conductor
        deg = a.degree
        prod = [0] * (2 * deg - 1)
        for i, x in enumerate(a._num):
            if x:
                for j, y in enumerate(b._num):
                    if y:
                        prod[i + j] += x * y
        out = prod[:deg]
        if len(prod) > deg:
            table = _power_table(n)
            for e in range(deg, len(prod)):
                c = prod[e]
                if c:
                    for k, r in enumerate(table[e]):
                        if r:
                            out[k] += c * r
        return CycloNumber._raw(n, out, a._den * b._den)

    __rmul__ = __mul__

    def inverse(self) -> CycloNumber:
        if self.is_zero():
            raise DivisionByZero("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return embed(1 / self.rational_value(), self.conductor)
        n = self.conductor
        # product of the non-trivial Galois conjugates; times self it is the norm
        co = embed(1, n)
        for j in range(2, n):
            if math.gcd(j, n) == 1:
                co = co * self.galois(j)
        norm = (co * self).rational_value()
        return co * (1 / norm)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = embed(1, self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        return a._den == b._den and a._num == b._num

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.trace()) if not self.is_rational() else hash(self.rational_value())
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycloNumber({self.conductor}, {[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if self.is_rational():
            return format_rational(self.rational_value())
        parts = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else (f"z{self.conductor}" if i == 1 else f"z{self.conductor}^{i}")
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


# --------------------------------------------------------------------------
# functional surface


def embed(q: Scalar | str, conductor: int = 1) -> CycloNumber:
    q = as_rational(q)
    deg = totient(conductor)
    return CycloNumber._raw(conductor, [q.numerator] + [0] * (deg - 1), q.denominator)


def root_of_unity(conductor: int, k: int) -> CycloNumber:
    row = _power_table(conductor)[k % conductor]
    return CycloNumber._raw(conductor, row, 1)


def add(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a + b


def sub(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a - b


def mul(a: CycloNumber, b: CycloNumber) -> CycloNumber:
    return a * b


def inv(a: CycloNumber) -> CycloNumber:
    return a.inverse()


def is_zero(a: CycloNumber) -> bool:
    return a.is_zero()


def to_complex(a: CycloNumber) -> complex:
    return a.to_complex()


def as_cyclo(value) -> CycloNumber:
    if isinstance(value, CycloNumber):
        return value
    return embed(value, 1)


# --------------------------------------------------------------------------
# square roots of rationals via quadratic Gauss sums


def _squarefree_split(n: int) -> tuple[int, int]:
    """``n = s * k^2`` with ``s`` squarefree; returns ``(s, k)``."""
    s, k, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            k *= p
        if n % p == 0:
            n //= p
            s *= p
        p += 1
    return s * n, k


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> CycloNumber:
    """The positive square root of the prime ``p``."""
    if p == 2:
        return root_of_unity(8, 1) + root_of_unity(8, 7)
    gauss = embed(0, p)
    for a in range(1, p):
        if pow(a, (p - 1) // 2, p) == 1:
            gauss = gauss + root_of_unity(p, a)
        else:
            gauss = gauss - root_of_unity(p, a)
    if p % 4 == 1:
        return gauss
    # gauss = i*sqrt(p) for p = 3 mod 4
    return gauss * root_of_unity(4, 3)


def sqrt_conductor(q: Fraction) -> int:
    """Conductor of the field used by :func:`sqrt_rational` for ``q``."""
    if q == 0:
        return 1
    s, _ = _squarefree_split(abs(q.numerator) * q.denominator)
    n = 4 if q < 0 else 1
    for p in _prime_factors(s):
        n = math.lcm(n, 8 if p == 2 else (p if p % 4 == 1 else 4 * p))
    return n


def sqrt_rational(q: Scalar) -> CycloNumber:
    """A square root of ``q``: positive real for q > 0, positive imaginary for q < 0."""
    q = as_rational(q)
    if q == 0:
        return embed(0)
    s, k = _squarefree_split(abs(q.numerator) * q.denominator)
    root = embed(Fraction(k, q.denominator))
    for p in _prime_factors(s):
        root = root * _sqrt_prime(p)
    if q < 0:
        root = root * root_of_unity(4, 1)
    return root


# --------------------------------------------------------------------------
# recognizing roots inside the supported tower


def _rational_guesses(value: float) -> list[Fraction]:
    out = []
    for bound in (10, 1000, 10**6):
        q = Fraction(value).limit_denominator(bound)
        if q and abs(float(q) - value) <= 1e-9 * max(1.0, abs(value)) and q not in out:
            out.append(q)
    return out


def _integer_root(n: int, k: int) -> int | None:
    if n < 0:
        return None
    r = round(n ** (1.0 / k)) if n else 0
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**k == n:
            return cand
    # float root may be far off for huge n
    lo, hi = 0, 1 << (n.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**k < n:
            lo = mid + 1
        else:
            hi = mid
    return lo if lo**k == n else None


def guess_cyclotomic(z: complex, cap: int) -> list[CycloNumber]:
    """Candidates ``r * zeta_M^j`` near ``z`` with ``r`` rational or a square root of one.

    Candidates are unverified; callers check them exactly.
    """
    mod = abs(z)
    if mod < 1e-300:
        return [embed(0)]
    angle = (cmath.phase(z) / (2 * math.pi)) % 1.0
    turn = Fraction(angle).limit_denominator(cap)
    if abs(float(turn) - angle) > 1e-7 and abs(float(turn) - angle - 1) > 1e-7:
        return []
    unit = root_of_unity(turn.denominator, turn.numerator)
    out = [embed(r) * unit for r in _rational_guesses(mod)]
    for r2 in _rational_guesses(mod * mod):
        if math.lcm(sqrt_conductor(r2), turn.denominator) <= cap:
            out.append(sqrt_rational(r2) * unit)
    return out


def nth_root(c: CycloNumber, n: int, cap: int) -> CycloNumber:
    """Some ``r`` with ``r^n == c`` inside Q(zeta_M), M <= cap."""
    from .errors import UnsupportedExtension

    if n == 1:
        return c
    if c.is_zero():
        return c
    if c.is_rational():
        q = c.rational_value()
        num, den = _integer_root(abs(q.numerator), n), _integer_root(q.denominator, n)
        if num is not None and den is not None:
            r = embed(Fraction(num, den))
            if q > 0:
                return r
            if n % 2:
                return -r
            if 2 * n <= cap:
                return r * root_of_unity(2 * n, 1)
    principal = c.to_complex() ** (1.0 / n)
    for cand in guess_cyclotomic(principal, cap):
        if cand.conductor <= cap and cand**n == c:
            return cand
    raise UnsupportedExtension(
        f"z^{n} = {c} has no solution in a cyclotomic field of conductor <= {cap}; "
        "supply the branch data directly"
    )
