"""Exact arithmetic in Q[sqrt(d)].

A :class:`QuadraticSurd` is the number ``p + q*sqrt(d)`` with rational ``p``,
``q`` and integer ``d``.  Ordering and sign are decided with integer
arithmetic only.  Negative ``d`` is accepted for field arithmetic (it is how
the closed forms with a negative discriminant are evaluated) but such values
are not real and refuse to be compared.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

from mpmath import mp, mpf, sqrt as mp_sqrt

_SMALL_PRIMES = None


def _small_primes(limit=1000):
    global _SMALL_PRIMES
    if _SMALL_PRIMES is None:
        sieve = bytearray([1]) * (limit + 1)
        sieve[:2] = b"\x00\x00"
        for i in range(2, math.isqrt(limit) + 1):
            if sieve[i]:
                sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
        _SMALL_PRIMES = [i for i, flag in enumerate(sieve) if flag]
    return _SMALL_PRIMES


def _split_square(n):
    """Return (s, m) with n == s*s*m, pulling out small square factors.

    ``m`` is not guaranteed squarefree for inputs with large repeated prime
    factors, but it is never a perfect square > 1.
    """
    s = 1
    for prime in _small_primes():
        sq = prime * prime
        if sq > n:
            break
        while n % sq == 0:
            n //= sq
            s *= prime
    root = math.isqrt(n)
    if root * root == n:
        return s * root, 1
    return s, n


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    raise TypeError(f"expected an exact rational, got {type(x).__name__}")


def _sgn(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class QuadraticSurd:
    p: Fraction
    q: Fraction = Fraction(0)
    d: int = 0

    def __post_init__(self):
        p = _as_fraction(self.p)
        q = _as_fraction(self.q)
        d = int(self.d)
        if q == 0 or d == 0:
            q, d = Fraction(0), 0
        else:
            s, m = _split_square(abs(d))
            q *= s
            if d < 0:
                m = -m
            if m == 1:
                p, q, d = p + q, Fraction(0), 0
            else:
                d = m
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "d", d)

    @classmethod
    def sqrt_of(cls, r):
        """sqrt(r) for a rational r (imaginary unit folded into d when r < 0)."""
        r = _as_fraction(r)
        if r == 0:
            return cls(Fraction(0))
        # sqrt(N/M) = sqrt(N*M)/M
        return cls(Fraction(0), Fraction(1, r.denominator), r.numerator * r.denominator)

    @property
    def is_rational(self):
        return self.q == 0

    @property
    def is_real(self):
        return self.d >= 0

    def conjugate(self):
        return QuadraticSurd(self.p, -self.q, self.d)

    def norm(self):
        """p^2 - q^2 d, the field norm."""
        return self.p * self.p - self.q * self.q * self.d

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, QuadraticSurd):
            if other.q != 0 and self.q != 0 and other.d != self.d:
                raise ValueError(f"incompatible radicands {self.d} and {other.d}")
            return other
        if isinstance(other, (int, _RationalABC)):
            return QuadraticSurd(Fraction(other))
        return None

    def _radicand(self, other):
        return self.d if self.q != 0 else other.d

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadraticSurd(self.p + o.p, self.q + o.q, self._radicand(o))

    __radd__ = __add__

    def __neg__(self):
        return QuadraticSurd(-self.p, -self.q, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._radicand(o)
        return QuadraticSurd(
            self.p * o.p + self.q * o.q * d,
            self.p * o.q + self.q * o.p,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero surd")
        return self * o.conjugate() * QuadraticSurd(1 / n)

    def __rtruediv__(self, other):
        return QuadraticSurd(Fraction(other)) / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        result = QuadraticSurd(Fraction(1), Fraction(0), self.d)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- ordering -----------------------------------------------------------

    def sign(self):
        return surd_sign(self)

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return surd_sign(self - o)

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __eq__(self, other):
        if isinstance(other, (int, _RationalABC)):
            return self.q == 0 and self.p == other
        if isinstance(other, QuadraticSurd):
            return (self.p, self.q, self.d) == (other.p, other.q, other.d)
        return NotImplemented

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    # -- display ------------------------------------------------------------

    def to_mpf(self, dps=50):
        if self.d < 0:
            raise ValueError("non-real surd has no real value")
        with mp.workdps(dps):
            return mpf(self.p.numerator) / self.p.denominator + (
                mpf(self.q.numerator) / self.q.denominator
            ) * mp_sqrt(self.d)

    def __float__(self):
        return float(self.to_mpf(30))

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        head = "" if self.p == 0 else f"{self.p} "
        sign = "-" if self.q < 0 else ("+" if head else "")
        mag = abs(self.q)
        coef = "" if mag == 1 else f"({mag})*"
        return f"{head}{sign}{' ' if head else ''}{coef}sqrt({self.d})"


def _sign_p_plus_q_sqrt_d(p, q, d):
    sp, sq = _sgn(p), _sgn(q)
    if sq == 0 or d == 0:
        return sp
    if sp == 0 or sp == sq:
        return sq
    lhs = p * p
    rhs = q * q * d
    if lhs > rhs:
        return sp
    if lhs < rhs:
        return sq
    return 0


def surd_cmp(s, x):
    """sign(s - x) for a real surd (or rational) s and a rational x."""
    if not isinstance(s, QuadraticSurd):
        return _sgn(s - x)
    if s.d < 0:
        raise ValueError("non-real surd cannot be compared")
    return _sign_p_plus_q_sqrt_d(s.p - x, s.q, s.d)


def surd_sign(s):
    """Exact sign of ``p + q*sqrt(d)`` in {-1, 0, 1}."""
    if isinstance(s, (int, _RationalABC)):
        return _sgn(s)
    if s.d < 0:
        raise ValueError("sign of a non-real surd is undefined")
    return _sign_p_plus_q_sqrt_d(s.p, s.q, s.d)
