"""Dense univariate polynomials over Q."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from numbers import Rational as _RationalABC

from .errors import NonzeroRemainder


def _strip(coeffs):
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class DensePoly:
    """Polynomial with exact rational coefficients, ascending order.

    The zero polynomial has ``coeffs == ()`` and ``degree == -1``.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(Fraction(c) for c in self.coeffs))

    @classmethod
    def const(cls, c):
        return cls((c,))

    @classmethod
    def x(cls):
        return cls((0, 1))

    @classmethod
    def linear(cls, slope, intercept):
        """``slope*x + intercept``."""
        return cls((intercept, slope))

    @classmethod
    def from_roots(cls, roots, lead=1):
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-Fraction(r), 1))
        return p

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    # -- ring operations ----------------------------------------------------

    def _lift(self, other):
        if isinstance(other, DensePoly):
            return other
        if isinstance(other, (int, _RationalABC)):
            return DensePoly.const(other)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return DensePoly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return DensePoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, _RationalABC)):
            c = Fraction(other)
            return DensePoly(c * a for a in self.coeffs)
        if not isinstance(other, DensePoly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return DensePoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return DensePoly(out)

    __rmul__ = __mul__

    def __divmod__(self, other):
        if not other.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lead = other.lead
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k] / lead
            if c == 0:
                continue
            quot[k - dq] = c
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= c * b
        return DensePoly(quot), DensePoly(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exact_div(self, other):
        q, r = divmod(self, other)
        if r:
            raise NonzeroRemainder(f"remainder {r} dividing {self} by {other}")
        return q

    def derivative(self):
        return DensePoly(i * c for i, c in enumerate(self.coeffs) if i)

    # -- evaluation ---------------------------------------------------------

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    @cached_property
    def integer_form(self):
        """Integer coefficients equal to a positive multiple of ``self``."""
        if not self.coeffs:
            return ()
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        ints = [c.numerator * (den // c.denominator) for c in self.coeffs]
        g = reduce(math.gcd, ints, 0)
        return tuple(v // g for v in ints)

    def sign_at(self, x):
        """Sign of self(x) for rational x, using integer arithmetic only."""
        ints = self.integer_form
        if not ints:
            return 0
        x = Fraction(x)
        u, v = x.numerator, x.denominator
        acc = ints[-1]
        if v == 1:
            for c in reversed(ints[:-1]):
                acc = acc * u + c
        else:
            vp = 1
            for c in reversed(ints[:-1]):
                vp *= v
                acc = acc * u + c * vp
        return (acc > 0) - (acc < 0)

    def sign_at_infinity(self, direction):
        """Sign of the limit at +inf (direction > 0) or -inf (direction < 0)."""
        if not self.coeffs:
            return 0
        s = 1 if self.lead > 0 else -1
        if direction < 0 and self.degree % 2:
            s = -s
        return s

    def cauchy_bound(self):
        """1 + max|c_i|/|c_lead|; every root lies strictly inside (-B, B)."""
        if self.degree < 1:
            return Fraction(1)
        lead = abs(self.lead)
        return 1 + max(abs(c) for c in self.coeffs[:-1]) / lead

    def root_bound(self):
        """Power-of-two Fujiwara bound: every root lies strictly inside (-B, B).

        Each |c_{d-k}/c_d|^(1/k) is replaced by the least power of two above
        it, so the bound stays exact and is within a factor 4 of Fujiwara's.
        """
        d = self.degree
        if d < 1:
            return Fraction(1)
        lead = abs(self.lead)
        best = Fraction(0)
        for k in range(1, d + 1):
            ratio = abs(self.coeffs[d - k]) / lead
            if k == d:
                ratio /= 2
            if ratio == 0:
                continue
            # least power of two q with q**k >= ratio
            e = (ratio.numerator.bit_length() - ratio.denominator.bit_length()) // k - 1
            while Fraction(2) ** (e * k) < ratio:
                e += 1
            best = max(best, Fraction(2) ** e)
        return 2 * best + 1

    def content(self):
        """gcd of numerators over lcm of denominators (positive)."""
        if not self.coeffs:
            return Fraction(0)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs), 0)
        den = reduce(math.lcm, (c.denominator for c in self.coeffs), 1)
        return Fraction(num, den)

    def primitive(self):
        c = self.content()
        return self if c in (0, 1) else DensePoly(a / c for a in self.coeffs)

    def scale_var(self, s):
        """p(s*x)."""
        s = Fraction(s)
        return DensePoly(c * s**i for i, c in enumerate(self.coeffs))

    def compose_affine(self, slope, shift):
        """p(slope*x + shift)."""
        lin = DensePoly((shift, slope))
        acc = DensePoly()
        for c in reversed(self.coeffs):
            acc = acc * lin + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and c == 1:
                terms.append(mono)
            elif mono and c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}{'*' if mono else ''}{mono}")
        return " + ".join(terms).replace("+ -", "- ")


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_eval(p, x):
    return p(Fraction(x) if isinstance(x, int) else x)
