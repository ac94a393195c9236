"""Recursive polynomial sequences of type (0,0) and (0,1), plus the fixed
degree-3 recursion used for the iterated 3-wheel conjecture.

A type (0,1) sequence is ``W_n = a*W_{n-1} + (b*x + c)*W_{n-2}`` with
``W_0 = 1`` and ``W_1 = t*(x - r)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import mpmath

from .errors import DegreeLawViolation, DeltaNotNegative, DomainError, InvalidSpec
from .poly import DensePoly
from .surd import QuadraticSurd


def _q(v):
    return v if isinstance(v, Fraction) else Fraction(v)


@dataclass(frozen=True)
class RecurrenceSpec:
    """Parameters (a, b, c, t, r) of a type (0,1) sequence.

    ``raw=True`` skips the premise checks (a, b, t > 0 and r != -c/b); it is
    needed for sign-flipped sequences and for negative controls.
    """

    a: Fraction
    b: Fraction
    c: Fraction
    t: Fraction = Fraction(1)
    r: Fraction = Fraction(0)
    raw: bool = field(default=False, compare=False)

    def __post_init__(self):
        for name in ("a", "b", "c", "t", "r"):
            object.__setattr__(self, name, _q(getattr(self, name)))
        if not self.raw:
            self.check()

    def check(self):
        if self.a <= 0:
            raise InvalidSpec(f"a must be positive, got {self.a}")
        if self.b <= 0:
            raise InvalidSpec(f"b must be positive, got {self.b}")
        if self.t <= 0:
            raise InvalidSpec(f"t must be positive, got {self.t}")
        if self.c != 0 and self.r == -self.c / self.b:
            raise InvalidSpec(f"r = -c/b = {self.r} is excluded")

    @property
    def normalized(self):
        return self.t == 1 and self.r == 0

    @property
    def w1(self):
        return DensePoly((-self.t * self.r, self.t))

    @property
    def B(self):
        """The linear coefficient polynomial b*x + c."""
        return DensePoly((self.c, self.b))

    def w1_at(self, x):
        return self.t * (x - self.r)

    def __str__(self):
        s = f"a={self.a}, b={self.b}, c={self.c}"
        if not self.normalized:
            s += f", t={self.t}, r={self.r}"
        return s


@dataclass(frozen=True)
class ConstantRecurrenceSpec:
    """Scalar recursion ``W_n = A*W_{n-1} + B*W_{n-2}`` with ``W_0 = 1``."""

    A: Fraction
    B: Fraction
    W1: Fraction

    def __post_init__(self):
        for name in ("A", "B", "W1"):
            object.__setattr__(self, name, _q(getattr(self, name)))
        if self.A == 0:
            raise InvalidSpec("A must be nonzero")

    @property
    def delta(self):
        return self.A * self.A + 4 * self.B


@dataclass(frozen=True)
class AffineMap:
    """x -> slope*x + shift."""

    slope: Fraction
    shift: Fraction

    def __call__(self, x):
        return x * self.slope + self.shift

    def inverse(self):
        return AffineMap(1 / self.slope, -self.shift / self.slope)

    def compose(self, inner):
        """self(inner(x))."""
        return AffineMap(self.slope * inner.slope, self.slope * inner.shift + self.shift)


IDENTITY = AffineMap(Fraction(1), Fraction(0))


class SequenceCache:
    """Append-only list of W_0, W_1, ... for one spec."""

    def __init__(self, spec, check_degree_law=None):
        self.spec = spec
        if check_degree_law is None:
            check_degree_law = spec.normalized and spec.c != 0 and not spec.raw
        self.check_degree_law = check_degree_law
        self.polys = [DensePoly.const(1), spec.w1]

    def __len__(self):
        return len(self.polys)

    def __getitem__(self, n):
        if n >= len(self.polys):
            self.extend(n)
        return self.polys[n]

    @property
    def n_max(self):
        return len(self.polys) - 1

    def extend(self, n_max):
        s = self.spec
        B = s.B
        while len(self.polys) <= n_max:
            n = len(self.polys)
            w = self.polys[-1] * s.a + B * self.polys[-2]
            if self.check_degree_law:
                _check_degree_law(s, n, w)
            self.polys.append(w)
        return self


def degree_of(n):
    """Degree (n+1)//2 of W_n in a (0,1)-sequence."""
    return (n + 1) // 2


def leading_coefficient(a, b, n):
    """Leading coefficient of W_n for a normalized (0,1)-sequence with c != 0."""
    if n == 0:
        return Fraction(1)
    m, odd = divmod(n, 2)
    if odd:
        return Fraction(b) ** m
    return Fraction(b) ** (m - 1) * (m * a + b)


def _check_degree_law(spec, n, w):
    if w.degree != degree_of(n):
        raise DegreeLawViolation(f"deg W_{n} = {w.degree}, expected {degree_of(n)}")
    expect = leading_coefficient(spec.a, spec.b, n)
    if w.lead != expect:
        raise DegreeLawViolation(f"lead W_{n} = {w.lead}, expected {expect}")


def generate(spec, n_max):
    """Exact polynomials W_0..W_{n_max}."""
    if n_max < 1:
        raise ValueError("n_max must be positive")
    return SequenceCache(spec).extend(n_max)


def eval_sequence_at(spec, x, n_max):
    """[W_0(x), ..., W_{n_max}(x)] by scalar iteration.

    ``x`` may be a rational or a :class:`QuadraticSurd`; values stay exact.
    """
    if isinstance(x, int):
        x = Fraction(x)
    bx_c = x * spec.b + spec.c
    out = [1 + 0 * x, spec.w1_at(x)]
    for _ in range(2, n_max + 1):
        out.append(out[-1] * spec.a + bx_c * out[-2])
    return out[: n_max + 1]


# ---------------------------------------------------------------------------
# type (0,0)


def iterate_constant(spec, n_max):
    out = [Fraction(1), spec.W1]
    for _ in range(2, n_max + 1):
        out.append(spec.A * out[-1] + spec.B * out[-2])
    return out[: n_max + 1]


def closed_form_constant(spec, n):
    """W_n of a constant recursion from its closed form.

    With a nonzero discriminant the computation runs in Q[sqrt(delta)] and
    the irrational parts are required to cancel.
    """
    A, W1 = spec.A, spec.W1
    delta = spec.delta
    if delta == 0:
        return (1 + n * (2 * W1 - A) / A) * (A / 2) ** n
    root = QuadraticSurd.sqrt_of(delta)
    g_plus = (root + (2 * W1 - A)) * Fraction(1, 2)
    g_minus = (-root + (2 * W1 - A)) * Fraction(1, 2)
    num = g_plus * (root + A) ** n - g_minus * (-root + A) ** n
    value = num / (root * Fraction(2) ** n)
    if not value.is_rational:
        raise ArithmeticError(f"irrational part {value.q}*sqrt({value.d}) did not cancel")
    return value.p


def _pair_mul(u, v, delta):
    # (p1 + i q1 s)(p2 + i q2 s) with s^2 = -delta
    (p1, q1), (p2, q2) = u, v
    return (p1 * p2 + delta * q1 * q2, p1 * q2 + q1 * p2)


def trig_pair(A, delta, n):
    """(P_n, Q_n) with ((A + i*sqrt(-delta))/2)^n = P_n + i*Q_n*sqrt(-delta)."""
    result = (Fraction(1), Fraction(0))
    base = (A / 2, Fraction(1, 2))
    while n:
        if n & 1:
            result = _pair_mul(result, base, delta)
        base = _pair_mul(base, base, delta)
        n >>= 1
    return result


def trig_form_constant(spec, n):
    """Split W_n = u + v into its cosine part u and sine part v.

    With z = (A + i*sqrt(-delta))/2 = (R/2) e^{i theta}:
    u = (R/2)^n cos(n theta) and v = (2*W1 - A) (R/2)^n sin(n theta)/sqrt(-delta),
    both rational.
    """
    delta = spec.delta
    if delta >= 0:
        raise DeltaNotNegative(f"delta = {delta} is not negative")
    P, Q = trig_pair(spec.A, delta, n)
    return P, (2 * spec.W1 - spec.A) * Q


def constant_spec_at(spec, x):
    """The scalar recursion obtained by fixing x in a (0,1) spec."""
    return ConstantRecurrenceSpec(spec.a, spec.b * x + spec.c, spec.w1_at(x))


# ---------------------------------------------------------------------------
# normalizations


def normalize(spec):
    """Return (normalized spec, map) with W_n(map(y)) = normalized W_n(y).

    The map y -> y/t + r carries roots of the normalized sequence to roots of
    the original one.
    """
    if spec.t <= 0:
        raise InvalidSpec("t must be positive")
    if spec.normalized:
        return spec, IDENTITY
    norm = RecurrenceSpec(
        spec.a, spec.b / spec.t, spec.b * spec.r + spec.c, raw=spec.raw
    )
    return norm, AffineMap(1 / spec.t, spec.r)


def flip_sign(spec):
    """Spec of (-1)^n W_n(-x).

    The coefficient b changes sign together with a, so the result is a raw
    spec; applying the flip twice gives back the input.
    """
    return RecurrenceSpec(-spec.a, -spec.b, spec.c, spec.t, -spec.r, raw=True)


def _require_zero_root(spec):
    if spec.c != 0 or spec.r != 0:
        raise InvalidSpec("reduction needs c = 0 and W_1(0) = 0")


def reduce_c_zero(spec, n, cache=None):
    """W_{n+2} / W_2 for a spec where every W_n (n >= 1) vanishes at 0."""
    _require_zero_root(spec)
    cache = cache or SequenceCache(spec, check_degree_law=False)
    return cache[n + 2].exact_div(cache[2])


def reduce_c_zero_spec(spec):
    """Spec of the quotient sequence W_{n+2}/W_2 (its W_1 is linear)."""
    _require_zero_root(spec)
    a, b, t = spec.a, spec.b, spec.t
    # W_2 = (a t + b) x,  W_3 / W_2 = a + b t x / (a t + b)
    slope = b * t / (a * t + b)
    root = -a * (a * t + b) / (b * t)
    return RecurrenceSpec(a, b, Fraction(0), slope, root)


# ---------------------------------------------------------------------------
# Chebyshev cross-check


def chebyshev_value(spec, x, n, dps=60):
    """W_n(x) through Chebyshev polynomials of the second kind (mpmath)."""
    x = _q(x)
    bx_c = spec.b * x + spec.c
    if bx_c >= 0:
        raise DomainError(f"b*x + c = {bx_c} is not negative")
    with mpmath.workdps(dps):
        s = mpmath.sqrt(mpmath.mpf(-bx_c.numerator) / bx_c.denominator)
        tau = mpmath.mpf(spec.a.numerator) / spec.a.denominator / (2 * s)
        w1 = mpmath.mpf(spec.w1_at(x).numerator) / spec.w1_at(x).denominator
        # U_{-2} = -1, U_{-1} = 0 extend U_k = 2 tau U_{k-1} - U_{k-2} backwards
        u_prev2, u_prev1 = mpmath.mpf(-1), mpmath.mpf(0)
        for _ in range(n):
            u_prev2, u_prev1 = u_prev1, 2 * tau * u_prev1 - u_prev2
        return s**n * (w1 / s * u_prev1 - u_prev2)


def chebyshev_crosscheck(spec, x, n, tol=Fraction(1, 10**9), dps=60):
    """Compare the Chebyshev identity against the exact recurrence value."""
    x = _q(x)
    exact = eval_sequence_at(spec, x, n)[n]
    with mpmath.workdps(dps):
        approx = chebyshev_value(spec, x, n, dps)
        ex = mpmath.mpf(exact.numerator) / exact.denominator
        s = mpmath.sqrt(-(mpmath.mpf((spec.b * x + spec.c).numerator) / (spec.b * x + spec.c).denominator))
        scale = max(abs(ex), s**n * mpmath.mpf(10) ** (-dps // 2))
        tol_f = mpmath.mpf(_q(tol).numerator) / _q(tol).denominator
        return bool(abs(approx - ex) <= tol_f * scale)


# ---------------------------------------------------------------------------
# degree-3 recursion


A1 = DensePoly((1, 144))
A2 = DensePoly((0, 108, -1566, 16524))  # 54x(2 - 29x + 306x^2)
A3 = DensePoly((0, 0, 0, -5832, 64152))  # -5832x^3(1 - 11x)
DEG3_W0 = DensePoly((Fraction(1, 27),))
DEG3_W1 = DensePoly((1, 7))
DEG3_W2 = DensePoly((1, 139, 1120, 468))


def generate_degree3(n_max, scaled=True):
    """W_0..W_{n_max} of the degree-3 recursion.

    ``scaled`` multiplies every term by 27, which clears the 1/27 in W_0 and
    leaves all root sets unchanged.
    """
    k = 27 if scaled else 1
    polys = [DEG3_W0 * k, DEG3_W1 * k, DEG3_W2 * k]
    for _ in range(3, n_max + 1):
        polys.append(A1 * polys[-1] + A2 * polys[-2] + A3 * polys[-3])
    return polys[: n_max + 1]
