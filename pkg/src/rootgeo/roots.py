"""Sturm chains, real-root counting and guaranteed root isolation.

Roots are reported either exactly (a rational, or a quadratic surd) or as an
open rational bracket ``(lo, hi)`` on which the owning polynomial changes sign
and has no other root.  Brackets can be narrowed at any time; narrowing never
changes which root a bracket denotes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional

from .errors import NonSquarefree, RefinementExhausted
from .poly import DensePoly
from .surd import QuadraticSurd, surd_cmp, surd_sign

EXACT_RATIONAL = "exact-rational"
EXACT_SURD = "exact-surd"
BRACKETED = "bracketed"

# Bisection steps allowed when separating two roots before giving up.
MAX_REFINE_STEPS = 4000
SURD_ZERO_CHECK_AFTER = 40


def _sgn(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        lo, hi = Fraction(self.lo), Fraction(self.hi)
        if not lo < hi:
            raise ValueError(f"empty interval ({lo}, {hi})")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self):
        return self.hi - self.lo

    @property
    def mid(self):
        return (self.lo + self.hi) / 2


WHOLE_LINE = None


@dataclass(frozen=True)
class IsolatedRoot:
    kind: str
    value: object = None  # Fraction or QuadraticSurd for exact kinds
    interval: Optional[Interval] = None
    multiplicity: int = 1

    @classmethod
    def exact(cls, v):
        if isinstance(v, QuadraticSurd):
            if v.is_rational:
                return cls(EXACT_RATIONAL, v.p)
            return cls(EXACT_SURD, v)
        return cls(EXACT_RATIONAL, Fraction(v))

    @classmethod
    def bracket(cls, lo, hi):
        return cls(BRACKETED, None, Interval(lo, hi))

    @property
    def is_exact(self):
        return self.kind != BRACKETED

    @property
    def lo(self):
        return self.interval.lo if self.interval else self.value

    @property
    def hi(self):
        return self.interval.hi if self.interval else self.value

    def approx(self):
        """Best available rational point estimate."""
        if self.kind == EXACT_RATIONAL:
            return self.value
        if self.kind == EXACT_SURD:
            return Fraction(str(self.value.to_mpf(40)))
        return self.interval.mid

    def __float__(self):
        if self.kind == EXACT_SURD:
            return float(self.value)
        return float(self.approx())


# ---------------------------------------------------------------------------
# Sturm chains


def _int_neg_prem(a, b):
    """-(k * rem(a, b)) for some k > 0, as a primitive integer list."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    steps = 0
    while r and len(r) - 1 >= db:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [lb * c for c in r]
        for j, bc in enumerate(b):
            r[shift + j] -= lr * bc
        while r and r[-1] == 0:
            r.pop()
        steps += 1
    if not r:
        return []
    if lb < 0 and steps % 2:
        r = [-c for c in r]
    g = reduce(math.gcd, r, 0)
    return [-(c // g) for c in r]


@dataclass(frozen=True)
class SturmChain:
    polys: tuple

    @property
    def gcd(self):
        """Last chain element: a positive multiple of gcd(p, p')."""
        return self.polys[-1]

    @property
    def squarefree(self):
        return self.polys[-1].degree == 0

    def variations_at(self, x):
        if x is None:
            raise ValueError("use variations_at_infinity for infinite points")
        return _variations(p.sign_at(x) for p in self.polys)

    def variations_at_infinity(self, direction):
        return _variations(p.sign_at_infinity(direction) for p in self.polys)


def _variations(signs):
    count = 0
    prev = 0
    for s in signs:
        if s == 0:
            continue
        if prev and s != prev:
            count += 1
        prev = s
    return count


def sturm_chain(p, normalize=True):
    """Sturm chain of ``p``: p, p', then negated remainders.

    With ``normalize`` (the default) every remainder is divided by its
    content, which keeps coefficients small and preserves all signs.
    """
    if not isinstance(p, DensePoly):
        p = DensePoly(p)
    if p.is_zero():
        raise ValueError("Sturm chain of the zero polynomial")
    chain = [p]
    dp = p.derivative()
    if dp.is_zero():
        return SturmChain(tuple(chain))
    chain.append(dp)
    if normalize:
        a, b = list(p.integer_form), list(dp.integer_form)
        while len(b) > 1:
            r = _int_neg_prem(a, b)
            if not r:
                break
            chain.append(DensePoly(r))
            a, b = b, r
    else:
        a, b = p, dp
        while b.degree > 0:
            r = -(a % b)
            if r.is_zero():
                break
            chain.append(r)
            a, b = b, r
    return SturmChain(tuple(chain))


def count_real_roots(chain, interval=WHOLE_LINE):
    """Number of distinct real roots in ``interval`` (half-open ``(lo, hi]``).

    ``interval`` may be ``None`` for the whole line, an :class:`Interval`, or
    a ``(lo, hi)`` pair where either end may be ``None`` for infinity.
    """
    if not isinstance(chain, SturmChain):
        chain = sturm_chain(chain)
    if not chain.squarefree:
        raise NonSquarefree(f"gcd(p, p') = {chain.gcd} has positive degree")
    if interval is None:
        lo = hi = None
    elif isinstance(interval, Interval):
        lo, hi = interval.lo, interval.hi
    else:
        lo, hi = interval
    v_lo = chain.variations_at_infinity(-1) if lo is None else chain.variations_at(Fraction(lo))
    v_hi = chain.variations_at_infinity(1) if hi is None else chain.variations_at(Fraction(hi))
    return v_lo - v_hi


# ---------------------------------------------------------------------------
# Root sets and refinement


@dataclass
class RootSet:
    """Ordered isolated roots of ``poly``.

    Brackets may be narrowed in place by the refinement helpers; the set of
    roots represented never changes.
    """

    poly: DensePoly
    roots: list = field(default_factory=list)
    n: Optional[int] = None

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def __getitem__(self, i):
        return self.roots[i]

    @property
    def largest(self):
        return self.roots[-1] if self.roots else None

    @property
    def second_largest(self):
        return self.roots[-2] if len(self.roots) >= 2 else None

    def approx(self):
        return [float(r) for r in self.roots]

    # -- refinement -----------------------------------------------------------

    def refine(self, i, width):
        """Narrow root ``i`` until its bracket is narrower than ``width``."""
        r = self.roots[i]
        if r.is_exact:
            return r
        width = Fraction(width)
        lo, hi = r.interval.lo, r.interval.hi
        s_lo = self.poly.sign_at(lo)
        while hi - lo >= width:
            m = (lo + hi) / 2
            s = self.poly.sign_at(m)
            if s == 0:
                r = IsolatedRoot.exact(m)
                self.roots[i] = r
                return r
            if s == s_lo:
                lo = m
            else:
                hi = m
        r = IsolatedRoot.bracket(lo, hi)
        self.roots[i] = r
        return r

    def bisect_once(self, i):
        r = self.roots[i]
        if r.is_exact:
            return r
        return self.refine(i, r.interval.width)

    def refine_all(self, width):
        for i in range(len(self.roots)):
            self.refine(i, width)
        return self

    def split_at(self, i, x):
        """Decide the position of root ``i`` against rational ``x``: -1, 0, 1."""
        x = Fraction(x)
        r = self.roots[i]
        if r.kind == EXACT_RATIONAL:
            return _sgn(r.value - x)
        if r.kind == EXACT_SURD:
            return surd_sign(r.value - x)
        lo, hi = r.interval.lo, r.interval.hi
        if x <= lo:
            return 1
        if x >= hi:
            return -1
        s = self.poly.sign_at(x)
        if s == 0:
            self.roots[i] = IsolatedRoot.exact(x)
            return 0
        if s == self.poly.sign_at(lo):
            self.roots[i] = IsolatedRoot.bracket(x, hi)
            return 1
        self.roots[i] = IsolatedRoot.bracket(lo, x)
        return -1

    def compare_value(self, i, v):
        """Exact comparison of root ``i`` against a rational or real surd."""
        if not isinstance(v, QuadraticSurd) or v.is_rational:
            v = v.p if isinstance(v, QuadraticSurd) else v
            return self.split_at(i, v)
        zero_checked = False
        for step in range(MAX_REFINE_STEPS):
            r = self.roots[i]
            if r.kind == EXACT_RATIONAL:
                return -surd_cmp(v, r.value)
            if r.kind == EXACT_SURD:
                return surd_sign(r.value - v)
            if surd_cmp(v, r.interval.lo) <= 0:
                return 1
            if surd_cmp(v, r.interval.hi) >= 0:
                return -1
            if not zero_checked and step >= SURD_ZERO_CHECK_AFTER:
                # bisection never separates v from the root if they coincide
                zero_checked = True
                if self.poly(v) == 0:
                    self.roots[i] = IsolatedRoot(EXACT_SURD, v, r.interval)
                    return 0
            self.bisect_once(i)
        raise RefinementExhausted(f"cannot separate root {i} of {self.poly} from {v}")


def compare_roots(rs1, i, rs2, j):
    """Exact comparison of root ``i`` of ``rs1`` against root ``j`` of ``rs2``.

    Refines both brackets until they are disjoint.  Returns -1, 0 or 1; 0 only
    when both roots are provably the same number.
    """
    for _ in range(MAX_REFINE_STEPS):
        a, b = rs1.roots[i], rs2.roots[j]
        if a.kind == EXACT_RATIONAL:
            return -rs2.compare_value(j, a.value)
        if b.kind == EXACT_RATIONAL:
            return rs1.compare_value(i, b.value)
        if a.kind == EXACT_SURD:
            return -rs2.compare_value(j, a.value)
        if b.kind == EXACT_SURD:
            return rs1.compare_value(i, b.value)
        if a.interval.hi <= b.interval.lo:
            return -1
        if b.interval.hi <= a.interval.lo:
            return 1
        # overlapping brackets: a shared root is possible only with a common factor
        if a.interval.width >= b.interval.width:
            rs1.bisect_once(i)
        else:
            rs2.bisect_once(j)
    raise RefinementExhausted(f"roots {i} of {rs1.poly} and {j} of {rs2.poly} stay entangled")


# ---------------------------------------------------------------------------
# Isolation


def _gsign(poly, x, zeros):
    s = poly.sign_at(x)
    for z in zeros:
        s *= _sgn(x - z)
    return s


def isolate_from_points(poly, points, expected):
    """Try to isolate all ``expected`` real roots of ``poly`` using ``points``.

    The points partition the line; every piece on which ``poly`` (deflated by
    the exact rational roots found among the points) changes sign holds at
    least one root.  If the number of such pieces plus exact hits equals
    ``expected`` each piece holds exactly one root and the list of isolated
    roots is returned.  Otherwise ``None`` is returned and the caller should
    supply finer points.
    """
    bound = poly.root_bound()
    pts = sorted({Fraction(p) for p in points} | {-bound, bound})
    signs = [poly.sign_at(p) for p in pts]
    zeros = [p for p, s in zip(pts, signs) if s == 0]
    zero_set = set(zeros)
    deriv = poly.derivative() if zeros else None
    gs = []
    for p, s in zip(pts, signs):
        if s == 0:
            g = deriv.sign_at(p)
            if g == 0:
                raise NonSquarefree(f"{p} is a multiple root of {poly}")
            for z in zeros:
                if z != p:
                    g *= _sgn(p - z)
        else:
            g = s
            for z in zeros:
                g *= _sgn(p - z)
        gs.append(g)
    changes = [k for k in range(len(pts) - 1) if gs[k] != gs[k + 1]]
    if len(changes) + len(zeros) != expected:
        return None
    found = [IsolatedRoot.exact(z) for z in zeros]
    for k in changes:
        lo, hi = pts[k], pts[k + 1]
        g_lo = gs[k]
        root = None
        while lo in zero_set or hi in zero_set:
            m = (lo + hi) / 2
            if poly.sign_at(m) == 0:
                root = IsolatedRoot.exact(m)
                break
            if _gsign(poly, m, zeros) == g_lo:
                lo = m
            else:
                hi = m
        found.append(root or IsolatedRoot.bracket(lo, hi))
    found.sort(key=lambda r: r.lo)
    return found


def isolate_roots_bisection(p, precision=Fraction(1, 10**8)):
    """Generic isolator: Sturm counting on bisected Cauchy-bound intervals."""
    chain = sturm_chain(p)
    if not chain.squarefree:
        raise NonSquarefree(f"gcd(p, p') = {chain.gcd} has positive degree")
    if p.degree == 1:
        rs = RootSet(p, [IsolatedRoot.exact(-p[0] / p[1])])
        return rs
    bound = p.root_bound()
    total = count_real_roots(chain, (-bound, bound))
    found = []

    def open_count(lo, hi):
        # roots strictly inside (lo, hi)
        return count_real_roots(chain, (lo, hi)) - (p.sign_at(hi) == 0)

    stack = [(-bound, bound, total)]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1 and p.sign_at(lo) != 0 and p.sign_at(hi) != 0:
            found.append(IsolatedRoot.bracket(lo, hi))
            continue
        m = (lo + hi) / 2
        left = open_count(lo, m)
        if p.sign_at(m) == 0:
            found.append(IsolatedRoot.exact(m))
            right = k - 1 - left
        else:
            right = k - left
        stack.append((m, hi, right))
        stack.append((lo, m, left))
    found.sort(key=lambda r: r.lo)
    rs = RootSet(p, found)
    if precision is not None:
        rs.refine_all(precision)
    return rs
