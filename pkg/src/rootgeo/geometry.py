"""Landmarks, case classification, sign oracles and interlacing-guided root
isolation for (0,1)-sequences."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    BracketFailure,
    CZero,
    DeltaNotNegative,
    DeltaNotPositive,
    X0EqualsXg,
    XgNotReal,
)
from .roots import IsolatedRoot, RootSet, compare_roots, isolate_from_points
from .sequences import (
    SequenceCache,
    degree_of,
    eval_sequence_at,
    normalize,
    trig_pair,
)
from .surd import QuadraticSurd, surd_sign

CASE_I, CASE_II, CASE_III = "I", "II", "III"

DEFAULT_PRECISION = Fraction(1, 10**8)
MAX_ISOLATION_ROUNDS = 80


def _sgn(x):
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Landmarks:
    """Exact landmark constants of a spec, in the spec's own coordinate.

    ``x_g`` (equal to ``y_star``) is ``None`` when it is not real; ``n0`` is
    ``None`` when its denominator vanishes (read as +infinity).
    """

    x_B: Fraction
    x_Delta: Fraction
    x_g: Optional[QuadraticSurd]
    n0: Optional[Fraction]
    x_star: Fraction
    r_star: Fraction
    y_star: Optional[QuadraticSurd]
    case_tag: Optional[str]
    c_normalized: Fraction
    boundary: Fraction  # -(a^2 + 2ab)/4 in normalized parameters
    flags: dict = field(default_factory=dict, compare=False)


def _xg_normalized(a, b, c):
    disc = (a + b) ** 2 + 4 * c
    if disc < 0:
        return None
    return (QuadraticSurd.sqrt_of(disc) * -1 + (a + b)) * Fraction(1, 2)


def compute_landmarks(spec):
    ns, to_orig = normalize(spec)
    a, b, c = ns.a, ns.b, ns.c
    boundary = -(a * a + 2 * a * b) / 4
    den = a * a + 2 * a * b + 4 * c
    n0 = 2 * a * b / den if den != 0 else None
    xg_n = _xg_normalized(a, b, c)
    x_g = to_orig(xg_n) if xg_n is not None else None
    if c == 0:
        tag = None
    elif c <= boundary:
        tag = CASE_I
    elif c < 0:
        tag = CASE_II
    else:
        tag = CASE_III
    x_delta = -(spec.a**2 + 4 * spec.c) / (4 * spec.b)
    flags = {}
    if tag == CASE_I:
        flags["w_at_x_delta_positive"] = True
    if tag in (CASE_II, CASE_III) and x_g is not None:
        flags["x_delta_below_x_g"] = surd_sign(x_g - x_delta) > 0
    return Landmarks(
        x_B=-spec.c / spec.b,
        x_Delta=x_delta,
        x_g=x_g,
        n0=n0,
        x_star=x_delta,
        r_star=x_delta - spec.a / (2 * spec.t),
        y_star=x_g,
        case_tag=tag,
        c_normalized=c,
        boundary=boundary,
        flags=flags,
    )


def classify_case(spec):
    ns, _ = normalize(spec)
    a, b, c = ns.a, ns.b, ns.c
    if c == 0:
        raise CZero("c = 0: reduce the sequence before classifying")
    if c <= -(a * a + 2 * a * b) / 4:
        return CASE_I
    return CASE_II if c < 0 else CASE_III


# ---------------------------------------------------------------------------
# sign oracles


def sign_at_xB(spec, n):
    """sign W_n(x_B) = sign W_1(x_B), since W_n(x_B) = a^(n-1) W_1(x_B)."""
    if n < 1:
        raise ValueError("n must be at least 1")
    return _sgn(spec.w1_at(-spec.c / spec.b))


def sign_at_xDelta(spec, n):
    if n < 1:
        raise ValueError("n must be at least 1")
    ns, _ = normalize(spec)
    a, b, c = ns.a, ns.b, ns.c
    if c <= -(a * a + 2 * a * b) / 4:
        return 1
    n0 = 2 * a * b / (a * a + 2 * a * b + 4 * c)
    return _sgn(n0 - n)


def sign_at_xg(spec, n):
    if n < 1:
        raise ValueError("n must be at least 1")
    ns, _ = normalize(spec)
    xg = _xg_normalized(ns.a, ns.b, ns.c)
    if xg is None:
        raise XgNotReal("(a+b)^2 + 4c < 0")
    return surd_sign(xg) ** n


def delta_at(spec, x):
    """4*b*x + a^2 + 4*c (normalized parameters)."""
    return 4 * spec.b * x + spec.a * spec.a + 4 * spec.c


def _to_normalized_point(spec, x0):
    ns, to_orig = normalize(spec)
    return ns, to_orig.inverse()(Fraction(x0))


def angle_side_test(spec, x0, n):
    """Side of the line l_{x0} holding the angle n*theta(x0).

    Computed from ((a + i*sqrt(-Delta))/2)^n in exact pair arithmetic; the
    answer is "right" when W_n(x0) > 0, "left" when negative, "on" when zero.
    """
    ns, x = _to_normalized_point(spec, x0)
    delta = delta_at(ns, x)
    if delta >= 0:
        raise DeltaNotNegative(f"Delta({x0}) = {delta} is not negative")
    P, Q = trig_pair(ns.a, delta, n)
    s = _sgn(P + (2 * x - ns.a) * Q)
    return {1: "right", 0: "on", -1: "left"}[s]


def eventual_sign_test(spec, x0, n_cap=500):
    """Least N with sign W_n(x0) = sign(x0 - x_g) for every scanned n >= N.

    Returns (stabilized, N); N is None when even W_{n_cap}(x0) disagrees.
    """
    ns, x = _to_normalized_point(spec, x0)
    if delta_at(ns, x) <= 0:
        raise DeltaNotPositive(f"Delta({x0}) is not positive")
    xg = _xg_normalized(ns.a, ns.b, ns.c)
    target = surd_sign(-xg + x)
    if target == 0:
        raise X0EqualsXg(f"x0 = {x0} equals x_g")
    values = eval_sequence_at(ns, x, n_cap)
    threshold = None
    for n in range(n_cap, 0, -1):
        if _sgn(values[n]) != target:
            break
        threshold = n
    return threshold is not None, threshold


# ---------------------------------------------------------------------------
# isolation


def isolate_roots_interlaced(spec, n_max, precision=DEFAULT_PRECISION, cache=None):
    """RootSets R_0..R_{n_max} of a normalized spec with c != 0.

    R_1 = {0} and R_2 = {-c/(a+b)} are exact.  For n >= 3 the bracket
    endpoints of R_{n-1} together with 0, x_B, x_Delta and -c/(a+b) are used
    as separating points for W_n; the result is accepted only when the sign
    changes account for all deg W_n roots, so every bracket is certified.
    """
    if not spec.normalized:
        raise ValueError("isolate_roots_interlaced needs a normalized spec")
    if spec.c == 0:
        raise CZero("c = 0: reduce the sequence first")
    a, b, c = spec.a, spec.b, spec.c
    cache = cache or SequenceCache(spec)
    cache.extend(max(n_max, 1))
    landmarks = [Fraction(0), -c / b, -(a * a + 4 * c) / (4 * b), -c / (a + b)]
    sets = [RootSet(cache[0], [], 0), RootSet(cache[1], [IsolatedRoot.exact(0)], 1)]
    if n_max >= 2:
        sets.append(RootSet(cache[2], [IsolatedRoot.exact(-c / (a + b))], 2))
    for n in range(3, n_max + 1):
        poly = cache[n]
        prev = sets[n - 1]
        expected = degree_of(n)
        for _ in range(MAX_ISOLATION_ROUNDS):
            points = list(landmarks)
            for root in prev.roots:
                if root.interval is not None:
                    points += [root.interval.lo, root.interval.hi]
                else:
                    points.append(root.value)
            found = isolate_from_points(poly, points, expected)
            if found is not None:
                break
            if all(r.is_exact for r in prev.roots):
                found = None
                break
            for i in range(len(prev.roots)):
                prev.bisect_once(i)
        if found is None:
            raise BracketFailure(
                f"could not account for {expected} sign changes of W_{n} for {spec}"
            )
        sets.append(RootSet(poly, found, n))
    sets = sets[: n_max + 1]
    if precision is not None:
        for rs in sets:
            rs.refine_all(precision)
    return sets


@dataclass
class GeneralRoots:
    """Root sets of an arbitrary (0,1) spec, mapped back from normalized form."""

    spec: object
    sets: list  # RootSet per n in the normalized (and possibly reduced) coordinate
    to_orig: object  # AffineMap into the original coordinate
    extra_zero: bool = False  # original W_n (n >= 1) also vanish at the pole of the reduction
    offset: int = 0  # original index = reduced index + offset
    to_orig_zero: Fraction = Fraction(0)

    def roots_of(self, n, precision=None):
        """Approximate/exact roots of the original W_n as (lo, hi) pairs."""
        out = []
        k = n - self.offset
        if self.extra_zero and n >= 1:
            z = self.to_orig_zero
            out.append((z, z))
        if k >= 1:
            rs = self.sets[k]
            if precision is not None:
                rs.refine_all(precision)
            for r in rs:
                lo, hi = self.to_orig(r.lo), self.to_orig(r.hi)
                out.append((min(lo, hi), max(lo, hi)))
        return sorted(out)


def isolate_general(spec, n_max, precision=DEFAULT_PRECISION):
    """Isolate roots of W_1..W_{n_max} for any valid spec.

    Normalizes, and when the normalized constant term vanishes divides out the
    common root first.
    """
    from .sequences import reduce_c_zero_spec

    ns, m1 = normalize(spec)
    if ns.c != 0:
        return GeneralRoots(spec, isolate_roots_interlaced(ns, n_max, precision), m1)
    reduced = reduce_c_zero_spec(ns)
    rn, m2 = normalize(reduced)
    sets = isolate_roots_interlaced(rn, max(n_max - 2, 1), precision)
    return GeneralRoots(
        spec, sets, m1.compose(m2), extra_zero=True, offset=2, to_orig_zero=m1(Fraction(0))
    )


# ---------------------------------------------------------------------------
# convergence


@dataclass
class ConvergenceRow:
    kind: str  # "offset" (xi_{n, d_n - i}) or "index" (xi_{n, i})
    i: int
    landmark: Optional[str]
    values: list  # (n, float) pairs
    verdict: str
    distance: Optional[float] = None


def _strictly_monotone(seq, increasing):
    """seq: list of (RootSet, index). Exact strict monotonicity check."""
    want = -1 if increasing else 1
    for (rs1, i1), (rs2, i2) in zip(seq, seq[1:]):
        if compare_roots(rs1, i1, rs2, i2) != want:
            return False
    return True


def convergence_report(spec, n_max, i_max, root_sets=None):
    """Tabulate the root sequences whose limits the theory predicts."""
    lm = compute_landmarks(spec)
    tag = lm.case_tag
    sets = root_sets or isolate_roots_interlaced(spec, n_max)
    rows = []
    for i in range(0, i_max + 1):
        seq = [(sets[n], degree_of(n) - 1 - i) for n in range(1, n_max + 1) if degree_of(n) > i]
        if not seq:
            continue
        vals = [(rs.n, float(rs[j])) for rs, j in seq]
        if i == 0 and tag == CASE_III:
            odd = [s for s in seq if s[0].n % 2]
            even = [s for s in seq if not s[0].n % 2]
            ok = _strictly_monotone(even, True) and _strictly_monotone(odd, False)
            verdict = "oscillating" if ok else "irregular"
            name, target = "x_g", lm.x_g
        else:
            verdict = "increasing" if _strictly_monotone(seq, True) else "not monotone"
            if i == 0 and tag == CASE_II:
                name, target = "x_g", lm.x_g
            else:
                name, target = "x_Delta", QuadraticSurd(lm.x_Delta)
        last_rs, last_j = seq[-1]
        dist = abs(float(last_rs[last_j]) - float(target)) if target is not None else None
        rows.append(ConvergenceRow("offset", i, name, vals, verdict, dist))
    for i in range(1, i_max + 1):
        seq = [(sets[n], i - 1) for n in range(1, n_max + 1) if degree_of(n) >= i + (tag == CASE_III)]
        if len(seq) < 3:
            continue
        vals = [(rs.n, float(rs[j])) for rs, j in seq]
        odd = [s for s in seq if s[0].n % 2]
        even = [s for s in seq if not s[0].n % 2]
        ok = _strictly_monotone(odd, False) and _strictly_monotone(even, False)
        rows.append(ConvergenceRow("index", i, "-inf", vals, "decreasing" if ok else "not monotone"))
    return rows
