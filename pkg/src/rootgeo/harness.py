"""Executable checks of the interlacing, bound and limit theorems.

Every verifier returns a :class:`TheoremReport`; failed checks are recorded
with a witness instead of raising, so a single run surfaces every problem.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import (
    BracketFailure,
    CZero,
    PremiseViolated,
    RefinementExhausted,
)
from .geometry import (
    CASE_I,
    CASE_II,
    CASE_III,
    compute_landmarks,
    isolate_roots_interlaced,
)
from .roots import compare_roots, count_real_roots, sturm_chain
from .sequences import SequenceCache, degree_of, generate_degree3, normalize
from .surd import QuadraticSurd

BOWTIE, RTIMES = "bowtie", "rtimes"


def _fmt(v):
    return str(v) if v is not None else None


# ---------------------------------------------------------------------------
# reports


@dataclass
class InterlacingVerdict:
    relation: str
    lhs_n: Optional[int]
    rhs_n: Optional[int]
    holds: bool
    witness: Optional[tuple] = None  # (description of lhs root, rhs root)


@dataclass
class TheoremReport:
    theorem_id: str
    spec: object
    n_range: tuple
    checks_passed: int = 0
    checks_failed: int = 0
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def ok(self):
        return self.checks_failed == 0

    def record(self, passed, what, **witness):
        if passed:
            self.checks_passed += 1
        else:
            self.checks_failed += 1
            self.failures.append({"check": what, **{k: _fmt(v) for k, v in witness.items()}})
        return passed

    def merge(self, other):
        self.checks_passed += other.checks_passed
        self.checks_failed += other.checks_failed
        self.failures.extend(other.failures)
        self.notes.extend(other.notes)
        return self

    def to_dict(self):
        return {
            "theorem_id": self.theorem_id,
            "spec": str(self.spec),
            "n_range": list(self.n_range),
            "checks_passed": self.checks_passed,
            "checks_failed": self.checks_failed,
            "failures": self.failures,
            "notes": self.notes,
        }


@dataclass
class ConjectureVerdict:
    n_verified: int
    per_n: list  # (n, degree, real_root_count, squarefree)
    all_real: bool

    def to_dict(self):
        return asdict(self)


# ---------------------------------------------------------------------------
# shared analysis context


class Analysis:
    """Normalized spec plus lazily isolated root sets, shared between checks.

    Brackets are left as isolation produced them unless ``precision`` is
    given; every comparison refines what it needs.
    """

    def __init__(self, spec, n_max, precision=None, corrupt_at=None):
        self.original = spec
        self.spec, self.to_orig = normalize(spec)
        if self.spec.c == 0:
            raise CZero("c = 0: reduce the sequence before analysis")
        self.n_max = n_max
        self.precision = precision
        self.cache = SequenceCache(self.spec)
        if corrupt_at is not None:
            self._corrupt(corrupt_at)
        self.landmarks = compute_landmarks(self.spec)
        self._sets = None

    def _corrupt(self, k):
        """Negative control: flip the sign of the (bx + c) term at step k."""
        if k < 3:
            raise ValueError("corruption step must be at least 3")
        s = self.spec
        self.cache = SequenceCache(s, check_degree_law=False)
        self.cache.extend(k - 1)
        w = self.cache.polys
        w.append(w[-1] * s.a - s.B * w[-2])

    @property
    def sets(self):
        if self._sets is None:
            self._sets = isolate_roots_interlaced(
                self.spec, self.n_max, self.precision, cache=self.cache
            )
        return self._sets

    def __getitem__(self, n):
        return self.sets[n]


def _analysis(spec, n_max, analysis):
    if analysis is not None and analysis.n_max >= n_max:
        return analysis
    return Analysis(spec, n_max)


# ---------------------------------------------------------------------------
# interlacing


def _chain_holds(seq):
    """seq: list of (RootSet, index); True iff strictly increasing."""
    for (r1, i1), (r2, i2) in zip(seq, seq[1:]):
        if compare_roots(r1, i1, r2, i2) != -1:
            return False, (r1.n, i1, float(r1[i1]), r2.n, i2, float(r2[i2]))
    return True, None


def check_interlacing(rs_hi, rs_lo, relation, hi_idx=None, lo_idx=None):
    """Decide X bowtie Y or X rtimes Y for X = rs_hi, Y = rs_lo.

    ``hi_idx`` / ``lo_idx`` restrict to sub-lists of root indices (primed
    sets, roots below a threshold).  Comparisons are exact.
    """
    xi = list(range(len(rs_hi))) if hi_idx is None else list(hi_idx)
    yi = list(range(len(rs_lo))) if lo_idx is None else list(lo_idx)
    p, q = len(xi), len(yi)

    def verdict(holds, witness=None):
        return InterlacingVerdict(relation, rs_hi.n, rs_lo.n, holds, witness)

    if q == p - 1:
        seq = []
        for k in range(p):
            seq.append((rs_hi, xi[k]))
            if k < q:
                seq.append((rs_lo, yi[k]))
    elif q == p and relation == RTIMES:
        seq = []
        for k in range(p):
            seq.append((rs_lo, yi[k]))
            seq.append((rs_hi, xi[k]))
    else:
        return verdict(False, ("sizes", p, q))
    holds, witness = _chain_holds(seq)
    return verdict(holds, witness)


def _indices_below(rs, beta):
    """Indices of roots strictly below ``beta`` (rational or surd)."""
    return [i for i in range(len(rs)) if rs.compare_value(i, beta) < 0]


# ---------------------------------------------------------------------------
# Theorem: distinct real roots with interlacing


def verify_theorem_RR(spec, n_max, analysis=None):
    rep = TheoremReport("real-rootedness-interlacing", spec, (1, n_max))
    try:
        an = _analysis(spec, n_max, analysis)
        sets = an.sets
    except BracketFailure as exc:
        rep.record(False, "isolation", detail=exc)
        return rep
    s = an.spec
    x_B = -s.c / s.b
    x_D = an.landmarks.x_Delta
    for n in range(1, n_max + 1):
        rep.record(len(sets[n]) == degree_of(n), "root-count", n=n, found=len(sets[n]))
    if s.c < 0:
        for n in range(1, n_max + 1):
            rep.record(sets[n].compare_value(len(sets[n]) - 1, x_B) < 0, "y_n<x_B", n=n)
        for n in range(1, n_max):
            v = check_interlacing(sets[n + 1], sets[n], RTIMES)
            rep.record(v.holds, "R_{n+1} rtimes R_n", n=n, witness=v.witness)
        for n in range(1, n_max - 1):
            v = check_interlacing(sets[n + 2], sets[n], BOWTIE)
            rep.record(v.holds, "R_{n+2} bowtie R_n", n=n, witness=v.witness)
    else:
        def primed(n):
            return range(len(sets[n]) - 1)

        for n in range(1, n_max + 1):
            rep.record(sets[n].compare_value(len(sets[n]) - 1, x_B) > 0, "y_n>x_B", n=n)
            for i in primed(n):
                rep.record(sets[n].compare_value(i, x_D) < 0, "R'_n<x_Delta", n=n, i=i)
        for n in range(1, n_max - 1):
            v = check_interlacing(sets[n + 2], sets[n + 1], RTIMES, primed(n + 2), primed(n + 1))
            rep.record(v.holds, "R'_{n+2} rtimes R'_{n+1}", n=n, witness=v.witness)
            v = check_interlacing(sets[n + 2], sets[n], BOWTIE, primed(n + 2), primed(n))
            rep.record(v.holds, "R'_{n+2} bowtie R'_n", n=n, witness=v.witness)
    return rep


# ---------------------------------------------------------------------------
# Theorem: bounds on the zero set


def verify_theorem_bounds(spec, n_max, analysis=None):
    rep = TheoremReport("zero-set-bounds", spec, (1, n_max))
    try:
        an = _analysis(spec, n_max, analysis)
        sets = an.sets
    except BracketFailure as exc:
        rep.record(False, "isolation", detail=exc)
        return rep
    lm = an.landmarks
    x_D, x_g, tag = lm.x_Delta, lm.x_g, lm.case_tag

    def all_below(n, upto, label):
        for i in range(upto):
            rep.record(sets[n].compare_value(i, x_D) < 0, label, n=n, i=i)

    if tag == CASE_I:
        for n in range(1, n_max + 1):
            all_below(n, len(sets[n]), "R_n<x_Delta")
        return rep
    for n in range(1, n_max + 1):
        all_below(n, len(sets[n]) - 1, "R'_n<x_Delta")
    if tag == CASE_II:
        n0 = lm.n0
        for n in range(1, n_max + 1):
            top = len(sets[n]) - 1
            pos = sets[n].compare_value(top, x_D)
            if n < n0:
                rep.record(pos < 0, "y_n<x_Delta (n<n0)", n=n, n0=n0)
            elif n == n0:
                rep.record(pos == 0, "y_n=x_Delta (n=n0)", n=n)
            else:
                rep.record(pos > 0, "y_n>x_Delta (n>n0)", n=n, n0=n0)
                rep.record(sets[n].compare_value(top, x_g) < 0, "y_n<x_g", n=n)
        return rep
    # case III: x_B < y_2 < y_4 < ... < x_g < ... < y_3 < y_1 = 0
    def y(n):
        return sets[n], len(sets[n]) - 1

    rep.record(sets[1][0].is_exact and sets[1][0].value == 0, "y_1=0")
    if n_max >= 2:
        rep.record(sets[2].compare_value(0, lm.x_B) > 0, "x_B<y_2")
    for n in range(1, n_max + 1):
        side = sets[n].compare_value(len(sets[n]) - 1, x_g)
        want = 1 if n % 2 else -1
        rep.record(side == want, "y_n vs x_g by parity", n=n)
    for n in range(1, n_max - 1):
        c = compare_roots(*y(n), *y(n + 2))
        want = 1 if n % 2 else -1
        rep.record(c == want, "y_n monotone by parity", n=n)
    return rep


# ---------------------------------------------------------------------------
# sign inequalities for interlacing pairs


def _sign_at_root(f_roots, f_poly, g_roots, j):
    """sign f(y) for the j-th root y of g.

    When f_roots accounts for every root of f, the sign follows from how many
    of them lie above y; otherwise a Sturm count on a shrinking bracket is used.
    """
    if len(f_roots) == f_poly.degree:
        above = 0
        for i in range(len(f_roots)):
            c = compare_roots(f_roots, i, g_roots, j)
            if c == 0:
                return 0
            above += c > 0
        return f_poly.sign_at_infinity(1) * (-1) ** above
    root = g_roots[j]
    if root.is_exact:
        return f_poly.sign_at(root.value)
    chain = sturm_chain(f_poly)
    for _ in range(200):
        lo, hi = g_roots[j].lo, g_roots[j].hi
        if g_roots[j].is_exact:
            return f_poly.sign_at(lo)
        if f_poly.sign_at(lo) != 0 and count_real_roots(chain, (lo, hi)) == 0:
            return f_poly.sign_at(lo)
        g_roots.bisect_once(j)
    raise RefinementExhausted("f and g appear to share a root")


def verify_appendix_A(f_roots, g_roots, beta, f=None, g=None):
    """Check the sign inequalities of an interlacing pair below ``beta``.

    With X' = roots of f below beta (p of them) and Y' = roots of g below
    beta (q of them), X' rtimes Y' is required.  Then for f(beta) != 0:
    f(y_j) f(beta) (-1)^(q-j) < 0 for j in [q+1-p, q+1], and for g(beta) != 0:
    g(x_i) g(beta) (-1)^(p-i) > 0 for i in [p-q, p], with x_0 = y_0 = -inf
    and y_{q+1} = beta.
    """
    f = f or f_roots.poly
    g = g or g_roots.poly
    beta = Fraction(beta)
    rep = TheoremReport("sign-inequalities", None, (f_roots.n, g_roots.n))
    X = _indices_below(f_roots, beta)
    Y = _indices_below(g_roots, beta)
    p, q = len(X), len(Y)
    v = check_interlacing(f_roots, g_roots, RTIMES, X, Y)
    if not v.holds and not (p == 1 and q == 0):
        raise PremiseViolated("interlace", f"X' rtimes Y' fails: {v.witness}")
    f_beta, g_beta = f.sign_at(beta), g.sign_at(beta)
    if f_beta != 0:
        for j in range(q + 1 - p, q + 2):
            if j == 0:
                fy = f.sign_at_infinity(-1)
            elif j == q + 1:
                fy = f_beta
            else:
                fy = _sign_at_root(f_roots, f, g_roots, Y[j - 1])
            rep.record(fy * f_beta * (-1) ** (q - j) < 0, "f-inequality", j=j, p=p, q=q)
    if g_beta != 0:
        for i in range(p - q, p + 1):
            if i == 0:
                gx = g.sign_at_infinity(-1)
            else:
                gx = _sign_at_root(g_roots, g, f_roots, X[i - 1])
            rep.record(gx * g_beta * (-1) ** (p - i) > 0, "g-inequality", i=i, p=p, q=q)
    return rep


# ---------------------------------------------------------------------------
# interlacing criterion, one step


def verify_criterion_step(spec, m, k, beta, analysis=None):
    """Check the premises for (m, k, beta) and, when they hold, the conclusion."""
    beta = Fraction(beta)
    an = _analysis(spec, m + 2, analysis)
    s = an.spec
    if beta > -s.c / s.b:
        raise PremiseViolated("beta-bound", f"beta = {beta} exceeds -c/b = {-s.c / s.b}")
    sets = an.sets
    rep = TheoremReport("interlacing-criterion", spec, (m, m + 2))
    if an.cache[m].sign_at(beta) * (-1) ** k <= 0:
        raise PremiseViolated("sign-at-beta", f"W_{m}({beta})(-1)^{k} is not positive")
    Tm = _indices_below(sets[m], beta)
    Tm1 = _indices_below(sets[m + 1], beta)
    if len(Tm) != degree_of(m) - k:
        raise PremiseViolated("count-m", f"|T_m| = {len(Tm)} != {degree_of(m) - k}")
    if len(Tm1) != degree_of(m + 1) - k:
        raise PremiseViolated("count-m+1", f"|T_m+1| = {len(Tm1)} != {degree_of(m + 1) - k}")
    if not check_interlacing(sets[m + 1], sets[m], RTIMES, Tm1, Tm).holds:
        raise PremiseViolated("interlace-m", "T_{m+1} rtimes T_m fails")
    S = _indices_below(sets[m + 2], beta)
    size = degree_of(m + 2) - k
    found = None
    for start in range(0, len(S) - size + 1):
        window = S[start : start + size]
        if check_interlacing(sets[m + 2], sets[m + 1], RTIMES, window, Tm1).holds:
            found = window
            break
    rep.record(found is not None, "T_{m+2} rtimes T_{m+1}", m=m, k=k, below=len(S), need=size)
    if found is not None and len(S) == size:
        v = check_interlacing(sets[m + 2], sets[m], BOWTIE, found, Tm)
        rep.record(v.holds, "T_{m+2} bowtie T_m", m=m, witness=v.witness)
    return rep


# ---------------------------------------------------------------------------
# limits, finite horizon


def verify_limits(
    spec, n_max, i_max, slack=None, divergence_margin=None, analysis=None, n_ref=20, offset_slack=None
):
    """Finite-horizon versions of the limit theorems.

    Monotonicity and the bound by the limiting landmark are checked exactly
    for every n <= n_max.  ``slack`` additionally demands
    |xi(n_max) - landmark| < slack for the largest-root sequences;
    ``divergence_margin`` demands xi_{n_max, i} < xi_{n_ref, i} - margin.
    Omitted values skip the quantitative proxies (recorded in the notes).
    """
    if n_max < n_ref:
        raise ValueError(f"n_max must be at least {n_ref}")
    rep = TheoremReport("limits", spec, (1, n_max))
    try:
        an = _analysis(spec, n_max, analysis)
        sets = an.sets
    except BracketFailure as exc:
        rep.record(False, "isolation", detail=exc)
        return rep
    lm = an.landmarks
    tag = lm.case_tag
    x_D = QuadraticSurd(lm.x_Delta)
    rep.notes.append(f"verified for n <= {n_max}; limits themselves are not finitely checkable")
    if slack is None:
        rep.notes.append("no proximity slack given: distance to limits not asserted")
    if divergence_margin is None:
        rep.notes.append("no divergence margin given: only strict decrease asserted")

    def top(n, i=0):
        return sets[n], len(sets[n]) - 1 - i

    def near(n, i, target, what):
        bound = slack if i == 0 else offset_slack
        if bound is None:
            return
        rs, j = top(n, i)
        rs.refine(j, Fraction(bound) / 10)
        gap = abs(float(rs[j]) - float(target))
        rep.record(gap < bound, what, n=n, i=i, gap=gap, slack=bound)

    # largest roots toward x_g
    if tag == CASE_II:
        for n in range(1, n_max):
            rep.record(compare_roots(*top(n), *top(n + 1)) == -1, "y_n increasing", n=n)
        rep.record(sets[n_max].compare_value(len(sets[n_max]) - 1, lm.x_g) < 0, "y_n<x_g", n=n_max)
        near(n_max, 0, lm.x_g, "|y_n - x_g| < slack")
    elif tag == CASE_III:
        for n in range(1, n_max - 1):
            want = 1 if n % 2 else -1
            rep.record(compare_roots(*top(n), *top(n + 2)) == want, "y_n parity monotone", n=n)
        for n in (n_max - 1, n_max):
            want = 1 if n % 2 else -1
            rep.record(sets[n].compare_value(len(sets[n]) - 1, lm.x_g) == want, "sandwich x_g", n=n)
            near(n, 0, lm.x_g, "|y_n - x_g| < slack")
    # offsets toward x_Delta
    first = 0 if tag == CASE_I else 1
    for i in range(first, i_max + 1):
        ns = [n for n in range(1, n_max + 1) if degree_of(n) > i + (tag == CASE_III and i == 0)]
        for n1, n2 in zip(ns, ns[1:]):
            rep.record(compare_roots(*top(n1, i), *top(n2, i)) == -1, "xi_{n,d-i} increasing", n=n1, i=i)
        rep.record(sets[n_max].compare_value(len(sets[n_max]) - 1 - i, x_D) < 0, "xi_{n,d-i}<x_Delta", i=i)
        near(n_max, i, x_D, "|xi_{n,d-i} - x_Delta| < slack")
    # fixed indices toward -infinity
    for i in range(1, i_max + 1):
        for n in range(1, n_max - 1):
            if degree_of(n) < i:
                continue
            c = compare_roots(sets[n + 2], i - 1, sets[n], i - 1)
            rep.record(c == -1, "xi_{n,i} decreasing by parity", n=n, i=i)
        if divergence_margin is not None and degree_of(n_ref) >= i:
            lo = float(sets[n_max][i - 1])
            ref = float(sets[n_ref][i - 1])
            rep.record(lo < ref - divergence_margin, "divergence proxy", i=i, xi_max=lo, xi_ref=ref)
    return rep


def run_all(spec, n_max, i_max=2, slack=None, divergence_margin=None, corrupt_at=None):
    """Every applicable check for one spec, merged into a list of reports."""
    an = Analysis(spec, n_max, corrupt_at=corrupt_at)
    reports = [verify_theorem_RR(spec, n_max, an)]
    try:
        sets = an.sets
    except BracketFailure:
        return reports
    reports.append(verify_theorem_bounds(spec, n_max, an))
    s = an.spec
    x_B = -s.c / s.b
    sign_report = TheoremReport("sign-inequalities", spec, (1, n_max))
    criterion = TheoremReport("interlacing-criterion", spec, (1, n_max))
    # beta = x_B with k = 0 when c < 0; beta = x_Delta with k = 1 when c > 0
    beta, k = (x_B, 0) if s.c < 0 else (an.landmarks.x_Delta, 1)
    for m in range(1, n_max - 1):
        for target, run in (
            (sign_report, lambda: verify_appendix_A(sets[m + 1], sets[m], beta)),
            (criterion, lambda: verify_criterion_step(spec, m, k, beta, an)),
        ):
            if target is criterion and m < 1 + k:
                continue
            try:
                target.merge(run())
            except (PremiseViolated, RefinementExhausted) as exc:
                target.record(False, "premise", m=m, detail=exc)
    reports += [sign_report, criterion]
    if n_max >= 20:
        reports.append(verify_limits(spec, n_max, i_max, slack, divergence_margin, an))
    return reports


# ---------------------------------------------------------------------------
# degree-3 conjecture


def squarefree_decomposition(p):
    """Yun's algorithm: [(f_1, 1), (f_2, 2), ...] with p = c * prod f_i^i."""
    out = []
    dp = p.derivative()
    g = sturm_chain(p, normalize=False).gcd
    if g.degree < 1:
        return [(p, 1)]
    w = p.exact_div(g)
    y = dp.exact_div(g)
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        h = _gcd(w, z)
        if h.degree > 0:
            out.append((h, i))
        w = w.exact_div(h)
        y = z.exact_div(h)
        i += 1
    return out


def _gcd(p, q):
    while q:
        p, q = q, p % q
    return p * (1 / p.lead) if p else p


def verify_conjecture(n_max, polys=None):
    polys = polys or generate_degree3(n_max)
    per_n = []
    all_real = True
    for n in range(1, n_max + 1):
        p = polys[n]
        chain = sturm_chain(p)
        if chain.squarefree:
            real = count_real_roots(chain)
            sqf = True
        else:
            sqf = False
            real = 0
            for f, mult in squarefree_decomposition(p):
                real += mult * count_real_roots(sturm_chain(f))
        per_n.append((n, p.degree, real, sqf))
        all_real = all_real and real == p.degree
    return ConjectureVerdict(n_max, per_n, all_real)


__all__ = [
    "Analysis",
    "BOWTIE",
    "RTIMES",
    "ConjectureVerdict",
    "InterlacingVerdict",
    "TheoremReport",
    "check_interlacing",
    "run_all",
    "squarefree_decomposition",
    "verify_appendix_A",
    "verify_conjecture",
    "verify_criterion_step",
    "verify_limits",
    "verify_theorem_RR",
    "verify_theorem_bounds",
]
