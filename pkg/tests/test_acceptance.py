"""The eleven acceptance criteria, each at its stated tolerance and time budget.

Every test prints one ``[PASS]``/``[FAIL]`` line; the lines are repeated in
the terminal summary.
"""

import io
import random
import time
from fractions import Fraction

from helpers import random_spec, random_specs
from rootgeo.cli import main
from rootgeo.geometry import (
    angle_side_test,
    compute_landmarks,
    isolate_general,
    isolate_roots_interlaced,
)
from rootgeo.harness import run_all, verify_conjecture, verify_limits
from rootgeo.roots import isolate_roots_bisection
from rootgeo.sequences import (
    ConstantRecurrenceSpec,
    RecurrenceSpec,
    chebyshev_crosscheck,
    closed_form_constant,
    constant_spec_at,
    degree_of,
    eval_sequence_at,
    generate,
    iterate_constant,
    trig_form_constant,
)
from rootgeo.surd import surd_sign
from rootgeo.tables import compare_golden, golden_spec, root_table

HALF = Fraction(1, 2)
CASE_II_SPEC = RecurrenceSpec(1, 1, -HALF)
CASE_III_SPEC = RecurrenceSpec(1, 1, 1)
MILLI = Fraction(1, 1000)


def _golden(verdict, number, name, argv):
    start = time.perf_counter()
    rows = root_table(golden_spec(name), 8)
    bad = compare_golden(rows, name)
    code = main(argv + ["-n", "8", "--golden", name], out=io.StringIO())
    elapsed = time.perf_counter() - start
    cells = sum(len(r) for r in rows)
    ok = not bad and code == 0 and cells == 20 and elapsed < 1
    verdict(number, ok, f"{name}: {cells}/20 values match, CLI exit {code}, {elapsed:.3f} s (< 1 s)")
    assert ok, bad


def test_criterion_01_first_table(verdict):
    _golden(verdict, 1, "table1", ["roots", "-a", "1", "-b", "1", "-c", "-1/2"])
    row5 = root_table(golden_spec("table1"), 5)[4]
    assert row5[1].exact and row5[1].lo == 0


def test_criterion_02_second_table(verdict):
    _golden(verdict, 2, "table2", ["roots", "-a", "1", "-b", "1", "-c", "1"])


def test_criterion_03_landmarks(verdict):
    lm2, lm3 = compute_landmarks(CASE_II_SPEC), compute_landmarks(CASE_III_SPEC)
    ok = (
        (lm2.x_Delta, lm2.x_B, lm2.n0) == (Fraction(1, 4), HALF, 2)
        and surd_sign(lm2.x_g) == 1
        and surd_sign(lm2.x_g - lm2.x_B) == -1
        and (lm3.x_Delta, lm3.x_B, lm3.n0) == (Fraction(-5, 4), -1, Fraction(2, 7))
        and surd_sign(lm3.x_g - lm3.x_B) == 1
        and surd_sign(lm3.x_g) == -1
    )
    verdict(3, ok, "exact x_Delta, x_B, n0 and surd orderings for both example specs")
    assert ok


def test_criterion_04_sign_trace(verdict):
    values = eval_sequence_at(CASE_II_SPEC, -1, 200)
    trace_ok = values[:7] == [1, -1, Fraction(-5, 2), -1, Fraction(11, 4), Fraction(17, 4), Fraction(1, 8)]
    side_of = {1: "right", 0: "on", -1: "left"}
    disagree = [
        n for n in range(1, 201)
        if angle_side_test(CASE_II_SPEC, -1, n) != side_of[(values[n] > 0) - (values[n] < 0)]
    ]
    ok = trace_ok and not disagree
    verdict(4, ok, f"W_0..W_6(-1) exact: {trace_ok}; side disagreements for n <= 200: {len(disagree)}")
    assert ok


BOUNDARY_SPECS = [
    RecurrenceSpec(1, 1, Fraction(-3, 4)),  # c = -(a^2 + 2ab)/4
    RecurrenceSpec(2, 1, -2),
    RecurrenceSpec(1, 2, Fraction(-5, 4)),
    RecurrenceSpec(Fraction(1, 3), Fraction(7, 2), Fraction(-11, 18)),
    RecurrenceSpec(1, 1, -HALF),  # n0 = 2
    RecurrenceSpec(1, 1, Fraction(-7, 12)),  # n0 = 3
    RecurrenceSpec(1, 1, Fraction(-13, 20)),  # n0 = 5
    RecurrenceSpec(2, 1, -1),  # n0 = 1
    RecurrenceSpec(3, 2, Fraction(-9, 2)),  # n0 = 4
]


def test_criterion_05_theorem_suite(verdict):
    specs = []
    for k, case in enumerate(["I", "II", "III"]):
        specs += random_specs(500 + k, case, 200)
    specs += BOUNDARY_SPECS
    for s in BOUNDARY_SPECS[:4]:
        assert s.c == -(s.a**2 + 2 * s.a * s.b) / 4
    for s in BOUNDARY_SPECS[4:]:
        assert compute_landmarks(s).n0.denominator == 1
    start = time.perf_counter()
    failures = []
    checks = 0
    for spec in specs:
        for rep in run_all(spec, 40):
            checks += rep.checks_passed + rep.checks_failed
            if not rep.ok:
                failures.append((str(spec), rep.theorem_id, rep.failures[:3]))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    verdict(
        5,
        ok,
        f"{len(specs)} specs (600 random + {len(BOUNDARY_SPECS)} boundary), n_max=40, "
        f"{checks} checks, {len(failures)} failing reports, {elapsed:.1f} s (< 300 s)",
    )
    assert ok, failures[:5]


def test_criterion_06_oracle_equivalence(verdict):
    rng = random.Random(606)
    specs = [random_spec(rng, rng.choice(["I", "II", "III"])) for _ in range(50)]
    mismatches = []
    for spec in specs:
        sets = isolate_roots_interlaced(spec, 40, precision=None)
        cache = generate(spec, 40)
        for n in range(1, 41):
            ours = sets[n]
            theirs = isolate_roots_bisection(cache[n], Fraction(1, 10**4))
            if len(ours) != len(theirs) or len(ours) != degree_of(n):
                mismatches.append((str(spec), n, len(ours), len(theirs)))
                continue
            for r, s in zip(ours, theirs):
                if not (r.lo <= s.hi and s.lo <= r.hi):
                    mismatches.append((str(spec), n, "brackets"))
    ok = not mismatches
    verdict(6, ok, f"50 specs x n <= 40: {len(mismatches)} count or bracket mismatches")
    assert ok, mismatches[:5]


def test_criterion_07_convergence(verdict):
    rep2 = verify_limits(CASE_II_SPEC, 60, 1, slack=MILLI, divergence_margin=1)
    rep3 = verify_limits(CASE_III_SPEC, 60, 1, slack=MILLI, divergence_margin=1)
    # the same facts read off directly
    s2 = isolate_roots_interlaced(CASE_II_SPEC, 60, precision=Fraction(1, 10**6))
    s3 = isolate_roots_interlaced(CASE_III_SPEC, 60, precision=Fraction(1, 10**6))
    xg2, xg3 = compute_landmarks(CASE_II_SPEC).x_g, compute_landmarks(CASE_III_SPEC).x_g
    gap2 = abs(float(s2[60].largest) - float(xg2))
    gap3 = max(abs(float(s3[n].largest) - float(xg3)) for n in (59, 60))
    sandwich = (
        s3[60].compare_value(len(s3[60]) - 1, xg3) == -1
        and s3[59].compare_value(len(s3[59]) - 1, xg3) == 1
    )
    drop2 = float(s2[20][0]) - float(s2[60][0])
    drop3 = float(s3[20][0]) - float(s3[60][0])
    ok = rep2.ok and rep3.ok and gap2 < 1e-3 and gap3 < 1e-3 and sandwich and drop2 > 1 and drop3 > 1
    verdict(
        7,
        ok,
        f"|y_60 - x_g| = {gap2:.2e} (increasing: {rep2.ok}); sandwich {sandwich} with gap {gap3:.2e}; "
        f"xi_20,1 - xi_60,1 = {drop2:.2f}, {drop3:.2f} (> 1)",
    )
    assert ok, rep2.failures + rep3.failures


def test_criterion_08_conjecture(verdict):
    start = time.perf_counter()
    v = verify_conjecture(40)
    elapsed = time.perf_counter() - start
    ok = v.all_real and len(v.per_n) == 40 and elapsed < 600
    nonsqf = sum(not sf for *_, sf in v.per_n)
    verdict(8, ok, f"n <= 40 real-rooted: {v.all_real} ({nonsqf} non-squarefree), {elapsed:.1f} s (< 600 s)")
    assert ok


def test_criterion_09_closed_forms(verdict):
    fib = ConstantRecurrenceSpec(1, 1, 1)
    fib_ok = [closed_form_constant(fib, n) for n in range(51)] == iterate_constant(fib, 50)
    rng = random.Random(909)
    trig_bad = 0
    for _ in range(20):
        spec = random_spec(rng, rng.choice(["I", "II", "III"]))
        x0 = compute_landmarks(spec).x_Delta - Fraction(rng.randint(1, 50), rng.randint(1, 10))
        cs = constant_spec_at(spec, x0)
        assert cs.delta < 0
        direct = iterate_constant(cs, 200)
        trig_bad += sum(sum(trig_form_constant(cs, n)) != direct[n] for n in range(201))
    ok = fib_ok and trig_bad == 0
    verdict(9, ok, f"Fibonacci n <= 50 exact: {fib_ok}; trig-form mismatches at 20 points, n <= 200: {trig_bad}")
    assert ok


def test_criterion_10_chebyshev(verdict):
    rng = random.Random(1010)
    failed = 0
    for _ in range(100):
        spec = random_spec(rng, rng.choice(["I", "II", "III"]))
        x = -spec.c / spec.b - Fraction(rng.randint(1, 40), rng.randint(1, 20))
        n = rng.randint(1, 30)
        failed += not chebyshev_crosscheck(spec, x, n, tol=Fraction(1, 10**9))
    ok = failed == 0
    verdict(10, ok, f"100 instances at relative tolerance 1e-9: {failed} failures")
    assert ok


def test_criterion_11_partial_genus_sequence(verdict):
    spec = RecurrenceSpec(2, 8, 0, 2, 0)
    gr = isolate_general(spec, 100, precision=None)
    back = gr.to_orig.inverse()
    assert gr.to_orig.slope > 0
    threshold = back(Fraction(-1, 8))
    above = []
    for n in range(1, 101):
        k = n - gr.offset
        if k < 1:
            continue
        rs = gr.sets[k]
        above += [(n, i) for i in range(len(rs)) if rs.compare_value(i, threshold) >= 0]
    top = gr.sets[100 - gr.offset]
    top.refine(len(top) - 1, Fraction(1, 10**7))
    largest = gr.to_orig(top.largest.lo)
    gap = abs(float(largest) + 0.125)
    ok = not above and gap < 1e-3
    verdict(
        11,
        ok,
        f"roots other than the common root 0 below -1/8 for n <= 100: {not above}; "
        f"largest at n=100 ~ {float(largest):.6f}, gap {gap:.2e} (< 1e-3)",
    )
    assert ok, above[:5]
