"""Shared generators for random sequence parameters."""

import random
from fractions import Fraction

from rootgeo.sequences import RecurrenceSpec

BOUNDARY_MARGIN = Fraction(1, 10**6)


def small_rational(rng, lo=1, hi=20, signed=False):
    p = rng.randint(lo, hi)
    if signed and rng.random() < 0.5:
        p = -p
    return Fraction(p, rng.randint(1, hi))


def case_of(a, b, c):
    if c == 0:
        return None
    if c <= -(a * a + 2 * a * b) / 4:
        return "I"
    return "II" if c < 0 else "III"


def random_spec(rng, case, margin=BOUNDARY_MARGIN):
    """Normalized spec of the given case; numerators and denominators <= 20.

    Values within ``margin`` of a case boundary (c = 0 or
    c = -(a^2 + 2ab)/4) are rejected.
    """
    while True:
        a, b = small_rational(rng), small_rational(rng)
        c = small_rational(rng, signed=True)
        if case_of(a, b, c) != case:
            continue
        boundary = -(a * a + 2 * a * b) / 4
        if abs(c) < margin or abs(c - boundary) < margin:
            continue
        return RecurrenceSpec(a, b, c)


def random_specs(seed, case, count):
    rng = random.Random(seed)
    return [random_spec(rng, case) for _ in range(count)]
