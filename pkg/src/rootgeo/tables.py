"""Root tables printed to four decimals, and the reference tables they are
compared against."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .geometry import DEFAULT_PRECISION, isolate_general
from .sequences import RecurrenceSpec

DECIMALS = 4
_SCALE = 10**DECIMALS

# Approximate zeros for n = 1..8, smallest first, as printed.
GOLDEN = {
    "table1": {
        "params": {"a": "1", "b": "1", "c": "-1/2"},
        "rows": [
            ["0"],
            ["0.2500"],
            ["-1.7807", "0.2807"],
            ["-0.2886", "0.2886"],
            ["-4.2912", "0", "0.2912"],
            ["-1.0218", "0.1046", "0.2922"],
            ["-7.5833", "-0.3639", "0.1547", "0.2926"],
            ["-1.9561", "-0.1194", "0.1827", "0.2927"],
        ],
    },
    "table2": {
        "params": {"a": "1", "b": "1", "c": "1"},
        "rows": [
            ["0"],
            ["-0.5000"],
            ["-2.6180", "-0.3819"],
            ["-1.5773", "-0.4226"],
            ["-5.1819", "-1.4064", "-0.4116"],
            ["-2.2405", "-1.3444", "-0.4149"],
            ["-8.5525", "-1.7194", "-1.3140", "-0.4139"],
            ["-3.1548", "-1.5342", "-1.2966", "-0.4142"],
        ],
    },
}


def golden_spec(name):
    p = GOLDEN[name]["params"]
    return RecurrenceSpec(Fraction(p["a"]), Fraction(p["b"]), Fraction(p["c"]))


def truncate(x):
    """x truncated toward zero to DECIMALS places, as an exact rational."""
    x = Fraction(x)
    k = math.floor(x * _SCALE) if x >= 0 else math.ceil(x * _SCALE)
    return Fraction(k, _SCALE)


def format_value(x):
    """Fixed four-decimal text of the truncation of x; exact zero prints "0"."""
    x = Fraction(x)
    if x == 0:
        return "0"
    t = truncate(x)
    k = abs(t.numerator * (_SCALE // t.denominator))
    sign = "-" if x < 0 else ""
    return f"{sign}{k // _SCALE}.{k % _SCALE:0{DECIMALS}d}"


@dataclass
class RootCell:
    n: int
    index: int  # 1-based, smallest first
    lo: Fraction
    hi: Fraction
    exact: bool
    text: str

    @property
    def mid(self):
        return (self.lo + self.hi) / 2


def _settle(rs, i, to_orig):
    """Narrow root i of rs until its image under to_orig has a stable truncation.

    Returns (lo, hi, exact, text) in the original coordinate.
    """
    back = to_orig.inverse()
    while True:
        r = rs[i]
        if r.is_exact:
            v = to_orig(r.value)
            return v, v, True, format_value(v)
        lo, hi = sorted((to_orig(r.lo), to_orig(r.hi)))
        g = Fraction(math.floor(hi * _SCALE), _SCALE)
        if g == hi:
            g -= Fraction(1, _SCALE)
        if g <= lo:
            return lo, hi, False, format_value((lo + hi) / 2)
        rs.split_at(i, back(g))


def root_table(spec, n_max, precision=DEFAULT_PRECISION):
    """Rows [RootCell, ...] for n = 1..n_max, in the spec's own coordinate."""
    gr = isolate_general(spec, n_max, precision)
    rows = []
    for n in range(1, n_max + 1):
        cells = []
        if gr.extra_zero:
            z = gr.to_orig_zero
            cells.append((z, z, True, format_value(z)))
        k = n - gr.offset
        if k >= 1:
            rs = gr.sets[k]
            cells.extend(_settle(rs, i, gr.to_orig) for i in range(len(rs)))
        cells.sort(key=lambda c: c[0])
        rows.append([RootCell(n, j + 1, *c) for j, c in enumerate(cells)])
    return rows


def compare_golden(rows, name):
    """List of (n, index, expected, got) mismatches; empty when identical."""
    want = GOLDEN[name]["rows"]
    bad = []
    if len(rows) < len(want):
        bad.append((len(rows), None, f"{len(want)} rows", f"{len(rows)} rows"))
    for n, (exp, got) in enumerate(zip(want, rows), start=1):
        texts = [c.text for c in got]
        if len(texts) != len(exp):
            bad.append((n, None, exp, texts))
            continue
        for j, (e, g) in enumerate(zip(exp, texts), start=1):
            if e != g:
                bad.append((n, j, e, g))
    return bad


def render_text(rows):
    width = max((len(r) for r in rows), default=0)
    lines = []
    for row in rows:
        pad = [""] * (width - len(row))
        cells = pad + [c.text for c in row]
        lines.append(f"n={row[0].n if row else '?':<3} " + " ".join(f"{c:>9}" for c in cells))
    return "\n".join(lines)
