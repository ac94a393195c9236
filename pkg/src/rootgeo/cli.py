"""Command-line front end: ``rootgeo <command> [options]``.

Exit codes: 0 success, 2 bad input, 3 golden-table mismatch, 4 failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidSpec, RootGeoError
from .geometry import (
    DEFAULT_PRECISION,
    angle_side_test,
    compute_landmarks,
    delta_at,
)
from .harness import run_all, verify_conjecture
from .sequences import (
    ConstantRecurrenceSpec,
    RecurrenceSpec,
    closed_form_constant,
    constant_spec_at,
    eval_sequence_at,
    iterate_constant,
    normalize,
    reduce_c_zero_spec,
    trig_form_constant,
)
from .tables import GOLDEN, compare_golden, root_table

SCHEMA = 1
EXIT_OK, EXIT_INPUT, EXIT_GOLDEN, EXIT_CHECK = 0, 2, 3, 4
PRECISION_ENV = "ROOTGEO_PRECISION"

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


class UsageError(Exception):
    """Bad user input; reported with exit code 2."""


def parse_rational(text):
    """Exact rational from "p/q" or an integer; decimals are refused."""
    text = str(text).strip()
    if not _RATIONAL.match(text):
        raise UsageError(f"not an exact rational (use p/q or an integer): {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError:
        raise UsageError(f"zero denominator in {text!r}") from None


def parse_precision(text):
    try:
        p = Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad precision {text!r}") from None
    if p <= 0:
        raise UsageError("precision must be positive")
    return p


def read_config(path):
    """Flat ``key = value`` file; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{lineno}: expected key = value")
        out[key.strip().replace("-", "_")] = value.strip()
    return out


# ---------------------------------------------------------------------------
# run configuration


DEFAULTS = {
    "a": None,
    "b": None,
    "c": None,
    "t": "1",
    "r": "0",
    "n": None,
    "i_max": "2",
    "format": "text",
    "precision": None,
}


@dataclass
class RunConfig:
    command: str
    params: dict  # raw strings after merging defaults, config file and flags

    def get(self, key):
        return self.params.get(key)

    def spec(self):
        missing = [k for k in "abc" if self.params.get(k) is None]
        if missing:
            raise UsageError(f"missing parameter(s): {', '.join(missing)}")
        vals = {k: parse_rational(self.params[k]) for k in "abctr"}
        try:
            return RecurrenceSpec(**vals)
        except InvalidSpec as exc:
            raise UsageError(str(exc)) from None

    def int_value(self, key, default, minimum=1):
        raw = self.params.get(key)
        if raw is None:
            return default
        try:
            v = int(str(raw))
        except ValueError:
            raise UsageError(f"{key} must be an integer, got {raw!r}") from None
        if v < minimum:
            raise UsageError(f"{key} must be at least {minimum}")
        return v

    def precision(self):
        raw = self.params.get("precision") or os.environ.get(PRECISION_ENV)
        return parse_precision(raw) if raw else DEFAULT_PRECISION


def build_config(command, ns, extra=None):
    params = dict(DEFAULTS)
    if getattr(ns, "config", None):
        params.update(read_config(ns.config))
    if extra:
        params.update(extra)
    for key in list(DEFAULTS) + ["at", "golden", "slack", "margin", "corrupt", "A", "B", "W1"]:
        v = getattr(ns, key, None)
        if v is not None:
            params[key] = v
    return RunConfig(command, params)


# ---------------------------------------------------------------------------
# commands; each returns (payload, exit_code)


def _exact(v):
    return None if v is None else str(v)


def _decimal(v):
    if v is None:
        return None
    return f"{float(v):.10g}"


def _spec_dict(spec):
    return {k: str(getattr(spec, k)) for k in "abctr"}


def cmd_analyze(cfg):
    spec = cfg.spec()
    lm = compute_landmarks(spec)
    items = [("x_B", lm.x_B), ("x_Delta", lm.x_Delta), ("x_g", lm.x_g), ("n0", lm.n0)]
    if not spec.normalized:
        items += [("x_star", lm.x_star), ("r_star", lm.r_star), ("y_star", lm.y_star)]
    norm, _ = normalize(spec)
    payload = {
        "schema": SCHEMA,
        "command": "analyze",
        "spec": _spec_dict(spec),
        "normalized": {"a": str(norm.a), "b": str(norm.b), "c": str(norm.c)},
        "landmarks": {
            name: {"exact": _exact(v), "decimal": _decimal(v)} for name, v in items
        },
        "case": lm.case_tag,
        "flags": lm.flags,
    }
    if lm.n0 is None:
        payload["landmarks"]["n0"] = {"exact": "inf", "decimal": "inf"}
    if lm.x_g is None:
        payload["notes"] = ["x_g is not real"]
    if norm.c == 0:
        payload["notes"] = [
            f"normalized c = 0: every W_n with n >= 1 vanishes at x = {spec.r}; "
            "the other roots are those of the reduced sequence W_(n+2)/W_2"
        ]
    return payload, EXIT_OK


def cmd_roots(cfg):
    spec = cfg.spec()
    n_max = cfg.int_value("n", 8)
    rows = root_table(spec, n_max, cfg.precision())
    payload = {
        "schema": SCHEMA,
        "command": "roots",
        "spec": _spec_dict(spec),
        "rows": [
            {
                "n": row[0].n if row else None,
                "roots": [
                    {"index": c.index, "lo": str(c.lo), "hi": str(c.hi), "exact": c.exact, "text": c.text}
                    for c in row
                ],
            }
            for row in rows
        ],
    }
    code = EXIT_OK
    golden = cfg.get("golden")
    if golden:
        if golden not in GOLDEN:
            raise UsageError(f"unknown golden table {golden!r}")
        bad = compare_golden(rows, golden)
        payload["golden"] = {
            "name": golden,
            "match": not bad,
            "mismatches": [list(map(_exact, m)) for m in bad],
        }
        if bad:
            code = EXIT_GOLDEN
    lm = compute_landmarks(spec)
    payload["footer"] = {"x_B": str(lm.x_B), "x_Delta": str(lm.x_Delta), "x_g": _exact(lm.x_g)}
    return payload, code


def cmd_verify(cfg):
    spec = cfg.spec()
    n_max = cfg.int_value("n", 40, minimum=3)
    i_max = cfg.int_value("i_max", 2, minimum=0)
    slack = parse_precision(cfg.get("slack")) if cfg.get("slack") else None
    margin = parse_precision(cfg.get("margin")) if cfg.get("margin") else None
    corrupt = cfg.int_value("corrupt", None, minimum=3)
    norm, _ = normalize(spec)
    notes = []
    target = spec
    if norm.c == 0:
        target = reduce_c_zero_spec(norm)
        notes.append(f"normalized c = 0: checks run on the reduced sequence ({target})")
    reports = run_all(target, n_max, i_max, slack, margin, corrupt_at=corrupt)
    ok = all(r.ok for r in reports)
    payload = {
        "schema": SCHEMA,
        "command": "verify",
        "spec": _spec_dict(spec),
        "n_max": n_max,
        "passed": ok,
        "reports": [r.to_dict() for r in reports],
        "notes": notes,
    }
    return payload, EXIT_OK if ok else EXIT_CHECK


def cmd_conjecture(cfg):
    n_max = cfg.int_value("n", 40)
    start = time.perf_counter()
    verdict = verify_conjecture(n_max)
    elapsed = time.perf_counter() - start
    payload = {
        "schema": SCHEMA,
        "command": "conjecture",
        "n_verified": verdict.n_verified,
        "all_real": verdict.all_real,
        "per_n": [
            {"n": n, "degree": d, "real_roots": k, "squarefree": sf} for n, d, k, sf in verdict.per_n
        ],
        "seconds": round(elapsed, 3),
    }
    return payload, EXIT_OK if verdict.all_real else EXIT_CHECK


_NAMED_POINTS = {"x_B", "x_Delta", "x_D"}


def _resolve_point(spec, text):
    if text in _NAMED_POINTS:
        lm = compute_landmarks(spec)
        return lm.x_B if text == "x_B" else lm.x_Delta
    return parse_rational(text)


def cmd_signs(cfg):
    spec = cfg.spec()
    n_max = cfg.int_value("n", 10)
    if cfg.get("at") is None:
        raise UsageError("signs needs --at x0")
    x0 = _resolve_point(spec, cfg.get("at"))
    values = eval_sequence_at(spec, x0, n_max)
    norm, m = normalize(spec)
    delta = delta_at(norm, m.inverse()(x0))
    rows, disagreements = [], 0
    for n in range(0, n_max + 1):
        v = values[n]
        row = {"n": n, "value": str(v), "sign": (v > 0) - (v < 0)}
        if delta < 0 and n >= 1:
            side = angle_side_test(spec, x0, n)
            agree = {"right": 1, "left": -1, "on": 0}[side] == row["sign"]
            row.update(side=side, agrees=agree)
            disagreements += not agree
        rows.append(row)
    payload = {
        "schema": SCHEMA,
        "command": "signs",
        "spec": _spec_dict(spec),
        "x0": str(x0),
        "delta": str(delta),
        "rows": rows,
        "disagreements": disagreements,
    }
    return payload, EXIT_OK if not disagreements else EXIT_CHECK


def cmd_closed_form(cfg):
    n_max = cfg.int_value("n", 10, minimum=0)
    if cfg.get("A") is not None:
        try:
            cs = ConstantRecurrenceSpec(
                parse_rational(cfg.get("A")),
                parse_rational(cfg.get("B") or "0"),
                parse_rational(cfg.get("W1") or "1"),
            )
        except InvalidSpec as exc:
            raise UsageError(str(exc)) from None
    else:
        if cfg.get("at") is None:
            raise UsageError("closed-form needs --A/--B/--W1 or a spec with --at x0")
        spec = cfg.spec()
        cs = constant_spec_at(spec, _resolve_point(spec, cfg.get("at")))
    direct = iterate_constant(cs, n_max)
    rows, mismatches = [], 0
    for n in range(n_max + 1):
        closed = closed_form_constant(cs, n)
        row = {"n": n, "iterate": str(direct[n]), "closed_form": str(closed)}
        ok = closed == direct[n]
        if cs.delta < 0:
            u, v = trig_form_constant(cs, n)
            row.update(cos_part=str(u), sin_part=str(v))
            ok = ok and u + v == direct[n]
        row["match"] = ok
        mismatches += not ok
        rows.append(row)
    payload = {
        "schema": SCHEMA,
        "command": "closed-form",
        "A": str(cs.A),
        "B": str(cs.B),
        "W1": str(cs.W1),
        "delta": str(cs.delta),
        "rows": rows,
        "mismatches": mismatches,
    }
    return payload, EXIT_OK if not mismatches else EXIT_CHECK


COMMANDS = {
    "analyze": cmd_analyze,
    "roots": cmd_roots,
    "verify": cmd_verify,
    "conjecture": cmd_conjecture,
    "signs": cmd_signs,
    "closed-form": cmd_closed_form,
}


# ---------------------------------------------------------------------------
# rendering


def public(payload):
    """Payload without in-memory helpers (keys starting with '_')."""
    return {k: v for k, v in payload.items() if not k.startswith("_")}


def _csv(rows, header):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue().rstrip("\n")


def render(payload, fmt):
    if fmt == "json":
        return json.dumps(public(payload), indent=2)
    cmd = payload.get("command")
    if cmd == "batch":
        return "\n\n".join(render(p, fmt) for p in payload["results"])
    if fmt == "csv":
        return _render_csv(payload)
    return _render_text(payload)


def _render_csv(p):
    cmd = p["command"]
    if "error" in p:
        return _csv([[cmd, p["error"]]], ["command", "error"])
    if cmd == "roots":
        rows = []
        for row in p["rows"]:
            for c in row["roots"]:
                rows.append([row["n"], c["index"], c["lo"], c["hi"], c["text"]])
        return _csv(rows, ["n", "index", "lo", "hi", "midpoint-4dp"])
    if cmd == "analyze":
        return _csv(
            [[k, v["exact"], v["decimal"]] for k, v in p["landmarks"].items()] + [["case", p["case"], ""]],
            ["name", "exact", "decimal"],
        )
    if cmd == "verify":
        return _csv(
            [[r["theorem_id"], r["checks_passed"], r["checks_failed"]] for r in p["reports"]],
            ["theorem", "passed", "failed"],
        )
    if cmd == "conjecture":
        return _csv(
            [[r["n"], r["degree"], r["real_roots"], r["squarefree"]] for r in p["per_n"]],
            ["n", "degree", "real_roots", "squarefree"],
        )
    if cmd == "signs":
        return _csv(
            [[r["n"], r["value"], r.get("side", "")] for r in p["rows"]], ["n", "value", "side"]
        )
    if cmd == "closed-form":
        return _csv(
            [[r["n"], r["iterate"], r["closed_form"], r["match"]] for r in p["rows"]],
            ["n", "iterate", "closed_form", "match"],
        )
    return json.dumps(public(p))


def _render_text(p):
    cmd = p["command"]
    lines = []
    if "error" in p:
        return f"error ({cmd}, {p.get('params')}): {p['error']}"
    if "spec" in p:
        lines.append("spec: " + ", ".join(f"{k}={v}" for k, v in p["spec"].items()))
    if cmd == "analyze":
        n = p["normalized"]
        lines.append(f"normalized: a={n['a']}, b={n['b']}, c={n['c']}")
        for name, v in p["landmarks"].items():
            lines.append(f"{name:>8} = {v['exact']}  (~ {v['decimal']})")
        lines.append(f"case: {p['case'] or 'none (c = 0)'}")
        lines.extend(p.get("notes", []))
    elif cmd == "roots":
        width = max((len(r["roots"]) for r in p["rows"]), default=0)
        for r in p["rows"]:
            cells = [""] * (width - len(r["roots"])) + [c["text"] for c in r["roots"]]
            lines.append(f"n={r['n']:<3} " + " ".join(f"{c:>9}" for c in cells))
        f = p["footer"]
        lines.append(f"x_B = {f['x_B']}   x_Delta = {f['x_Delta']}   x_g = {f['x_g']}")
        if "golden" in p:
            g = p["golden"]
            lines.append(f"golden {g['name']}: {'match' if g['match'] else 'MISMATCH'}")
            for m in g["mismatches"]:
                lines.append(f"  n={m[0]} index={m[1]} expected {m[2]} got {m[3]}")
    elif cmd == "verify":
        for r in p["reports"]:
            status = "ok" if r["checks_failed"] == 0 else "FAIL"
            lines.append(f"{r['theorem_id']:<30} {status:<4} passed={r['checks_passed']} failed={r['checks_failed']}")
            for w in r["failures"][:5]:
                lines.append(f"    witness: {w}")
        lines.extend(p["notes"])
        lines.append("all checks passed" if p["passed"] else "verification FAILED")
    elif cmd == "conjecture":
        for r in p["per_n"]:
            flag = "" if r["squarefree"] else "  (not squarefree)"
            lines.append(f"n={r['n']:<4} degree={r['degree']:<4} real roots={r['real_roots']}{flag}")
        lines.append(f"all real-rooted up to n={p['n_verified']}: {p['all_real']}  ({p['seconds']} s)")
    elif cmd == "signs":
        lines.append(f"x0 = {p['x0']}, Delta(x0) = {p['delta']}")
        for r in p["rows"]:
            extra = ""
            if "side" in r:
                extra = f"  {r['side']}" + ("" if r["agrees"] else "  DISAGREES")
            lines.append(f"n={r['n']:<4} W_n(x0) = {r['value']}{extra}")
    elif cmd == "closed-form":
        lines.append(f"A={p['A']}, B={p['B']}, W1={p['W1']}, delta={p['delta']}")
        for r in p["rows"]:
            trig = f"  cos-part={r['cos_part']} sin-part={r['sin_part']}" if "cos_part" in r else ""
            lines.append(f"n={r['n']:<4} {r['iterate']}{'' if r['match'] else '  MISMATCH'}{trig}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# batch


def _run_one(command, params):
    cfg = RunConfig(command, params)
    try:
        payload, code = COMMANDS[command](cfg)
    except (UsageError, RootGeoError) as exc:
        return {"schema": SCHEMA, "command": command, "error": str(exc), "params": params}, EXIT_INPUT
    return public(payload), code


def read_batch(path):
    """One run per line: whitespace-separated key=value tokens."""
    runs = []
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read batch file {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        entry = {}
        for tok in line.split():
            key, sep, value = tok.partition("=")
            if not sep:
                raise UsageError(f"{path}:{lineno}: expected key=value, got {tok!r}")
            entry[key.replace("-", "_")] = value
        runs.append(entry)
    return runs


def run_batch(command, base, entries, workers):
    jobs = [(command, {**base.params, **e}) for e in entries]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_one, *zip(*jobs)))
    else:
        results = [_run_one(c, p) for c, p in jobs]
    payload = {
        "schema": SCHEMA,
        "command": "batch",
        "of": command,
        "results": [r for r, _ in results],
    }
    return payload, max((code for _, code in results), default=EXIT_OK)


# ---------------------------------------------------------------------------
# argument parsing


def _add_spec_args(p, with_n=True):
    g = p.add_argument_group("recurrence parameters (exact rationals p/q)")
    g.add_argument("-a", help="constant coefficient a > 0")
    g.add_argument("-b", help="slope b > 0 of the linear coefficient")
    g.add_argument("-c", help="constant term c of the linear coefficient")
    g.add_argument("-t", help="W_1 = t(x - r); default 1")
    g.add_argument("-r", help="W_1 = t(x - r); default 0")
    if with_n:
        p.add_argument("-n", help="largest index n")


def _add_common(p):
    p.add_argument("--format", choices=["json", "csv", "text"], help="output format (default text)")
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--precision", help=f"bracket width (also ${PRECISION_ENV})")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rootgeo",
        description="Exact root geometry of recursive polynomial sequences W_n = a W_{n-1} + (bx+c) W_{n-2}.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="landmarks and case classification")
    _add_spec_args(p, with_n=False)
    _add_common(p)
    p.add_argument("--batch", help="file with one key=value run per line")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("roots", help="table of isolated roots, four decimals")
    _add_spec_args(p)
    _add_common(p)
    p.add_argument("--golden", choices=sorted(GOLDEN), help="compare with a reference table")
    p.add_argument("--batch")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="run every theorem check for a spec")
    _add_spec_args(p)
    _add_common(p)
    p.add_argument("--i-max", dest="i_max", help="largest offset / index for limit checks")
    p.add_argument("--slack", help="required distance of the largest roots to their limit")
    p.add_argument("--margin", help="required drop of xi_{n,i} between n=20 and n")
    p.add_argument("--corrupt", help=argparse.SUPPRESS)  # negative-control hook
    p.add_argument("--batch")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("conjecture", help="real-rootedness of the degree-3 recursion")
    p.add_argument("-n", help="largest index (default 40)")
    _add_common(p)

    p = sub.add_parser("signs", help="sign trace of W_n(x0)")
    _add_spec_args(p)
    _add_common(p)
    p.add_argument("--at", required=True, help="x0 as p/q, or x_B / x_Delta")

    p = sub.add_parser("closed-form", help="constant recursion: iteration vs closed form")
    p.add_argument("--A", dest="A")
    p.add_argument("--B", dest="B")
    p.add_argument("--W1", dest="W1")
    _add_spec_args(p)
    p.add_argument("--at", help="fix x = x0 in a (0,1) spec instead of --A/--B/--W1")
    _add_common(p)
    return parser


_NEGATIVE_VALUE = re.compile(r"^-\d+(/\d+)?$")


def _attach_negative_values(argv):
    """Turn ``-c -1/2`` into ``-c-1/2`` (``--at -1`` into ``--at=-1``).

    argparse only recognises plain negative integers and decimals as values,
    not negative fractions.
    """
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if nxt is not None and tok.startswith("-") and not _NEGATIVE_VALUE.match(tok) and _NEGATIVE_VALUE.match(nxt):
            out.append(f"{tok}={nxt}" if tok.startswith("--") else tok + nxt)
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None, out=None):
    out = out or sys.stdout
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    ns = parser.parse_args(_attach_negative_values(argv))
    fmt = "text"
    try:
        cfg = build_config(ns.command, ns)
        fmt = cfg.get("format") or "text"
        if fmt not in ("json", "csv", "text"):
            raise UsageError(f"unknown format {fmt!r}")
        if cfg.get("precision"):
            parse_precision(cfg.get("precision"))
        if getattr(ns, "batch", None):
            payload, code = run_batch(ns.command, cfg, read_batch(ns.batch), max(ns.workers, 1))
        else:
            payload, code = COMMANDS[ns.command](cfg)
    except (UsageError, RootGeoError) as exc:
        if fmt == "json":
            print(json.dumps({"schema": SCHEMA, "error": str(exc)}), file=out)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    print(render(payload, fmt), file=out)
    return code


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
