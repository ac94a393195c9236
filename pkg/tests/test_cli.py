import csv
import io
import json
import subprocess
import sys

import pytest

from rootgeo.cli import (
    EXIT_CHECK,
    EXIT_GOLDEN,
    EXIT_INPUT,
    EXIT_OK,
    COMMANDS,
    RunConfig,
    UsageError,
    main,
    parse_rational,
    public,
    render,
)

CASE_II = ["-a", "1", "-b", "1", "-c", "-1/2"]
CASE_III = ["-a", "1", "-b", "1", "-c", "1"]


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text)


# --- parsing -----------------------------------------------------------------


@pytest.mark.parametrize("text, value", [("3", 3), ("-1/2", -0.5), ("+7/4", 1.75), ("10/5", 2)])
def test_rationals_parsed_exactly(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("text", ["0.5", "1e3", "1/0", "a", "1/-2", ""])
def test_non_rationals_refused(text):
    with pytest.raises(UsageError):
        parse_rational(text)


def test_decimal_parameter_exits_2(capsys):
    code, _ = run("analyze", "-a", "0.5", "-b", "1", "-c", "1")
    assert code == EXIT_INPUT
    assert "exact rational" in capsys.readouterr().err


@pytest.mark.parametrize(
    "argv",
    [
        ["analyze", "-a", "0", "-b", "1", "-c", "1"],
        ["analyze", "-a", "1", "-b", "-1", "-c", "1"],
        ["analyze", "-a", "1", "-b", "1", "-c", "1", "-t", "0"],
        ["analyze", "-a", "1", "-b", "2", "-c", "1", "-r", "-1/2"],
        ["analyze", "-a", "1", "-b", "1"],
        ["roots", *CASE_II, "-n", "0"],
        ["roots", *CASE_II, "--precision", "-1"],
    ],
)
def test_invalid_input_exits_2(argv):
    assert run(*argv)[0] == EXIT_INPUT


def test_invalid_input_json_error():
    code, payload = run_json("analyze", "-a", "1", "-b", "1", "-c", "1/0")
    assert code == EXIT_INPUT and payload["schema"] == 1 and "error" in payload


def test_argparse_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["signs", *CASE_II])  # --at missing
    assert info.value.code == 2


# --- analyze -----------------------------------------------------------------


def test_analyze_case_ii():
    code, p = run_json("analyze", *CASE_II)
    assert code == EXIT_OK
    assert p["landmarks"]["x_Delta"]["exact"] == "1/4"
    assert p["landmarks"]["n0"]["exact"] == "2"
    assert p["case"] == "II"


def test_analyze_general_spec():
    code, p = run_json("analyze", "-a", "1", "-b", "2/5", "-c", "0", "-t", "1", "-r", "-1")
    assert code == EXIT_OK
    assert p["landmarks"]["x_star"]["exact"] == "-5/8"
    assert p["landmarks"]["y_star"]["exact"] == "-3/5"


def test_analyze_partial_genus_spec():
    code, p = run_json("analyze", "-a", "2", "-b", "8", "-c", "0", "-t", "2", "-r", "0")
    assert code == EXIT_OK
    assert p["landmarks"]["x_Delta"]["exact"] == "-1/8"
    assert p["case"] is None and p["notes"]


def test_analyze_text_output():
    code, text = run("analyze", *CASE_III)
    assert code == EXIT_OK
    assert "x_Delta = -5/4" in text and "n0 = 2/7" in text and "case: III" in text


# --- roots -------------------------------------------------------------------


@pytest.mark.parametrize("argv, name", [(CASE_II, "table1"), (CASE_III, "table2")])
def test_golden_tables_pass(argv, name):
    code, text = run("roots", *argv, "-n", "8", "--golden", name)
    assert code == EXIT_OK
    assert f"golden {name}: match" in text


def test_golden_mismatch_exits_3():
    code, p = run_json("roots", *CASE_II, "-n", "8", "--golden", "table2")
    assert code == EXIT_GOLDEN
    assert p["golden"]["match"] is False and p["golden"]["mismatches"]


def test_single_row():
    code, p = run_json("roots", *CASE_II, "-n", "1")
    assert code == EXIT_OK
    assert [[c["text"] for c in r["roots"]] for r in p["rows"]] == [["0"]]


def test_roots_csv():
    code, text = run("roots", *CASE_III, "-n", "3", "--format", "csv")
    assert code == EXIT_OK
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["n", "index", "lo", "hi", "midpoint-4dp"]
    assert rows[1][0] == "1" and rows[1][4] == "0"
    assert [r[4] for r in rows if r[0] == "3"] == ["-2.6180", "-0.3819"]


def test_precision_from_environment(monkeypatch):
    monkeypatch.setenv("ROOTGEO_PRECISION", "1/1000")
    _, coarse = run_json("roots", *CASE_III, "-n", "4")
    monkeypatch.setenv("ROOTGEO_PRECISION", "1/1000000000000")
    _, fine = run_json("roots", *CASE_III, "-n", "4")

    def width(p):
        from fractions import Fraction

        c = p["rows"][3]["roots"][0]
        return Fraction(c["hi"]) - Fraction(c["lo"])

    assert width(fine) < width(coarse)
    assert width(fine) < 1e-12


def test_precision_flag_beats_environment(monkeypatch):
    monkeypatch.setenv("ROOTGEO_PRECISION", "bogus")
    assert run("roots", *CASE_III, "-n", "2", "--precision", "1/100")[0] == EXIT_OK
    assert run("roots", *CASE_III, "-n", "2")[0] == EXIT_INPUT


# --- verify ------------------------------------------------------------------


@pytest.mark.parametrize("argv", [CASE_II, CASE_III])
def test_verify_examples_pass(argv):
    code, p = run_json("verify", *argv, "-n", "60", "--slack", "1/1000", "--margin", "1")
    assert code == EXIT_OK and p["passed"]
    assert {r["theorem_id"] for r in p["reports"]} == {
        "real-rootedness-interlacing",
        "zero-set-bounds",
        "sign-inequalities",
        "interlacing-criterion",
        "limits",
    }


def test_verify_corrupted_recurrence_exits_4():
    code, p = run_json("verify", *CASE_II, "-n", "12", "--corrupt", "6")
    assert code == EXIT_CHECK and not p["passed"]
    failures = [f for r in p["reports"] for f in r["failures"]]
    assert failures and all("check" in f for f in failures)


def test_verify_reduces_c_zero():
    code, p = run_json("verify", "-a", "2", "-b", "8", "-c", "0", "-t", "2", "-n", "20")
    assert code == EXIT_OK and p["notes"]


# --- conjecture, signs, closed-form ------------------------------------------


def test_conjecture_small():
    code, p = run_json("conjecture", "-n", "2")
    assert code == EXIT_OK
    assert p["per_n"][0]["degree"] == 1
    assert p["per_n"][1] == {"n": 2, "degree": 3, "real_roots": 3, "squarefree": True}


def test_conjecture_ten():
    code, text = run("conjecture", "-n", "10")
    assert code == EXIT_OK and "all real-rooted up to n=10: True" in text


def test_sign_trace_at_minus_one():
    code, p = run_json("signs", *CASE_II, "--at", "-1", "-n", "6")
    assert code == EXIT_OK
    assert [r["value"] for r in p["rows"][1:]] == ["-1", "-5/2", "-1", "11/4", "17/4", "1/8"]
    assert [r["side"] for r in p["rows"][1:]] == ["left"] * 3 + ["right"] * 3
    assert p["disagreements"] == 0


def test_sign_trace_at_x_b():
    code, p = run_json("signs", *CASE_II, "--at", "x_B", "-n", "8")
    assert code == EXIT_OK and p["x0"] == "1/2"
    assert {r["sign"] for r in p["rows"][1:]} == {1}


def test_sign_trace_at_zero():
    code, p = run_json("signs", *CASE_III, "--at", "0", "-n", "5")
    assert code == EXIT_OK
    assert p["rows"][1]["value"] == "0"


def test_closed_form_fibonacci():
    code, p = run_json("closed-form", "--A", "1", "--B", "1", "--W1", "1", "-n", "10")
    assert code == EXIT_OK and p["mismatches"] == 0
    assert p["rows"][10]["closed_form"] == "89"


def test_closed_form_at_point():
    code, p = run_json("closed-form", *CASE_II, "--at", "-1", "-n", "6")
    assert code == EXIT_OK
    assert p["rows"][2]["iterate"] == "-5/2" and "cos_part" in p["rows"][2]


# --- JSON, config and batch --------------------------------------------------


@pytest.mark.parametrize(
    "command, params",
    [
        ("analyze", {"a": "1", "b": "1", "c": "-1/2"}),
        ("roots", {"a": "1", "b": "1", "c": "1", "n": "5"}),
        ("verify", {"a": "1", "b": "1", "c": "1", "n": "10"}),
        ("conjecture", {"n": "4"}),
        ("signs", {"a": "1", "b": "1", "c": "-1/2", "at": "-1", "n": "6"}),
    ],
)
def test_json_round_trip(command, params):
    cfg = RunConfig(command, {"t": "1", "r": "0", "i_max": "2", **params})
    payload, _ = COMMANDS[command](cfg)
    text = render(payload, "json")
    assert json.loads(text) == public(payload)
    assert json.loads(text)["schema"] == 1


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# example\na = 1\nb = 1\nc = -1/2\nn = 3\n")
    code, p = run_json("roots", "--config", str(cfg))
    assert code == EXIT_OK and len(p["rows"]) == 3
    code, p = run_json("roots", "--config", str(cfg), "-c", "1", "-n", "4")
    assert code == EXIT_OK and p["spec"]["c"] == "1" and len(p["rows"]) == 4


def test_bad_config_line(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("a 1\n")
    assert run("analyze", "--config", str(cfg))[0] == EXIT_INPUT


@pytest.mark.parametrize("workers", ["1", "3"])
def test_batch_keeps_input_order(tmp_path, workers):
    batch = tmp_path / "runs.txt"
    batch.write_text("a=1 b=1 c=-1/2\n# skipped\n\na=1 b=1 c=1\na=2 b=1 c=-3\na=0 b=1 c=1\n")
    code, p = run_json("analyze", "--batch", str(batch), "--workers", workers)
    assert p["command"] == "batch" and p["of"] == "analyze"
    cases = [r.get("case") for r in p["results"]]
    assert cases == ["II", "III", "I", None]
    assert "error" in p["results"][3]
    assert code == EXIT_INPUT


def test_batch_verify_all_pass(tmp_path):
    batch = tmp_path / "runs.txt"
    batch.write_text("c=-1/2\nc=1\nc=-1\n")
    code, p = run_json("verify", "-a", "1", "-b", "1", "-n", "12", "--batch", str(batch), "--workers", "2")
    assert code == EXIT_OK and all(r["passed"] for r in p["results"])


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "rootgeo.cli", "analyze", "-a", "1", "-b", "1", "-c", "1", "--format", "json"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["case"] == "III"
