"""The command line interface: formats, exit codes, determinism."""

import json
import subprocess
import sys

import pytest

from mjlab.cli import parse_complex
from mjlab.core import EvalPoint
from mjlab.special import theta_ml_handle


def run_cli(*args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "mjlab.cli"] + list(args),
        input=stdin,
        capture_output=True,
        text=True,
        timeout=120,
    )


# ----------------------------------------------------------------------
# complex literals


@pytest.mark.parametrize(
    "text,want",
    [
        ("1+2i", 1 + 2j),
        ("-0.5i", -0.5j),
        ("3", 3 + 0j),
        ("0.25-1.5i", 0.25 - 1.5j),
        ("2i", 2j),
    ],
)
def test_parse_complex(text, want):
    assert parse_complex(text) == want


def test_parse_complex_rejects_garbage():
    import click

    with pytest.raises(click.UsageError):
        parse_complex("not-a-number")


# ----------------------------------------------------------------------
# eval


def test_eval_theta_matches_library():
    res = run_cli(
        "eval", "theta_ml", "--m", "1", "--l", "1",
        "--tau", "0.13+1.1i", "--z", "0.21+0.17i",
    )
    assert res.returncode == 0, res.stderr
    record = json.loads(res.stdout)
    assert record["function"] == "theta_ml"
    want = theta_ml_handle(2, 1).eval(EvalPoint(0.13, 1.1, 0.21, 0.17))
    got = complex(*record["value"])
    assert abs(got - want) < 1e-12 * max(1.0, abs(want))
    assert record["truncation_radius"] >= 1
    assert record["est_tail"] > 0


def test_eval_is_deterministic():
    args = ("eval", "mu_hat_ml", "--m", "1", "--l", "0",
            "--tau", "0.13+1.1i", "--z", "0.21+0.17i")
    a = run_cli(*args)
    b = run_cli(*args)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_eval_unknown_function_is_usage_error():
    res = run_cli("eval", "nonexistent")
    assert res.returncode == 1


def test_eval_at_pole_exits_2():
    res = run_cli("eval", "mu_hat_2", "--tau", "1i", "--z", "0.5+0.5i")
    assert res.returncode == 2
    assert "pole" in res.stderr.lower()


def test_eval_truncation_overflow_exits_3():
    res = run_cli("eval", "theta_ml", "--m", "1", "--tau", "0+0.02i",
                  "--radius", "3")
    assert res.returncode == 3


def test_eval_writes_to_file(tmp_path):
    out = tmp_path / "value.json"
    res = run_cli("eval", "E", "--w", "0.0", "--out", str(out))
    assert res.returncode == 0
    record = json.loads(out.read_text())
    assert abs(complex(*record["value"])) < 1e-14


# ----------------------------------------------------------------------
# verify


def test_verify_weil_suite_passes():
    res = run_cli("verify", "weil", "--two-m", "2")
    assert res.returncode == 0, res.stderr
    report = json.loads(res.stdout)
    assert report["passed"] is True
    assert all(c["max_residual"] < c["tol"] for c in report["checks"])


def test_verify_unknown_suite_is_usage_error():
    res = run_cli("verify", "no-such-suite")
    assert res.returncode == 1


def test_verify_failing_suite_exits_4():
    # the S-transformation rows of the completed component family are a
    # recorded faithful failure, so this suite must exit nonzero
    res = run_cli("verify", "mu-transform", "--two-m", "1")
    assert res.returncode == 4
    report = json.loads(res.stdout)
    assert report["passed"] is False
    failing = [c for c in report["checks"] if c["max_residual"] >= c["tol"]]
    assert failing and all("S" in c["identity"] for c in failing)


# ----------------------------------------------------------------------
# decompose


THETA_INPUT = """index 2m=2
0 0 1 0
1 2 1 0
1 -2 1 0
4 4 1 0
"""


def test_decompose_theta_input(tmp_path):
    res = run_cli("decompose", stdin=THETA_INPUT)
    assert res.returncode == 0, res.stderr
    h = json.loads(res.stdout)
    assert h["0"] == [[0, 1, 1.0, 0.0]]
    assert h["1"] == []


def test_decompose_violation_exits_4():
    bad = "index 2m=2\n0 0 1 0\n1 2 2 0\n"
    res = run_cli("decompose", stdin=bad)
    assert res.returncode == 4
    assert "decomposable" in res.stderr.lower()


def test_decompose_reads_file(tmp_path):
    src = tmp_path / "data.txt"
    src.write_text(THETA_INPUT)
    out = tmp_path / "h.json"
    res = run_cli("decompose", "--in", str(src), "--out", str(out))
    assert res.returncode == 0
    assert json.loads(out.read_text())["0"] == [[0, 1, 1.0, 0.0]]


# ----------------------------------------------------------------------
# grid


def test_grid_shape_and_header():
    res = run_cli("grid", "theta_ml", "--m", "1", "--l", "0",
                  "--tau", "0.1+1.2i", "--steps", "4", "5")
    assert res.returncode == 0, res.stderr
    lines = res.stdout.strip().splitlines()
    assert lines[0] == "x,y,u,v,re,im,pole"
    assert len(lines) == 1 + 4 * 5
    assert all(row.endswith(",0") for row in lines[1:])


def test_grid_flags_pole_rows():
    res = run_cli("grid", "mu_hat_2", "--tau", "1i", "--steps", "3", "3",
                  "--min", "0", "0", "--max", "1", "1")
    assert res.returncode == 0, res.stderr
    lines = res.stdout.strip().splitlines()[1:]
    pole_rows = [row for row in lines if row.split(",")[6] == "1"]
    assert pole_rows, lines
    for row in pole_rows:
        parts = row.split(",")
        assert parts[4] == "" and parts[5] == ""


def test_grid_rejects_bad_steps():
    res = run_cli("grid", "theta_ml", "--steps", "0", "5")
    assert res.returncode == 1
