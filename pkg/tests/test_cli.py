from __future__ import annotations

import csv
import io
import json
import subprocess
import sys

import pytest

from ffdist import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_pi(capsys):
    code, out, err = run(capsys, "pi", "--q", "2", "--dmax", "5")
    assert code == 0 and err == ""
    assert out.splitlines() == ["d,pi_q", "1,2", "2,1", "3,2", "4,3", "5,6"]


def test_hq_at_one(capsys):
    code, out, _ = run(capsys, "hq", "--q", "7", "--x", "1", "--format", "json")
    assert code == 0
    rec = json.loads(out)[0]
    assert abs(rec["value"] - 1.0) <= 1e-10
    assert rec["oracle"] is None


def test_hq_oracle(capsys):
    code, out, _ = run(capsys, "hq", "--q", "2", "--x", "1.5", "--oracle", "--format", "json")
    rec = json.loads(out)[0]
    assert code == 0
    assert abs(rec["value"] - rec["oracle"]) <= 1e-9 + rec["oracle"] * rec["oracle_tail"] * 2


def test_non_prime_power(capsys):
    code, out, err = run(capsys, "dist", "--kind", "omega", "--q", "6", "--n", "3")
    assert code == 1 and out == ""
    assert "q must be a prime power" in err
    assert err.count("\n") == 1


def test_dist_exact_default(capsys):
    code, out, _ = run(capsys, "dist", "--kind", "omega", "--q", "2", "--n", "2")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0
    assert [(r["k"], r["probability"], r["probability_decimal"], r["mode"]) for r in rows] == [
        ("1", "1/4", "0.25", "exact"),
        ("2", "3/4", "0.75", "exact"),
    ]


def test_dist_float_beyond_cap(capsys):
    code, out, _ = run(capsys, "dist", "--kind", "omega", "--q", "3", "--n", "1000")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and rows[0]["mode"] == "float"
    assert abs(sum(float(r["probability"]) for r in rows) - 1) < 1e-10


def test_dist_cycles(capsys):
    code, out, _ = run(capsys, "dist", "--kind", "cycles", "--n", "3", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert [d["probability"] for d in data] == ["1/3", "1/2", "1/6"]
    assert data[0]["q"] is None


def test_resource_cap_exit_2(capsys):
    code, _, err = run(capsys, "dist", "--kind", "omega", "--q", "2", "--n", "500", "--mode", "exact")
    assert code == 2 and "capped" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["hq", "--q", "2", "--x", "2"],
        ["hq", "--q", "2", "--x", "1", "--tol", "0.1"],
        ["hq", "--q", "2", "--x", "1", "--tol", "0"],
        ["dist", "--kind", "omega", "--n", "3"],
        ["dist", "--kind", "omega", "--q", "2", "--n", "0"],
        ["dist", "--kind", "omega", "--q", "2", "--n", "3000", "--kcap", "5"],
        ["mainterm", "--n", "10", "--k", "11", "--q", "2", "--which", "hwang"],
        ["scaling", "--q", "2,x", "--n", "10"],
        ["compare", "--q", "4", "--n", "10", "--kmax", "11"],
        ["bogus"],
        [],
        ["pi", "--q", "2"],
    ],
)
def test_validation_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1
    assert err.startswith("ffdist: ") and err.count("\n") == 1


def test_mainterm(capsys):
    for which in ("hwang", "warlimont", "new"):
        code, out, _ = run(capsys, "mainterm", "--n", "1000", "--k", "8", "--q", "2", "--which", which)
        assert code == 0
        assert out.startswith("n,k,q,which,r,value\n1000,8,2," + which)


def test_tv_and_decompose(capsys):
    code, out, _ = run(capsys, "tv", "--q", "2", "--n", "2")
    assert code == 0 and out.splitlines()[0] == "n,q,d_tv,d_tv_decimal,scaled,mode"
    assert "1/4,0.25" in out
    code, out, _ = run(capsys, "tv", "--q", "3", "--n", "50", "--decompose", "--format", "json")
    rec = json.loads(out)[0]
    assert set(rec) == {"n", "q", "d_tv", "scaled", "s1", "s2", "s3", "mode"}


def test_scaling_threads_are_deterministic(capsys, monkeypatch):
    argv = ["scaling", "--q", "3,2", "--n", "500,100", "--mode", "float"]
    _, one, _ = run(capsys, *argv, "--threads", "1")
    monkeypatch.setenv("FFDIST_THREADS", "2")
    _, two, _ = run(capsys, *argv, "--threads", "1")
    assert one == two
    assert [line.split(",")[:2] for line in one.splitlines()[1:]] == [["100", "2"], ["500", "2"], ["100", "3"], ["500", "3"]]


def test_bad_threads_env(capsys, monkeypatch):
    monkeypatch.setenv("FFDIST_THREADS", "zero")
    code, _, err = run(capsys, "pi", "--q", "2", "--dmax", "2")
    assert code == 1 and "FFDIST_THREADS" in err


def test_compare(capsys):
    code, out, _ = run(capsys, "compare", "--q", "3", "--n", "100", "--kmax", "4")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4
    assert float(rows[0]["hq_r"]) == 1.0


def test_out_file(tmp_path, capsys):
    path = tmp_path / "pi.json"
    code, out, _ = run(capsys, "pi", "--q", "3", "--dmax", "3", "--format", "json", "--out", str(path))
    assert code == 0 and out == ""
    assert json.loads(path.read_text()) == [{"d": 1, "pi_q": 3}, {"d": 2, "pi_q": 3}, {"d": 3, "pi_q": 8}]


def test_unwritable_out(tmp_path, capsys):
    code, _, err = run(capsys, "pi", "--q", "2", "--dmax", "2", "--out", str(tmp_path / "no" / "x.csv"))
    assert code == 1 and "cannot write" in err


def test_help_mentions_natural_log(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["--help"])
    assert exc.value.code == 0
    assert "natural" in capsys.readouterr().out


def test_verify_fast(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "fast", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert all(d["passed"] for d in data)
    assert len(data) == 9


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "ffdist", "pi", "--q", "4", "--dmax", "2"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout.splitlines() == ["d,pi_q", "1,4", "2,6"]
