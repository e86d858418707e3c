import json

import pytest

from sumprodlab.cli import main, parse_seeds, parse_sizes


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("SUMPRODLAB_BUDGET_MS", raising=False)
    return tmp_path


def test_parse_helpers():
    assert parse_seeds("1..4") == [1, 2, 3, 4]
    assert parse_seeds("3,1") == [3, 1]
    assert parse_sizes("8,16") == [8, 16]


def test_compute_examples(workdir, capsys):
    (workdir / "A.txt").write_text("1\n2\n3\n")
    assert run(capsys, "compute", "--set", "A.txt", "--quantity", "mult-energy")[:2] == (0, "15\n")
    assert run(capsys, "compute", "--family", "interval:3", "--quantity", "pinned-product", "--pin", "1")[:2] == (0, "7\n")
    assert run(capsys, "compute", "--family", "geometric:2:1", "--quantity", "add-energy")[:2] == (0, "1\n")


def test_compute_json_and_multiple(workdir, capsys):
    code, out, _ = run(capsys, "compute", "--family", "interval:3", "--quantity", "sumset", "--quantity", "energy-moment",
                       "--k", "3/2", "--json")
    assert code == 0
    d = json.loads(out)
    assert d["results"]["sumset"] == ["2", "3", "4", "5", "6"]
    assert d["results"]["energy-moment"].startswith("12.8530066721")


def test_compute_errors(workdir, capsys):
    assert run(capsys, "compute", "--family", "interval:3", "--quantity", "bogus")[0] == 2
    assert run(capsys, "compute", "--quantity", "size")[0] == 2
    assert run(capsys, "compute", "--family", "interval:3", "--set", "x", "--quantity", "size")[0] == 2
    assert run(capsys, "compute", "--family", "nope:3", "--quantity", "size")[0] == 2
    (workdir / "Z.txt").write_text("0\n1\n")
    code, _, err = run(capsys, "compute", "--set", "Z.txt", "--quantity", "mult-energy")
    assert code == 3 and "precondition" in err
    code, _, err = run(capsys, "compute", "--family", "interval:3", "--quantity", "pinned-product")
    assert code == 2


def test_budget_env(workdir, capsys, monkeypatch):
    monkeypatch.setenv("SUMPRODLAB_BUDGET_MS", "0.000001")
    code, _, err = run(capsys, "compute", "--family", "interval:64", "--quantity", "five-var")
    assert code == 3 and "budget" in err


def test_verify_examples(workdir, capsys):
    code, _, _ = run(capsys, "verify", "--specs", "exact.*", "--family", "random:1000:16", "--seeds", "1..20", "--quiet")
    assert code == 0
    lines = (workdir / "sumprodlab-records.jsonl").read_text().splitlines()
    assert len(lines) == 100
    code, out, _ = run(capsys, "verify", "--specs", "T1", "--family", "interval", "--sizes", "8,16,32,64")
    assert code == 0
    assert out.splitlines()[0] == "spec,family,n,seed,lhs,rhs,ratio,pass,note"
    assert len(out.splitlines()) == 5
    code, _, _ = run(capsys, "verify", "--specs", "none-matching")
    assert code == 0
    assert (workdir / "sumprodlab-records.jsonl").read_text() == ""


def test_verify_bytes_independent_of_workers(workdir, capsys):
    args = ["verify", "--specs", "exact.*,ratio.*", "--family", "random:300", "--sizes", "6,9", "--seeds", "1,2", "--quiet"]
    run(capsys, *args, "--workers", "1", "--jsonl", "a.jsonl")
    run(capsys, *args, "--workers", "2", "--jsonl", "b.jsonl")
    assert (workdir / "a.jsonl").read_bytes() == (workdir / "b.jsonl").read_bytes()


def test_verify_usage_errors(workdir, capsys):
    assert run(capsys, "verify", "--family", "interval:4", "--seeds", "x")[0] == 2
    assert run(capsys, "verify", "--family", "bad:4")[0] == 2


def test_scan(workdir, capsys):
    code, out, _ = run(capsys, "scan", "--family", "interval", "--quantity", "five-var", "--sizes", "16,32,64,128")
    assert code == 0
    slope = float(out.strip().splitlines()[-1].split()[1].split("=")[1])
    assert abs(slope - 2) < 0.05
    code, out, _ = run(capsys, "scan", "--family", "interval", "--quantity", "sumset-size", "--sizes", "8,16,32,64", "--json")
    assert json.loads(out)["values"] == [15.0, 31.0, 63.0, 127.0]
    assert run(capsys, "scan", "--family", "interval", "--quantity", "size", "--sizes", "8,16")[0] == 3


def test_search_and_report(workdir, capsys):
    code, out, _ = run(capsys, "search", "--objective", "min-aaplus", "--start", "geometric:2:16", "--steps", "50",
                       "--seed", "1", "--trace", "t.jsonl", "--out", "final.txt")
    assert code == 0
    trace = (workdir / "t.jsonl").read_text().splitlines()
    assert json.loads(trace[0])["record"] == "header" and len(trace) == 51
    first = (workdir / "final.txt").read_bytes()
    run(capsys, "search", "--objective", "min-aaplus", "--start", "geometric:2:16", "--steps", "50",
        "--seed", "1", "--trace", "t.jsonl", "--out", "final.txt")
    assert (workdir / "final.txt").read_bytes() == first
    assert run(capsys, "search", "--objective", "nope", "--start", "interval:4")[0] == 2

    run(capsys, "verify", "--specs", "exact.*", "--family", "interval:5", "--quiet")
    code, out, _ = run(capsys, "report", "sumprodlab-records.jsonl", "--csv", "sum.csv")
    assert code == 0 and out.startswith("spec,family")
    assert (workdir / "sum.csv").read_text() == out
    assert run(capsys, "report", "missing.jsonl")[0] == 2


def test_no_subcommand(capsys):
    assert run(capsys)[0] == 2
