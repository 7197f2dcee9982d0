"""CLI: subcommands, exit codes, determinism, file input."""

import json

import pytest

from rigidhecke.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_classes_sl2(capsys):
    code, out, _ = run(capsys, "classes", "--preset", "sl2")
    assert code == 0
    assert out.count("\n") == 5  # header + separator + 3 records
    assert "s0" in out and "s1" in out


def test_classes_json_c2(capsys):
    code, out, _ = run(capsys, "classes", "--preset", "c2-aff", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["classes"]) == 9
    assert sum(1 for r in data["classes"] if r["elliptic"]) == 5


def test_classes_pgl2_has_tau(capsys):
    code, out, _ = run(capsys, "classes", "--preset", "pgl2", "--format", "json")
    assert code == 0
    recs = json.loads(out)["classes"]
    tau = next(r for r in recs if r["label"] == "tau")
    assert tau["min_length"] == 0


def test_table_golden_byte_exact(capsys, tmp_path):
    import pathlib

    golden = pathlib.Path(__file__).parent / "golden" / "sl2.md"
    code, out, _ = run(capsys, "table", "--preset", "sl2", "--format", "md")
    assert code == 0
    assert out == golden.read_text()


def test_table_csv_and_json(capsys):
    code, out, _ = run(capsys, "table", "--preset", "sl2", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["rows"] == ["T0", "T1", "1"]
    code, out, _ = run(capsys, "table", "--preset", "pgl2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "pgl2,St-,St+,i_0(1)"


def test_table_spec_evaluation(capsys):
    code, out, _ = run(capsys, "table", "--preset", "sl2", "--spec", "q=2", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    # entry (T1, pi+) = q evaluated at 2
    assert lines[2].split(",")[2] == "2"


def test_table_spec_bad_name(capsys):
    code, _, err = run(capsys, "table", "--preset", "sl2", "--spec", "bogus=2")
    assert code == 2
    assert "bogus" in err


def test_jobs_deterministic(capsys):
    code, out1, _ = run(capsys, "table", "--preset", "pgl2", "--format", "json")
    assert code == 0
    code, out4, _ = run(capsys, "table", "--preset", "pgl2", "--format", "json", "--jobs", "4")
    assert code == 0
    assert out1 == out4


def test_reduce_examples(capsys):
    code, out, _ = run(capsys, "reduce", "--preset", "sl2", "--word", "s1,s0,s1")
    assert code == 0
    assert "(1*Q1 - 1)*T[s0s1] + 1*Q1*T[s0]" in out
    assert "trace-verification: ok" in out
    code, out, _ = run(capsys, "reduce", "--preset", "sl2", "--word", "s0")
    assert code == 0
    assert "1*T[s0]" in out
    code, out, _ = run(capsys, "reduce", "--preset", "pgl2", "--word", "tau")
    assert code == 0
    assert "1*T[tau]" in out


def test_reduce_unknown_generator(capsys):
    code, _, err = run(capsys, "reduce", "--preset", "sl2", "--word", "s9")
    assert code == 2
    assert "s9" in err


def test_verify_counts(capsys):
    code, out, _ = run(capsys, "verify", "--preset", "sl2", "--suite", "counts")
    assert code == 0
    report = json.loads(out)
    assert report["suite"] == "counts"
    assert all(c["status"] == "pass" for c in report["checks"])


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "--preset", "sl2", "--suite", "nope")
    assert code == 2


def test_verify_c2ext_counts(capsys):
    # c2-ext has no table manifest; datum-only suites still run
    code, out, _ = run(capsys, "verify", "--preset", "c2-ext", "--suite", "counts")
    assert code == 0
    code, _, err = run(capsys, "verify", "--preset", "c2-ext", "--suite", "pairing")
    assert code == 2


def test_datum_file_input(capsys, tmp_path):
    path = tmp_path / "datum.json"
    path.write_text(
        json.dumps(
            {
                "name": "my-sl2",
                "lattice_rank": 1,
                "simple_roots": [[1]],
                "simple_coroots": [[2]],
            }
        )
    )
    code, out, _ = run(capsys, "classes", "--datum", str(path), "--format", "json")
    assert code == 0
    assert len(json.loads(out)["classes"]) == 3


def test_datum_file_error_exit2(capsys, tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{\n  broken\n}")
    code, _, err = run(capsys, "classes", "--datum", str(path))
    assert code == 2
    assert "line" in err


def test_out_file(capsys, tmp_path):
    out_path = tmp_path / "t.md"
    code, _, _ = run(capsys, "table", "--preset", "sl2", "--out", str(out_path))
    assert code == 0
    assert out_path.read_text().startswith("| sl2 |")
