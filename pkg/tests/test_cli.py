import csv
import io
import json
import math
import subprocess
import sys

import pytest

from wmono.cli import EXIT_INPUT, EXIT_OK, EXIT_RESIDUAL, _int_list, main
from wmono.errors import WMonoError

W3 = json.dumps({"n": 3, "d": 2, "coeffs": [[1, 1, 1, 0], [2, 1, 1, 0], [3, 1, 1, 0]]})


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestVerify:
    def test_w3(self, capsys):
        code, out, _ = run(capsys, "verify", "--spec", W3, "--focus", "1")
        assert code == EXIT_OK
        doc = json.loads(out)
        assert doc["reports"][0]["lhs"] == pytest.approx(8 / 9, abs=1e-12)

    def test_all_foci_csv(self, capsys):
        code, out, _ = run(capsys, "verify", "--spec", W3, "--format", "csv")
        assert code == EXIT_OK
        assert len(out.strip().splitlines()) == 4
        assert "np." not in out
        rows = list(csv.DictReader(io.StringIO(out)))
        assert float(rows[0]["lhs"]) == pytest.approx(8 / 9)

    def test_input_file(self, capsys, tmp_path):
        f = tmp_path / "w3.json"
        f.write_text(W3)
        code, out, _ = run(capsys, "verify", "--input", str(f), "--p", "0.5", "--focus", "1")
        assert code == EXIT_OK
        assert json.loads(out)["reports"][0]["lhs"] == pytest.approx(2 / 9)

    def test_numeric(self, capsys):
        code, out, _ = run(capsys, "verify", "--spec", W3, "--p", "0.5", "--mode", "numeric", "--budget", "4")
        assert code == EXIT_OK

    def test_overlap(self, capsys):
        code, _, err = run(capsys, "verify", "--spec", W3, "--partition", "[[1,2],[2,3]]")
        assert code == EXIT_INPUT
        assert "partition blocks overlap" in err

    def test_tol_zero(self, capsys):
        code, _, _ = run(capsys, "verify", "--spec", W3, "--tol", "0")
        assert code == EXIT_RESIDUAL

    def test_malformed_json(self, capsys):
        code, _, err = run(capsys, "verify", "--spec", "{not json")
        assert code == EXIT_INPUT and "malformed JSON" in err

    def test_cap(self, capsys, monkeypatch):
        monkeypatch.setenv("WMONO_DIM_CAP", "4")
        code, _, err = run(capsys, "verify", "--spec", W3)
        assert code == EXIT_INPUT and "cap exceeded" in err

    def test_both_sources(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--spec", W3, "--input", str(tmp_path / "x"))
        assert code == EXIT_INPUT and "exactly one" in err

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "verify", "--input", str(tmp_path / "missing.json"))
        assert code == EXIT_INPUT and "cannot read" in err

    def test_bad_budget(self, capsys):
        code, _, _ = run(capsys, "verify", "--spec", W3, "--budget", "0")
        assert code == EXIT_INPUT

    def test_out_file(self, capsys, tmp_path):
        out = tmp_path / "r.json"
        code, stdout, _ = run(capsys, "verify", "--spec", W3, "--out", str(out))
        assert code == EXIT_OK and stdout == ""
        assert json.loads(out.read_text())["n"] == 3


class TestSweep:
    def test_no_failures(self, capsys):
        code, out, _ = run(
            capsys, "sweep", "--n-range", "3-5", "--d-range", "2", "--p-list", "0.5,1", "--trials", "20"
        )
        assert code == EXIT_OK
        lines = out.strip().splitlines()
        assert lines[0].startswith("n,d,p,seed,partition,focus")
        assert all(line.endswith("True") for line in lines[1:])

    def test_empty_p_list(self, capsys):
        code, _, err = run(capsys, "sweep", "--n-range", "3", "--p-list", "")
        assert code == EXIT_INPUT and "empty" in err

    def test_usage_error_exit(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["sweep"])
        assert exc.value.code == EXIT_INPUT

    def test_byte_identical(self, tmp_path):
        outs = []
        for k in range(2):
            path = tmp_path / f"s{k}.csv"
            subprocess.run(
                [sys.executable, "-m", "wmono", "sweep", "--n-range", "3-4", "--d-range", "2,3",
                 "--p-list", "0.25,1", "--trials", "4", "--seed", "9", "--out", str(path)],
                check=True,
            )
            outs.append(path.read_bytes())
        assert outs[0] == outs[1] and len(outs[0]) > 100

    def test_seed_changes_output(self, capsys):
        _, a, _ = run(capsys, "sweep", "--n-range", "3", "--trials", "2", "--seed", "1")
        _, b, _ = run(capsys, "sweep", "--n-range", "3", "--trials", "2", "--seed", "2")
        assert a != b


class TestDecompose:
    def test_w3(self, capsys):
        code, out, _ = run(capsys, "decompose", "--spec", W3, "--pair", "1,2", "--samples", "500")
        assert code == EXIT_OK
        stats = json.loads(out)
        assert stats["mean"] == pytest.approx(2 / 3, abs=1e-12)
        assert stats["stddev"] < 1e-10

    def test_p0(self, capsys):
        code, out, _ = run(capsys, "decompose", "--spec", W3, "--p", "0", "--pair", "1,2", "--samples", "20")
        stats = json.loads(out)
        assert code == EXIT_OK
        assert all(stats[k] == 0 for k in ("min", "max", "mean", "stddev", "closed_form"))

    def test_half_13(self, capsys):
        code, out, _ = run(capsys, "decompose", "--spec", W3, "--p", "0.5", "--pair", "1,3")
        stats = json.loads(out)
        assert code == EXIT_OK
        assert stats["mean"] == pytest.approx(1 / 3, abs=1e-12) and stats["stddev"] < 1e-10

    def test_bad_pair(self, capsys):
        code, _, _ = run(capsys, "decompose", "--spec", W3, "--pair", "1")
        assert code == EXIT_INPUT

    def test_csv(self, capsys):
        code, out, _ = run(capsys, "decompose", "--spec", W3, "--pair", "2,3", "--samples", "10",
                           "--format", "csv")
        assert code == EXIT_OK and out.splitlines()[1].startswith('"2,3"')


def test_int_list():
    assert _int_list("3-5,7", "x") == (3, 4, 5, 7)
    with pytest.raises(WMonoError):
        _int_list("a", "x")
