import csv
import io
import subprocess
import sys

import pytest

from projtomo import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_threshold_projector(capsys):
    code, out, _ = run(capsys, "threshold", "--d", "4", "--r", "2", "--epsilon", "0.0125")
    assert code == 0
    assert rows(out) == [["kind", "d", "r", "epsilon", "threshold"], ["projector", "4", "2", "1/80", "400"]]


def test_threshold_pure(capsys):
    code, out, _ = run(capsys, "threshold", "--d", "64", "--epsilon", "1/8")
    assert code == 0
    assert rows(out)[1][-1] == "64"


def test_threshold_out_of_window(capsys):
    code, _, err = run(capsys, "threshold", "--d", "4", "--r", "3", "--epsilon", "0.0125")
    assert code == 1
    assert "r <= d/2" in err


def test_wss_table(capsys):
    code, out, _ = run(capsys, "wss", "--n", "2", "--r", "2", "--d", "2")
    assert code == 0
    table = rows(out)
    assert table[0] == ["partition", "prob_num", "prob_den", "prob_float"]
    assert table[1:] == [["2", "3", "4", "0.75"], ["1-1", "1", "4", "0.25"]]


def test_pgm_affinity_single_and_grid(capsys):
    code, out, _ = run(capsys, "pgm-affinity", "--n", "3", "--d", "2", "--r", "1")
    assert code == 0
    assert rows(out)[1][3] == "4/5"
    code, out, _ = run(capsys, "pgm-affinity", "--n", "4", "--d", "3", "--grid")
    assert code == 0
    assert len(rows(out)) == 1 + 4 * 6
    assert all(r[-1] == "true" for r in rows(out)[1:])


def test_capacity_exit_code(capsys):
    code, _, err = run(capsys, "pgm-affinity", "--n", "1000", "--d", "2", "--r", "1")
    assert code == 2
    assert "capacity" in err


def test_usage_errors(capsys):
    assert run(capsys, "wss", "--n", "2", "--r", "2", "--bogus")[0] == 1
    assert run(capsys, "hayashi", "--n", "3", "--d", "2")[0] == 1  # seed is mandatory
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "hayashi", "--n", "3", "--d", "2", "--seed", "-1")[0] == 1
    assert run(capsys, "wss", "--n", "2", "--r", "3", "--d", "2")[0] == 1


def test_hayashi_output(capsys):
    code, out, _ = run(capsys, "hayashi", "--n", "10", "--d", "4", "--samples", "20000", "--seed", "3")
    assert code == 0
    table = rows(out)
    assert table[0][0] == "k" and len(table) == 5
    assert table[1][3] == "11/14"
    assert all(r[-1] == "true" for r in table[1:])


@pytest.mark.parametrize(
    "argv",
    [
        ["metrics", "--d", "3", "--samples", "5", "--seed", "1"],
        ["jordan", "--d", "6", "--r", "2", "--seed", "1"],
        ["bootstrap", "--d", "16", "--r", "4", "--epsilon", "0.25", "--alpha", "0.5", "--trials", "3", "--seed", "9"],
        ["covering", "--d", "16", "--r", "4", "--epsilon", "0.25", "--alpha", "0.5", "--trials", "3", "--seed", "9"],
    ],
)
def test_seeded_output_is_byte_identical(capsys, argv):
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    table = rows(out1)
    assert len(table) >= 2
    assert len({len(r) for r in table}) == 1


def test_floats_use_twelve_digits():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(True) == "true"


def test_output_file(tmp_path, capsys):
    target = tmp_path / "wss.csv"
    code, out, _ = run(capsys, "--output", str(target), "wss", "--n", "3", "--r", "2")
    assert code == 0 and out == ""
    assert target.read_text().splitlines()[0] == "partition,prob_num,prob_den,prob_float"


def test_bootstrap_rejects_bad_learner_budget(capsys):
    code, _, err = run(
        capsys, "bootstrap", "--d", "8", "--r", "1", "--epsilon", "0.01", "--learner", "hayashi_pure",
        "--n", "1", "--trials", "1", "--seed", "0",
    )
    assert code == 1
    assert "budget" in err


def test_selftest_fast_via_module():
    proc = subprocess.run(
        [sys.executable, "-m", "projtomo", "selftest", "--fast"], capture_output=True, text=True, timeout=300
    )
    assert proc.returncode == 0, proc.stdout + proc.stderr
    assert proc.stdout.startswith("check,pass,detail")


def test_selftest_failure_exit_code(capsys, monkeypatch):
    from projtomo import selftest

    monkeypatch.setattr(selftest, "CHECKS", [("always_fails", lambda fast: (False, "forced"))])
    code, out, _ = run(capsys, "selftest", "--fast")
    assert code == 3
    assert "always_fails,false,forced" in out
