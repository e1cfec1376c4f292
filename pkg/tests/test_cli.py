from pathlib import Path

import pytest

from optisup import cli
from optisup.ground_kernel import StepCheck

PROBLEMS = Path(__file__).parent.parent / "problems"
SELECTION = str(PROBLEMS / "selection.opt")


def test_refutation_prints_status_and_proof(capsys):
    assert cli.main([SELECTION]) == 0
    out = capsys.readouterr().out
    assert "% SZS status Unsatisfiable for selection.opt" in out
    assert "% SZS output start Refutation" in out
    assert out.count("<- Sup(") == 3


def test_conjecture_gives_theorem(tmp_path, capsys):
    f = tmp_path / "thm.opt"
    f.write_text("type i.\nconst p : i > o.\nconst a : i.\naxiom: ![x:i]: p(x).\nconjecture: p(a).\n")
    assert cli.main([str(f)]) == 0
    assert "SZS status Theorem" in capsys.readouterr().out


def test_proof_check_and_stats(capsys):
    assert cli.main([SELECTION, "--check-proof", "--stats"]) == 0
    out = capsys.readouterr().out
    assert "unrooted=0" in out and "rooted=3" in out
    assert "% inferences Sup:" in out


def test_failed_proof_check_exits_with_4(monkeypatch, capsys):
    def fake(steps, order):
        return [StepCheck(c, "unrooted") for c in steps]
    monkeypatch.setattr(cli, "check_proof", fake)
    assert cli.main([SELECTION, "--check-proof"]) == 4
    assert "% not rooted:" in capsys.readouterr().out


def test_proof_out_writes_the_proof_to_a_file(tmp_path, capsys):
    dest = tmp_path / "proof.txt"
    assert cli.main([SELECTION, "--proof-out", str(dest)]) == 0
    assert "SZS output start" not in capsys.readouterr().out
    assert dest.read_text().strip().splitlines()[-1].split(". ", 1)[1].startswith("$false")


def test_resource_limit_exits_with_2(tmp_path, capsys):
    f = tmp_path / "sat.opt"
    f.write_text("type i.\nconst a : i.\nconst b : i.\ncnf: a = b.\n")
    assert cli.main([str(f), "--max-clauses", "30"]) == 2
    assert "SZS status ResourceOut" in capsys.readouterr().out


@pytest.mark.parametrize("args", [
    ["missing.opt"],
    [SELECTION, "--disable-rule", "NoSuchRule"],
    [SELECTION, "--weights", "a"],
])
def test_input_errors_exit_with_3(args, capsys):
    assert cli.main(args) == 3


def test_parse_error_is_reported_with_location(tmp_path, capsys):
    f = tmp_path / "bad.opt"
    f.write_text("type i.\nconst a : i.\ncnf: a <= a.\n")
    assert cli.main([str(f)]) == 3
    captured = capsys.readouterr()
    assert "SZS status InputError" in captured.out
    assert "bad.opt:3:8:" in captured.err
