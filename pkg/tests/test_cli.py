import json
import subprocess
import sys
from pathlib import Path

import pytest

from porkit.cli import CliConfig, UsageError, dispatch

CORPUS = Path(__import__("porkit").__file__).parent / "corpus"


@pytest.fixture
def files(tmp_path):
    (tmp_path / "q.por").write_text("(Q)\n")
    (tmp_path / "s.por").write_text("(comp (S1) (P 1 1))\n")
    (tmp_path / "bad.por").write_text("(comp (S1)\n")
    (tmp_path / "coin.sifp").write_text("flip(X1); Y1 <- R; flip(X1.0); R <- R & Y1\n")
    (tmp_path / "two.sifp").write_text("randbit(); randbit()\n")
    (tmp_path / "m.stm").write_text(
        "states q0 q1\ninitial q0\ntapes 1\nq0 _ ~ 1 R q1\n")
    return tmp_path


def run(capsys, *argv):
    code = dispatch(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_por_dist(capsys, files):
    code, out, _ = run(capsys, "por", "dist", str(files / "q.por"), "--input", "eps")
    assert code == 0 and out.strip() == "{0: 1/2, 1: 1/2}"


def test_por_eval_with_table(capsys, files):
    code, out, _ = run(capsys, "por", "eval", str(files / "q.por"), "--input", "01",
                       "--table", "01=1", "--default", "strict")
    assert code == 0 and out.strip() == "1"
    code, _, err = run(capsys, "por", "eval", str(files / "q.por"), "--input", "01",
                       "--default", "strict")
    assert code == 1 and "OracleMiss" in err


def test_rl_commands(capsys):
    code, out, _ = run(capsys, "rl", "classify", "(E x <= y . x = y)")
    assert code == 0 and out.strip() == "Sigma_b_1"
    code, out, _ = run(capsys, "rl", "measure", "flip(eps) & flip(x)", "--env", "x=0",
                       "--format", "structured")
    assert code == 0 and json.loads(out)["measure"] == {"num": 1, "log2den": 2}


def test_rl_check_repr(capsys, files):
    code, out, _ = run(capsys, "rl", "check-repr", str(files / "q.por"), "--max-len", "2")
    assert code == 0 and out.startswith("pass")
    swapped = "(flip(x1) & y = 0) | (!flip(x1) & y = 1)"
    code, out, _ = run(capsys, "rl", "check-repr", str(files / "q.por"), "--max-len", "1",
                       "--formula", swapped)
    assert code == 1 and "condition3" in out


def test_lam_commands(capsys, files):
    code, out, _ = run(capsys, "lam", "typecheck", r"\x:s. eps")
    assert code == 0 and out.strip() == "s -> s"
    code, out, _ = run(capsys, "lam", "normalize", "Eq 01 01")
    assert code == 0 and out.strip().endswith("= 1")
    code, out, _ = run(capsys, "lam", "check-repr", str(files / "s.por"), "--max-len", "2",
                       "--tables", "2")
    assert code == 0 and out.startswith("pass")


def test_sifp_commands(capsys, files):
    code, out, _ = run(capsys, "sifp", "run-la", str(files / "two.sifp"), "--stream", "10")
    assert code == 0 and out.strip() == "0  (2 bits used)"
    code, out, _ = run(capsys, "sifp", "dist", str(files / "coin.sifp"), "--input", "1")
    assert code == 0 and out.strip() == "{0: 3/4, 1: 1/4}"
    code, out, _ = run(capsys, "sifp", "run-ra", str(files / "coin.sifp"), "--input", "1",
                       "--table", "1=1,10=1")
    assert code == 0 and out.strip() == "1"


def test_stm_commands(capsys, files):
    code, out, _ = run(capsys, "stm", "run", str(files / "m.stm"))
    assert code == 0 and out.startswith("1  (1 steps, 0 bits used)")
    code, out, _ = run(capsys, "stm", "encode-h", str(files / "m.stm"))
    assert code == 0 and "q0 _ 0 1 R q1" in out and "q0 _ 1 1 R q1" in out
    code, out, _ = run(capsys, "stm", "dist", str(files / "m.stm"))
    assert code == 0 and out.strip() == "{1: 1}"


def test_compile_stages(capsys, files):
    code, out, _ = run(capsys, "compile", "ra", str(files / "q.por"))
    assert code == 0 and out.strip() == "flip(X1)"
    code, out, _ = run(capsys, "compile", "manifest", str(files / "q.por"))
    assert code == 0 and set(json.loads(out)["digests"]) == {"por", "ra", "la", "od", "stm", "ptm"}
    code, out, _ = run(capsys, "compile", "ptm", str(files / "q.por"))
    assert code == 0 and out.startswith("kind ptm")


def test_pipeline_check(capsys, files):
    code, out, _ = run(capsys, "pipeline", "check", str(files / "s.por"), "--max-len", "2")
    assert code == 0 and "pass" in out


def test_exit_codes(capsys, files):
    assert run(capsys, "por", "dist", str(files / "bad.por"), "--input", "0")[0] == 2
    assert run(capsys, "por", "dist", str(files / "missing.por"))[0] == 2
    assert run(capsys, "por", "dist", str(files / "q.por"), "--input", "012")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "por", "dist", str(files / "q.por"), "--input", "0",
               "--fuel", "0")[0] == 2
    assert run(capsys, "rl", "classify", "x = ")[0] == 2
    # fuel exhaustion is a failed computation, not a usage error
    assert run(capsys, "por", "eval", str(CORPUS / "06_eq.por"), "--input", "0101",
               "--input", "0101", "--fuel", "5")[0] == 1


def test_config_validation():
    with pytest.raises(UsageError):
        CliConfig(fuel=0)
    assert CliConfig().fuel == 10 ** 5


def test_structured_output_byte_identical(files):
    argv = [sys.executable, "-m", "porkit", "por", "eval", str(files / "s.por"), "--input",
            "01", "--default", "random", "--seed", "5", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["seed"] == 5
    argv = [sys.executable, "-m", "porkit", "lam", "check-repr", str(CORPUS / "10_coinxor.por"),
            "--max-len", "1", "--tables", "3", "--seed", "9", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=True).stdout
    b = subprocess.run(argv, capture_output=True, check=True).stdout
    assert a == b and json.loads(a)["ok"]
