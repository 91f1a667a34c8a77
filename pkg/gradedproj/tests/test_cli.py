import json

import pytest

from gradedproj.main import app
from gradedproj.models import DominantCharacter


@pytest.fixture
def invoke(runner, cache_dir):
    def run(*args):
        return runner.invoke(app, ["--cache-dir", cache_dir, *args])
    return run

# =============================================================================
# Computations
# =============================================================================

def test_char_adjoint(invoke):
    result = invoke("--type", "B4", "char", "--weight", "0,1,0,0")
    assert result.exit_code == 0, result.output
    assert "dimension: 36" in result.output


def test_char_type_on_the_command(invoke):
    result = invoke("char", "--type", "C3", "--weight", "1,0,0")
    assert result.exit_code == 0, result.output
    assert "dimension: 6" in result.output


def test_char_defaults_to_type_b(invoke):
    result = invoke("char", "--weight", "0,0,0")
    assert result.exit_code == 0, result.output
    assert "dimension: 1" in result.output


def test_char_json(invoke):
    result = invoke("--type", "B3", "--format", "json", "char", "--weight", "0,1,0")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["lambda"] == [0, 1, 0]
    assert payload["dimension"] == 21
    assert {"weight": [0, 0, 0], "mult": 3, "dim": 1} in payload["rows"]


def test_kr(invoke):
    result = invoke("--type", "B3", "kr", "--node", "2", "--level", "1")
    assert result.exit_code == 0, result.output
    assert "V(0,1,0)" in result.output
    assert "t·V(0,0,0)" in result.output
    assert "dimension at t=1: 22" in result.output


def test_kr_json(invoke):
    result = invoke("--type", "B3", "--format", "json", "kr", "--node", "2", "--level", "2")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert [layer["degree"] for layer in payload["layers"]] == [0, 1, 2]
    assert payload["dimension"] == 190


def test_proj_with_explicit_xi(invoke):
    result = invoke("--type", "B3", "--format", "json", "proj", "--weight", "0,1,0", "--psi-xi", "0,1,0")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["psi_origin"] == "xi 0,1,0"
    assert payload["dimension"] == 22


def test_gamma(invoke):
    result = invoke("--type", "B3", "gamma", "--weight", "0,1,0", "--psi-node", "2")
    assert result.exit_code == 0, result.output
    assert "nodes: 2  covers: 1" in result.output


def test_gamma_dot(invoke):
    result = invoke("--type", "B3", "gamma", "--weight", "0,1,0", "--psi-node", "2", "--dot")
    assert result.exit_code == 0, result.output
    assert result.output.startswith("digraph gamma {")
    assert "n0 -> n1;" in result.output


def test_coeffs(invoke):
    result = invoke("--type", "B4", "coeffs", "--weight", "1,1,1,0")
    assert result.exit_code == 0, result.output
    assert "rows: 8  nonzero: 6" in result.output

# =============================================================================
# Verification and exit codes
# =============================================================================

def test_verify_thm2_passes(invoke):
    result = invoke("--type", "B4", "verify", "thm2", "--weight", "1,1,1,0", "--psi-node", "3", "--extra")
    assert result.exit_code == 0, result.output
    assert "FAIL" not in result.output


def test_verify_matrix_json(invoke):
    result = invoke("--type", "B3", "--format", "json", "verify", "matrix", "--weight", "0,1,0", "--psi-node", "2")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.output)
    assert payload["residual_is_zero"] is True
    assert payload["matrices"]["A"] == [["1", "0"], ["t", "1"]]


def test_verify_conjecture(invoke):
    result = invoke("--type", "C3", "verify", "conjecture", "--weight", "1,1,0", "--mode", "concrete")
    assert result.exit_code == 0, result.output


def test_verify_failure_exits_one(invoke, monkeypatch):
    monkeypatch.setattr("gradedproj.main.verify_conjecture",
                        lambda lam, rs, mode: DominantCharacter.simple((1, 0, 0, 0)))
    result = invoke("--type", "B4", "verify", "conjecture", "--weight", "0,1,0,0")
    assert result.exit_code == 1
    assert "FAIL" in result.output
    assert "conjecture/concrete residual: V(1,0,0,0)" in result.output


@pytest.mark.parametrize("args", [
    ("--type", "A3", "char", "--weight", "1,0,0"),
    ("--type", "B3", "char", "--weight", "1,0"),
    ("--type", "B3", "char", "--weight", "1,-1,0"),
    ("--type", "C3", "verify", "conjecture", "--weight", "1,1,1"),
    ("--type", "B4", "verify", "conjecture", "--weight", "2,0,0,0", "--mode", "symbolic"),
    ("--type", "B4", "verify", "stable", "--weight", "1,1,1,0"),
    ("--type", "B3", "proj", "--weight", "0,1,0", "--psi-node", "2", "--psi-xi", "0,1,0"),
    ("--type", "B3", "proj", "--weight", "0,1,0", "--psi-roots", "1,0,0"),
    ("--type", "B3", "verify", "sweep", "--checks", "thm2,bogus"),
])
def test_usage_errors_exit_two(invoke, args):
    result = invoke(*args)
    assert result.exit_code == 2, result.output
    assert "error:" in result.output


def test_sweep(invoke):
    result = invoke("--workers", "1", "--type", "B3", "verify", "sweep", "--checks", "thm2,matrix",
                    "--max-coord", "1", "--max-i-lambda", "2")
    assert result.exit_code == 0, result.output
    assert "4/4 passed" in result.output


def test_verify_golden(invoke):
    result = invoke("--type", "B4", "verify", "golden", "--weight", "1,1,1,0")
    assert result.exit_code == 0, result.output
    assert "golden/bd_ilambda3" in result.output
    result = invoke("--type", "B4", "--format", "json", "verify", "golden", "--weight", "1,1,1,0")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["checks"][0]["detail"]["mismatches"] == 0


def test_verify_golden_mismatch_exits_one(invoke, monkeypatch):
    monkeypatch.setattr("gradedproj.main.golden_mismatches", lambda table, lam, rs: ["mu=(1,0,1,0) s=1: 0 != 1"])
    result = invoke("--type", "B4", "verify", "golden", "--weight", "1,1,1,0")
    assert result.exit_code == 1
    assert "golden/bd_ilambda3 residual: mu=(1,0,1,0) s=1: 0 != 1" in result.output


def test_verify_golden_without_a_table_exits_two(invoke):
    result = invoke("--type", "B4", "verify", "golden", "--weight", "1,0,0,0")
    assert result.exit_code == 2, result.output
    assert "error:" in result.output


def test_verify_calibrate(invoke):
    result = invoke("--type", "B4", "verify", "calibrate", "--i-lambda", "1")
    assert result.exit_code == 1
    assert "disabled" in result.output
    assert "calibration failed at lambda=2,0,0,0" in result.output

    result = invoke("--type", "C3", "--format", "json", "verify", "calibrate", "--i-lambda", "1")
    assert result.exit_code == 0, result.output
    payload = json.loads(result.stdout)
    assert payload["enabled"] is True
    assert len(payload["cases"]) == 2

    result = invoke("--type", "C3", "verify", "calibrate", "--i-lambda", "3")
    assert result.exit_code == 2, result.output

# =============================================================================
# Cache commands
# =============================================================================

def test_cache_stats_and_clear(invoke):
    assert invoke("--type", "B4", "coeffs", "--weight", "1,1,1,0").exit_code == 0
    result = invoke("--format", "json", "cache", "stats")
    assert result.exit_code == 0, result.output
    assert json.loads(result.output)["ops"]["c"] > 0
    result = invoke("cache", "clear")
    assert result.exit_code == 0
    assert "cleared" in result.output


def test_cache_commands_need_a_cache(runner):
    result = runner.invoke(app, ["--no-cache", "cache", "stats"])
    assert result.exit_code == 2

# =============================================================================
# Determinism
# =============================================================================

@pytest.mark.parametrize("args", [
    ("--type", "B4", "coeffs", "--weight", "1,1,1,0"),
    ("--type", "B3", "--format", "json", "char", "--weight", "0,1,0"),
    ("--type", "B3", "gamma", "--weight", "0,2,0", "--psi-node", "2", "--dot"),
])
def test_repeated_runs_print_the_same_bytes(invoke, runner, args):
    cold = invoke(*args)
    warm = invoke(*args)
    uncached = runner.invoke(app, ["--no-cache", *args])
    assert cold.exit_code == warm.exit_code == uncached.exit_code == 0, cold.output
    assert cold.stdout_bytes == warm.stdout_bytes == uncached.stdout_bytes
