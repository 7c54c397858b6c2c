"""Command-line surface: exit codes, JSON schemas, determinism."""

import json
import re
import subprocess
import sys

import jsonschema
import pytest

from thetaver import cli
from thetaver import identities as ids


REPORT_SCHEMA = {
    "type": "object",
    "required": ["name", "mode", "pass", "elapsed_ms", "cutoff"],
    "properties": {
        "name": {"type": "string"},
        "mode": {"enum": ["exact", "numeric", "both"]},
        "pass": {"type": "boolean"},
        "first_bad_exponent": {"type": "string", "pattern": r"^-?\d+(/\d+)?$"},
        "worst_residual": {"type": "number"},
        "elapsed_ms": {"type": "number"},
        "cutoff": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": False,
}

SUITE_SCHEMA = {
    "type": "object",
    "required": ["total", "passed", "failed", "records"],
    "properties": {
        "total": {"type": "integer", "minimum": 0},
        "passed": {"type": "integer", "minimum": 0},
        "failed": {"type": "integer", "minimum": 0},
        "records": {"type": "array", "items": REPORT_SCHEMA},
    },
    "additionalProperties": False,
}


def run_cli(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def strip_timings(payload):
    if isinstance(payload, dict):
        return {
            k: strip_timings(v) for k, v in payload.items() if k != "elapsed_ms"
        }
    if isinstance(payload, list):
        return [strip_timings(v) for v in payload]
    return payload


# -- verify -----------------------------------------------------------------


def test_verify_pass_json(capsys):
    code, out, _ = run_cli(capsys, "verify", "--id", "jacobi", "--json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, REPORT_SCHEMA)
    assert payload["name"] == "jacobi" and payload["pass"] is True
    assert payload["cutoff"] == 100


def test_verify_order_override(capsys):
    code, out, _ = run_cli(capsys, "verify", "--id", "jacobi", "--order", "20", "--json")
    assert code == 0
    assert json.loads(out)["cutoff"] == 20


def test_verify_unknown_id(capsys):
    code, out, err = run_cli(capsys, "verify", "--id", "no-such")
    assert code == 2
    assert out == ""
    assert "error: no record named 'no-such'" in err


def test_verify_human_failure_names_offending_coefficient(capsys, monkeypatch):
    base = ids.get_record("jacobi")
    broken = ids.mutated_record(base, base.mutations[0])
    monkeypatch.setattr(ids, "get_record", lambda name: broken)
    code, out, _ = run_cli(capsys, "verify", "--id", "anything")
    assert code == 1
    assert out.startswith("FAIL")
    assert "first_bad_exponent=1/4" in out
    assert "offending coefficient:" in out
    assert re.search(r"z\d+\[", out)


def test_verify_witness_record_passes(capsys):
    code, out, _ = run_cli(capsys, "verify", "--id", "thm-4-5-quarter-printed", "--json")
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, REPORT_SCHEMA)
    assert payload["pass"] is True and payload["first_bad_exponent"] == "5/4"


# -- verify-all ---------------------------------------------------------------


def test_verify_all_human_summary(capsys):
    code, out, _ = run_cli(capsys, "verify-all", "--filter", "farkas-*")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 4
    assert all(line.startswith("PASS") for line in lines[:3])
    assert lines[3] == "total 3, passed 3, failed 0"


def test_verify_all_json_deterministic_across_thread_counts(capsys, monkeypatch):
    code, out_serial, _ = run_cli(
        capsys, "verify-all", "--filter", "sec5-*", "--json"
    )
    assert code == 0
    monkeypatch.setenv("THETA_CLI_THREADS", "2")
    code, out_threaded, _ = run_cli(
        capsys, "verify-all", "--filter", "sec5-*", "--json"
    )
    assert code == 0
    serial, threaded = json.loads(out_serial), json.loads(out_threaded)
    jsonschema.validate(serial, SUITE_SCHEMA)
    assert serial["total"] == serial["passed"] == 3
    assert strip_timings(serial) == strip_timings(threaded)


def test_verify_all_rejects_bad_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("THETA_CLI_THREADS", "soup")
    code, _, err = run_cli(capsys, "verify-all", "--filter", "sec5-*")
    assert code == 2
    assert "THETA_CLI_THREADS" in err


# -- verify-file --------------------------------------------------------------


def test_verify_file_mixed_verdicts(capsys, tmp_path):
    path = tmp_path / "quartic.thid"
    path.write_text(
        "# even-characteristic fourth powers\n"
        "theta[0,0]^4 == theta[1,0]^4 + theta[0,1]^4\n"
        "\n"
        "theta[0,0]^4 == theta[1,0]^4 - theta[0,1]^4\n"
    )
    code, out, _ = run_cli(capsys, "verify-file", str(path), "--json")
    assert code == 1
    payload = json.loads(out)
    jsonschema.validate(payload, SUITE_SCHEMA)
    assert payload["total"] == 2 and payload["passed"] == 1
    names = [r["name"] for r in payload["records"]]
    assert names == ["quartic.thid:2", "quartic.thid:4"]
    assert payload["records"][0]["pass"] is True
    assert payload["records"][1]["pass"] is False
    assert payload["records"][1]["first_bad_exponent"] == "0"


def test_verify_file_parse_error_is_positioned(capsys, tmp_path):
    path = tmp_path / "broken.thid"
    path.write_text("theta[0,0] ==\n")
    code, _, err = run_cli(capsys, "verify-file", str(path))
    assert code == 2
    assert err.startswith("error:")
    assert "line 1" in err


def test_verify_file_missing(capsys, tmp_path):
    code, _, err = run_cli(capsys, "verify-file", str(tmp_path / "absent.thid"))
    assert code == 2
    assert "cannot read" in err


# -- expand -------------------------------------------------------------------


def test_expand_human(capsys):
    code, out, _ = run_cli(capsys, "expand", "--theta", "1,1/4", "--deriv")
    assert code == 0
    header, *rows = out.strip().splitlines()
    assert header == "# dtheta[1,1/4] scale=1 grading=4 order=16 through x^10"
    assert rows[0].startswith("x^(1/4)")
    assert "z16[" in rows[0]  # minimal-order basis for an order-16 phase
    assert re.search(r"~ [+-]\d+\.\d{9}[+-]\d+\.\d{9}j", rows[0])


def test_expand_json_coords_at_declared_order(capsys):
    code, out, _ = run_cli(
        capsys, "expand", "--theta", "1,1/4", "--deriv", "--order", "6", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["atom"] == "dtheta"
    assert payload["eps"] == "1" and payload["eps_prime"] == "1/4"
    assert payload["order"] == 16
    for term in payload["terms"]:
        assert len(term["coords"]) == 8  # deg of the 16th cyclotomic polynomial
        assert len(term["approx"]) == 2
    assert payload["terms"][0]["exponent"] == "1/4"


def test_expand_rejects_coarse_grading(capsys):
    code, _, err = run_cli(capsys, "expand", "--theta", "1,1/4", "--grading", "3")
    assert code == 2
    assert "multiple" in err


def test_expand_rejects_malformed_characteristic(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(capsys, "expand", "--theta", "1;2")
    assert exc.value.code == 2


# -- sumsq --------------------------------------------------------------------


def test_sumsq_human(capsys):
    code, out, _ = run_cli(capsys, "sumsq", "--max", "8")
    assert code == 0
    row5 = [line for line in out.splitlines() if line.strip().startswith("5 ")]
    assert len(row5) == 1
    assert re.findall(r"\d+", row5[0])[:3] == ["5", "8", "8"]
    assert "NO" not in out


def test_sumsq_json(capsys):
    code, out, _ = run_cli(capsys, "sumsq", "--max", "12", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["all_agree"] is True
    assert len(payload["rows"]) == 13
    nine = payload["rows"][9]
    assert nine == {
        "n": 9, "s2": 4, "s2_lattice": 4, "s12": 6, "s12_lattice": 6, "agree": True,
    }


def test_sumsq_rejects_negative_max(capsys):
    with pytest.raises(SystemExit) as exc:
        run_cli(capsys, "sumsq", "--max", "-1")
    assert exc.value.code == 2


# -- numeric-check ------------------------------------------------------------


def test_numeric_check_runs_plan(capsys):
    code, out, _ = run_cli(
        capsys, "numeric-check", "--id", "det-A-zero",
        "--samples", "5", "--seed", "3", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    jsonschema.validate(payload, REPORT_SCHEMA)
    assert payload["pass"] is True and payload["cutoff"] == 0


def test_numeric_check_rejects_exact_only_record(capsys):
    code, _, err = run_cli(capsys, "numeric-check", "--id", "thm-4-5-quarter-printed")
    assert code == 2
    assert "exact-only" in err


def test_numeric_check_tol_controls_verdict(capsys):
    code, out, _ = run_cli(
        capsys, "numeric-check", "--id", "prop-4-2-quarter",
        "--samples", "6", "--tol", "1e-30",
    )
    assert code == 1
    assert out.startswith("FAIL")


# -- installed entry point ----------------------------------------------------


def test_console_script_entry_point():
    proc = subprocess.run(
        ["thetaver", "sumsq", "--max", "3", "--json"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["all_agree"] is True


def test_module_invocation_matches_package_version():
    proc = subprocess.run(
        [sys.executable, "-c",
         "import sys; from thetaver.cli import main; sys.exit(main(['verify', '--id', 'jacobi']))"],
        capture_output=True, text=True, timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert proc.stdout.startswith("PASS")
