"""Tests for the command-line front end: exit codes, output formats, and
CSV determinism."""

import json
import subprocess
import sys

import numpy as np
import pytest

from gaussqfi import cli

THERMAL = {"family": "thermal", "theta": 2.0}
PHASE = {"family": "phase_squeezed", "params": {"r": 1.0}, "theta": 0.0}
DISPLACEMENT = {"family": "displacement", "theta": 0.0}
VACUUM_HEATING = {
    "explicit": {
        "n": 1,
        "d": [0.0, 0.0],
        "Gamma": [[1.0, 0.0], [0.0, 1.0]],
        "dd": [0.0, 0.0],
        "dGamma": [[1.0, 0.0], [0.0, 1.0]],
    }
}


def write_cfg(tmp_path, doc, name="model.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def get_value(out, key):
    for line in out.splitlines():
        if line.startswith(key + " = "):
            return line.split(" = ", 1)[1]
    raise AssertionError(f"no line {key!r} in output:\n{out}")


def test_no_args_prints_usage(capsys):
    assert cli.main([]) == 64
    assert "usage" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert cli.main(["--help"]) == 0
    assert "subcommands" in capsys.readouterr().out
    assert cli.main(["sweep", "--help"]) == 0
    assert "--steps" in capsys.readouterr().out


def test_unknown_subcommand(capsys):
    assert cli.main(["frobnicate"]) == 64
    assert "unknown subcommand" in capsys.readouterr().err


def test_missing_required_flag_is_usage_error(capsys, tmp_path):
    cfg = write_cfg(tmp_path, THERMAL)
    assert cli.main(["sweep", cfg, "--from", "1.5", "--to", "2.0"]) == 2


def test_qfi_thermal_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path, THERMAL)
    assert cli.main(["qfi", cfg]) == 0
    out = capsys.readouterr().out
    assert get_value(out, "qfi") == "0.333333333333"
    assert get_value(out, "wigner_fisher") == "0.25"
    assert get_value(out, "ratio").startswith("1.33333333333")
    assert get_value(out, "method") == "general"
    # Thermal models fail the temperature-preserving gate.
    assert "homodyne_opt = unavailable (derivative_preserves_nu)" in out


def test_qfi_missing_file(capsys):
    assert cli.main(["qfi", "/nonexistent/model.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_qfi_invalid_json(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert cli.main(["qfi", str(p)]) == 2


def test_qfi_bad_schema(tmp_path, capsys):
    cfg = write_cfg(tmp_path, {"family": "thermal"})
    assert cli.main(["qfi", cfg]) == 2


def test_sweep_single_row(tmp_path, capsys):
    cfg = write_cfg(tmp_path, PHASE)
    out = tmp_path / "out.csv"
    code = cli.main(
        ["sweep", cfg, "--from", "0", "--to", "0", "--steps", "1", "--out", str(out)]
    )
    assert code == 0
    text = out.read_text()
    assert text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == cli.CSV_HEADER
    assert len(lines) == 2
    cells = lines[1].split(",")
    target = 2 * np.sinh(2.0) ** 2
    assert float(cells[1]) == pytest.approx(target, rel=1e-10)  # qfi
    assert float(cells[5]) == pytest.approx(target, rel=1e-10)  # homodyne_opt
    assert cells[2] == "0.00000000000e+00"  # no first-moment term
    assert cells[7] == "general"
    assert cells[8] == ""


def test_sweep_stdout_default(tmp_path, capsys):
    cfg = write_cfg(tmp_path, THERMAL)
    assert cli.main(["sweep", cfg, "--from", "2", "--to", "2", "--steps", "1"]) == 0
    captured = capsys.readouterr()
    assert captured.out.startswith(cli.CSV_HEADER + "\n")
    assert "# gaussqfi sweep" in captured.err


def test_sweep_deterministic_and_parallel(tmp_path):
    cfg = write_cfg(tmp_path, THERMAL)
    paths = [tmp_path / f"{name}.csv" for name in ("a", "b", "c")]
    for path, jobs in zip(paths, ("1", "1", "4")):
        code = cli.main(
            [
                "sweep",
                cfg,
                "--from",
                "3.0",
                "--to",
                "1.5",
                "--steps",
                "7",
                "--jobs",
                jobs,
                "--out",
                str(path),
            ]
        )
        assert code == 0
    a, b, c = (p.read_bytes() for p in paths)
    assert a == b == c
    rows = a.decode().splitlines()[1:]
    assert len(rows) == 7
    thetas = [float(r.split(",")[0]) for r in rows]
    assert thetas == sorted(thetas)  # sorted even though the range was reversed
    assert all(r.split(",")[5] == "" for r in rows)  # no homodyne frame


def test_sweep_rejects_bad_counts(tmp_path):
    cfg = write_cfg(tmp_path, THERMAL)
    base = ["sweep", cfg, "--from", "1.5", "--to", "2.0"]
    assert cli.main(base + ["--steps", "0"]) == 2
    assert cli.main(base + ["--steps", "3", "--jobs", "0"]) == 2


def test_sweep_family_domain_error(tmp_path):
    cfg = write_cfg(tmp_path, THERMAL)
    code = cli.main(["sweep", cfg, "--from", "0.5", "--to", "2.0", "--steps", "3"])
    assert code == 2


def test_sweep_flags_kernel_overlap(tmp_path):
    cfg = write_cfg(tmp_path, VACUUM_HEATING)
    out = tmp_path / "k.csv"
    code = cli.main(
        ["sweep", cfg, "--from", "0", "--to", "0", "--steps", "1", "--out", str(out)]
    )
    assert code == 0
    row = out.read_text().splitlines()[1].split(",")
    assert row[8] == "kernel-overlap"
    assert float(row[3]) == 0.0  # unsupported derivative carries no information
    assert row[5] == ""


def test_emit_csv_empty_is_header_only(tmp_path):
    out = tmp_path / "empty.csv"
    cli.emit_csv([], str(out))
    assert out.read_text() == cli.CSV_HEADER + "\n"


def test_sld_thermal_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path, THERMAL)
    assert cli.main(["sld", cfg]) == 0
    out = capsys.readouterr().out
    assert "photon-counting form: L_hat" in out
    assert "alpha = [0.333333333333]" in out
    assert "mean_photon = [0.5]" in out
    assert get_value(out, "c (offset)") == "-0.666666666667"


def test_sld_displacement_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path, DISPLACEMENT)
    assert cli.main(["sld", cfg]) == 0
    out = capsys.readouterr().out
    assert "b (linear coefficients) = [2, 0]" in out
    assert "photon-counting form: none" in out


def test_homodyne_phase_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path, PHASE)
    assert cli.main(["homodyne", cfg, "--random-U", "20", "--seed", "5"]) == 0
    out = capsys.readouterr().out
    assert float(get_value(out, "optimal_fisher")) == pytest.approx(
        2 * np.sinh(2.0) ** 2, rel=1e-10
    )
    assert float(get_value(out, "nu")) == pytest.approx(1.0, abs=1e-10)
    assert "violations = 0" in out


def test_homodyne_refuses_thermal(tmp_path, capsys):
    cfg = write_cfg(tmp_path, THERMAL)
    assert cli.main(["homodyne", cfg]) == 3
    err = capsys.readouterr().err
    assert "precondition failed" in err
    assert "derivative_preserves_nu" in err


def test_oracle_check_displacement(tmp_path, capsys):
    cfg = write_cfg(tmp_path, DISPLACEMENT)
    assert cli.main(["oracle-check", cfg, "--cutoff", "30"]) == 0
    out = capsys.readouterr().out
    assert get_value(out, "engine_qfi") == "2"
    assert float(get_value(out, "rel_diff")) < 1e-6
    assert float(get_value(out, "sld_residual")) < 1e-6
    assert float(get_value(out, "tail_mass")) < 1e-10


def test_console_script_roundtrip(tmp_path):
    cfg = write_cfg(tmp_path, THERMAL)
    proc = subprocess.run(
        [sys.executable, "-m", "gaussqfi", "qfi", cfg],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert "qfi = 0.333333333333" in proc.stdout
    proc2 = subprocess.run(
        [sys.executable, "-m", "gaussqfi", "bogus"], capture_output=True, text=True
    )
    assert proc2.returncode == 64
