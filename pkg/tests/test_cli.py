"""Command-line harness: config validation, output files, determinism, and
exit codes, all run in-process through main()."""

import csv
import filecmp
import json

import numpy as np
import pytest

from crackbem.cli import main


def write_config(tmp_path, name="cfg.json", **overrides):
    config = {
        "material": {"lambda": 1.0, "mu": 1.0},
        "geometry": {"kind": "disk", "radius": 1.0},
        "load": {"kind": "constant-stress", "sigma": [[1.0, 0.0], [0.0, 0.0]]},
        "crack": {"center": [0.3, 0.0], "angle_degrees": -45.0, "lengths": [0.2, 0.1]},
        "discretization": {"n_boundary": 64},
        "output": {"precision": 17},
    }
    for section, content in overrides.items():
        if content is None:
            config.pop(section, None)
        elif section in config:
            config[section] = {**config[section], **content}
        else:
            config[section] = content
    path = tmp_path / name
    path.write_text(json.dumps(config), encoding="utf-8")
    return path


def read_csv(path):
    with open(path, newline="") as f:
        return list(csv.reader(f))


def test_solve_outputs(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "run"
    assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    assert names == {
        "trace_u0.csv", "trace_ueps_0.2.csv", "trace_ueps_0.1.csv",
        "crack_opening_0.2.csv", "crack_opening_0.1.csv", "diagnostics.json",
    }
    rows = read_csv(out / "trace_u0.csv")
    assert rows[0] == ["node_param", "x", "y", "u1", "u2"]
    assert len(rows) == 1 + 64
    opening = read_csv(out / "crack_opening_0.1.csv")
    assert opening[0] == ["x1", "phi1", "phi2"]
    assert len(opening) == 1 + 32
    diag = json.loads((out / "diagnostics.json").read_text())
    assert set(diag["per_length"]) == {"0.2", "0.1"}
    assert diag["warnings"] == []
    assert diag["n_boundary"] == 64


def test_solve_deterministic_across_threads(tmp_path):
    cfg = write_config(tmp_path)
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["solve", "--config", str(cfg), "--out", str(out1)]) == 0
    assert main(["solve", "--config", str(cfg), "--out", str(out2), "--threads", "4"]) == 0
    for p in sorted(out1.iterdir()):
        assert filecmp.cmp(p, out2 / p.name, shallow=False), p.name


def test_convergence_outputs(tmp_path):
    cfg = write_config(tmp_path, crack={"lengths": [0.2, 0.15, 0.1]})
    out = tmp_path / "conv"
    assert main(["convergence", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out / "convergence.csv")
    assert rows[0] == [
        "eps", "sup_w", "sup_mismatch", "energy_diff", "energy_formula", "energy_mismatch",
    ]
    assert len(rows) == 4
    slopes = json.loads((out / "slopes.json").read_text())
    assert set(slopes) == {"sup_w", "sup_mismatch", "energy_mismatch"}
    assert slopes["sup_w"]["note"] == "ok"
    assert 1.7 < slopes["sup_w"]["slope"] < 2.3
    assert slopes["sup_mismatch"]["slope"] > 3.0


def test_convergence_needs_three_lengths(tmp_path, capsys):
    cfg = write_config(tmp_path, crack={"lengths": [0.2, 0.1]})
    assert main(["convergence", "--config", str(cfg)]) == 2
    assert "at least 3 crack lengths" in capsys.readouterr().err


def test_td_map_outputs(tmp_path, capsys):
    cfg = write_config(tmp_path, td_map={"n_grid": 3, "n_angles": 4, "margin": 0.45})
    out = tmp_path / "td"
    assert main(["td-map", "--config", str(cfg), "--out", str(out)]) == 0
    assert "skipped grid point" in capsys.readouterr().err
    rows = read_csv(out / "td_map.csv")
    assert rows[0] == ["x", "y", "angle_deg", "K1", "K2", "td", "min_angle_deg"]
    assert len(rows) == 1 + 4  # only the center survives the margin
    data = np.array(rows[1:], dtype=float)
    assert np.all(data[:, 5] <= 1e-15)
    assert np.all(data[:, 6] == 90.0)


def test_energy_outputs(tmp_path):
    cfg = write_config(tmp_path)
    out = tmp_path / "en"
    assert main(["energy", "--config", str(cfg), "--out", str(out)]) == 0
    rows = read_csv(out / "energy.csv")
    assert rows[0] == ["eps", "K1", "K2", "energy_diff", "energy_formula", "energy_mismatch"]
    data = np.array(rows[1:], dtype=float)
    assert data.shape == (2, 6)
    assert np.allclose(data[:, 1:3], 0.5, atol=1e-8)  # 45-degree tilt: K1 = K2
    assert np.all(data[:, 3] < 0)


def test_unknown_keys_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, material={"zeta": 3.0})
    assert main(["solve", "--config", str(cfg)]) == 2
    assert "unknown key 'zeta'" in capsys.readouterr().err
    cfg = write_config(tmp_path, name="cfg2.json", typo_section={"a": 1})
    assert main(["solve", "--config", str(cfg)]) == 2
    assert "unknown config section" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "absent.json")]) == 2


def test_invalid_loads_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, load={"sigma": [[1.0, 0.5], [0.0, 0.0]]})
    assert main(["solve", "--config", str(cfg)]) == 2
    assert "symmetric" in capsys.readouterr().err
    cfg = write_config(tmp_path, name="cfg2.json", geometry={"kind": "torus"})
    assert main(["solve", "--config", str(cfg)]) == 2


def test_non_contracting_solve_exit_code(tmp_path, capsys):
    cfg = write_config(tmp_path, discretization={"max_iterations": 1})
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 3
    assert "did not contract" in capsys.readouterr().err


def test_oversized_crack_rejected(tmp_path, capsys):
    cfg = write_config(tmp_path, crack={"lengths": [0.9]})
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "x")]) == 2
    assert "not smaller than the distance" in capsys.readouterr().err


def test_fourier_traction_projection_warning(tmp_path, capsys):
    # constant traction is not equilibrated; the loader removes the rigid
    # part, warns, and carries on
    cfg = write_config(
        tmp_path,
        load={"kind": "fourier-traction", "cos": [[1.0, 0.0]], "sigma": None},
        crack={"lengths": [0.2]},
    )
    out = tmp_path / "warned"
    assert main(["solve", "--config", str(cfg), "--out", str(out)]) == 0
    assert "rigid components removed" in capsys.readouterr().err
    diag = json.loads((out / "diagnostics.json").read_text())
    assert len(diag["warnings"]) == 1


def test_output_directory_from_config(tmp_path):
    target = tmp_path / "from_config"
    cfg = write_config(
        tmp_path,
        output={"directory": str(target), "precision": 8},
        crack={"lengths": [0.2]},
    )
    assert main(["solve", "--config", str(cfg)]) == 0
    assert (target / "trace_u0.csv").exists()
    value = read_csv(target / "trace_u0.csv")[2][3]
    assert len(value.replace("-", "").replace(".", "").replace("e", "")) <= 10


def test_ellipse_geometry_runs(tmp_path):
    cfg = write_config(
        tmp_path,
        geometry={"kind": "ellipse", "a": 1.2, "b": 0.9},
        crack={"center": [0.0, 0.0], "lengths": [0.15]},
    )
    assert main(["solve", "--config", str(cfg), "--out", str(tmp_path / "ell")]) == 0
