import json
import math

import pytest

from lightlattice.cli import main, preset_names

EXACT_CROSSING_HIGH = 0.373400547


def write_doc(tmp_path, doc, name="case.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def pair_doc(**extra):
    doc = {
        "version": "1",
        "chain": {"zeta": [0.01, 0.0], "positions": [0.0, 0.36]},
        "modes": [
            {"label": "y", "k": 1.0, "intensity_left": 1.0},
            {"label": "z", "k": 1.0, "intensity_right": 1.0},
        ],
        "output": {"format": "both", "prefix": "pair"},
    }
    doc.update(extra)
    return doc


def read_csv(path):
    header = []
    rows = []
    columns = None
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.rstrip("\n")
            if line.startswith("#"):
                header.append(line)
            elif columns is None:
                columns = line.split(",")
            else:
                rows.append(line.split(","))
    return header, columns, rows


def test_version_flag():
    assert main(["--version"]) == 0


def test_scenario_and_preset_are_exclusive(tmp_path):
    path = write_doc(tmp_path, pair_doc())
    assert main(["fields", "--scenario", path, "--preset", "self_ordering",
                 "--out", str(tmp_path)]) == 2
    assert main(["fields", "--out", str(tmp_path)]) == 2
    assert main(["fields", "--preset", "no_such_preset",
                 "--out", str(tmp_path)]) == 2


def test_malformed_scenario_leaves_no_output(tmp_path):
    doc = pair_doc()
    doc["chain"]["bogus"] = 1
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["fields", "--scenario", path, "--out", str(out)]) == 2
    assert not out.exists() or not list(out.iterdir())


def test_fields_outputs(tmp_path):
    path = write_doc(tmp_path, pair_doc())
    out = tmp_path / "out"
    assert main(["fields", "--scenario", path, "--out", str(out),
                 "--samples", "101"]) == 0
    header, columns, rows = read_csv(out / "pair_fields.csv")
    assert any("lightlattice" in h for h in header)
    assert any("scenario" in h for h in header)
    assert not any(str(tmp_path) in h for h in header)  # no local paths
    assert columns == ["x", "i_total", "i_y", "i_z"]
    assert len(rows) == 101

    summary = json.loads((out / "pair_fields_summary.json").read_text())
    assert "_meta" in summary
    y = summary["modes"]["y"]
    # lossless pair: reflected plus transmitted power is the input power
    assert y["reflectance"] + y["transmittance"] == pytest.approx(1.0, abs=1e-10)

    _, amp_cols, amp_rows = read_csv(out / "pair_amplitudes.csv")
    assert amp_cols[:3] == ["mode", "splitter", "x"]
    assert len(amp_rows) == 4  # 2 modes x 2 splitters


def test_forces_table(tmp_path):
    path = write_doc(tmp_path, pair_doc())
    out = tmp_path / "out"
    assert main(["forces", "--scenario", path, "--out", str(out),
                 "--d-min", "0.1", "--d-max", "0.4", "--steps", "31"]) == 0
    _, columns, rows = read_csv(out / "pair_forces.csv")
    assert columns == ["d", "f1_exact", "f2_exact", "f1_approx", "f2_approx"]
    assert len(rows) == 31
    # approximate zero sits exactly at the eighth-wavelength marks
    d_vals = [float(r[0]) for r in rows]
    f1a = [float(r[3]) for r in rows]
    i_closest = min(range(31), key=lambda i: abs(d_vals[i] - 0.125))
    assert abs(f1a[i_closest]) < 5e-4


def test_forces_requires_pair(tmp_path):
    doc = pair_doc()
    doc["chain"]["positions"] = [0.0, 0.3, 0.6]
    path = write_doc(tmp_path, doc)
    assert main(["forces", "--scenario", path, "--out", str(tmp_path)]) == 2


def test_relax_finds_stable_gap(tmp_path):
    doc = pair_doc(dynamics={"regime": "overdamped", "dt": 5.0,
                             "t_end": 200000.0, "force_tol": 1e-11})
    doc["output"]["capture_every"] = 200
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["relax", "--scenario", path, "--out", str(out)]) == 0
    summary = json.loads((out / "pair_summary.json").read_text())
    assert summary["termination"] == "force_tol"
    assert summary["partial"] is False
    assert summary["final_gaps"][0] == pytest.approx(EXACT_CROSSING_HIGH,
                                                     abs=1e-6)
    assert summary["residual_force_sup"] < 1e-10

    _, columns, rows = read_csv(out / "pair_trajectory.csv")
    assert columns[0] == "t"
    assert len(rows) >= 2


def test_relax_rejects_newtonian(tmp_path):
    doc = pair_doc(dynamics={"regime": "newtonian", "dt": 0.5, "t_end": 10.0})
    path = write_doc(tmp_path, doc)
    assert main(["relax", "--scenario", path, "--out", str(tmp_path)]) == 2


def test_dynamics_block_required(tmp_path):
    path = write_doc(tmp_path, pair_doc())
    assert main(["relax", "--scenario", path, "--out", str(tmp_path)]) == 2
    assert main(["evolve", "--scenario", path, "--out", str(tmp_path)]) == 2


def test_evolve_newtonian(tmp_path):
    doc = pair_doc(dynamics={"regime": "newtonian", "dt": 0.25,
                             "t_end": 50.0, "friction": 0.05,
                             "initial_velocities": [0.001, 0.0]})
    doc["output"]["capture_every"] = 10
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["evolve", "--scenario", path, "--out", str(out)]) == 0
    _, columns, rows = read_csv(out / "pair_trajectory.csv")
    assert "v1" in columns and "x2" in columns
    summary = json.loads((out / "pair_summary.json").read_text())
    assert summary["termination"] == "t_end"


def test_separation_violation_writes_partial_and_exits_3(tmp_path):
    doc = pair_doc(dynamics={"regime": "overdamped", "dt": 5.0,
                             "t_end": 100000.0, "min_separation": 0.05})
    doc["chain"]["zeta"] = [0.1, 0.0]
    doc["chain"]["positions"] = [0.0, 0.06]
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["evolve", "--scenario", path, "--out", str(out)]) == 3
    summary = json.loads((out / "pair_summary.json").read_text())
    assert summary["partial"] is True
    assert summary["termination"] == "separation_violation"
    assert (out / "pair_trajectory.csv").exists()


def test_sweep_is_deterministic_across_worker_counts(tmp_path, monkeypatch):
    doc = pair_doc(
        dynamics={"regime": "overdamped", "dt": 10.0, "t_end": 100000.0,
                  "force_tol": 1e-9},
        sweep={"axes": [{"path": "modes.z.intensity_right",
                         "start": 0.8, "stop": 1.2, "steps": 5}]},
    )
    path = write_doc(tmp_path, doc)

    def run(threads, sub):
        monkeypatch.setenv("LIGHTLATTICE_THREADS", threads)
        out = tmp_path / sub
        assert main(["sweep", "--scenario", path, "--out", str(out)]) == 0
        return (out / "pair_sweep.csv").read_bytes()

    assert run("1", "a") == run("3", "b")


def test_sweep_records_cell_failures_in_row(tmp_path, monkeypatch):
    monkeypatch.setenv("LIGHTLATTICE_THREADS", "1")
    doc = pair_doc(
        dynamics={"regime": "overdamped", "dt": 0.1, "t_end": 500.0,
                  "min_separation": 0.05, "force_tol": 1e-9},
        sweep={"axes": [{"path": "chain.positions.1",
                         "start": 0.06, "stop": 0.45, "steps": 2}]},
    )
    doc["chain"]["zeta"] = [0.1, 0.0]
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["sweep", "--scenario", path, "--out", str(out)]) == 0
    _, columns, rows = read_csv(out / "pair_sweep.csv")
    assert "error" in columns
    state_col = columns.index("stability")
    err_col = columns.index("error")
    assert rows[0][state_col] == "failed"
    assert "SeparationViolation" in rows[0][err_col]
    assert rows[-1][state_col] != "failed"


def test_sweep_requires_axes_and_dynamics(tmp_path):
    path = write_doc(tmp_path, pair_doc(
        dynamics={"regime": "overdamped", "dt": 1.0, "t_end": 10.0}))
    assert main(["sweep", "--scenario", path, "--out", str(tmp_path)]) == 2

    doc = pair_doc(sweep={"axes": [{"path": "modes.y.intensity_left",
                                    "start": 1.0, "stop": 2.0, "steps": 2}]})
    path2 = write_doc(tmp_path, doc, name="nodyn.json")
    assert main(["sweep", "--scenario", path2, "--out", str(tmp_path)]) == 2


def test_threads_env_validation(tmp_path, monkeypatch):
    doc = pair_doc(
        dynamics={"regime": "overdamped", "dt": 5.0, "t_end": 100.0},
        sweep={"axes": [{"path": "modes.z.intensity_right",
                         "start": 1.0, "stop": 1.1, "steps": 2}]},
    )
    path = write_doc(tmp_path, doc)
    monkeypatch.setenv("LIGHTLATTICE_THREADS", "zero")
    assert main(["sweep", "--scenario", path, "--out", str(tmp_path)]) == 2
    monkeypatch.setenv("LIGHTLATTICE_THREADS", "0")
    assert main(["sweep", "--scenario", path, "--out", str(tmp_path)]) == 2


def test_design_table(tmp_path):
    out = tmp_path / "out"
    assert main(["design", "--out", str(out), "--d", "0.125",
                 "--zeta", "0.01"]) == 0
    _, columns, rows = read_csv(out / "design.csv")
    k_col = columns.index("k_z_over_k_y")
    err_col = columns.index("error")
    ok = [r for r in rows if r[err_col] == ""]
    ratios = sorted(float(r[k_col]) for r in ok)
    assert any(abs(v - 1.0) < 0.05 for v in ratios)
    assert any(abs(v - 3.0) < 0.05 for v in ratios)
    # out-of-domain distances appear as flagged rows, not crashes
    assert main(["design", "--out", str(out), "--d", "0.25"]) == 0
    _, columns2, rows2 = read_csv(out / "design.csv")
    messages = {r[columns2.index("error")] for r in rows2}
    assert any("balance" in m for m in messages)


def test_modes_report(tmp_path):
    doc = {
        "version": "1",
        "chain": {"zeta": [0.1, 0.0], "positions": [0.0, 0.468]},
        "modes": [
            {"label": "sw", "k": 1.0, "intensity_left": 1.0,
             "intensity_right": 1.0},
            {"label": "p", "k": 1.0 / 0.99, "intensity_left": 0.5,
             "zeta_override": [0.1, 0.0]},
        ],
        "output": {"format": "both", "prefix": "pairmodes"},
    }
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["modes", "--scenario", path, "--out", str(out)]) == 0
    report = json.loads((out / "pairmodes_modes.json").read_text())
    model = report["model"]
    assert abs(model["identities"]["a"]) < model["identities"]["tolerance"]
    assert model["K"] > 0
    assert report["normal_modes"]["omega1"] > 0
    assert (out / "pairmodes_coupling_sweep.csv").exists()

    _, columns, rows = read_csv(out / "pairmodes_coupling_sweep.csv")
    assert columns[0] == "i_p"
    assert len(rows) == 21


def test_zerolines_grid(tmp_path):
    doc = {
        "version": "1",
        "chain": {"zeta": [0.05, 0.0], "positions": [0.0, 0.3, 0.6]},
        "modes": [
            {"label": "y", "k": 1.0, "intensity_left": 1.0},
            {"label": "z", "k": 1.0, "intensity_right": 1.0},
        ],
        "output": {"format": "csv", "prefix": "triple"},
    }
    path = write_doc(tmp_path, doc)
    out = tmp_path / "out"
    assert main(["zerolines", "--scenario", path, "--out", str(out),
                 "--d1-steps", "5", "--d2-steps", "5"]) == 0
    _, columns, rows = read_csv(out / "triple_zerolines.csv")
    assert columns == ["d1", "d2", "f1", "f2", "f3"]
    assert len(rows) == 25
    diag = [r for r in rows if r[0] == r[1]]
    for r in diag:
        assert abs(float(r[3])) < 1e-12


def test_presets_cover_perturbation_kinds():
    names = preset_names()
    assert "self_ordering" in names
    assert "correlated_oscillation" in names
    assert "resonant_transfer" in names


def test_preset_runs_fields(tmp_path):
    out = tmp_path / "out"
    assert main(["fields", "--preset", "drift_intensity",
                 "--out", str(out)]) == 0
    files = {p.name for p in out.iterdir()}
    assert "fields.csv" in files  # presets carry no output prefix
