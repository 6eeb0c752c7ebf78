"""End-to-end command line checks, run in process through main()."""

import hashlib
import json

import numpy as np
import pytest

from chiralchain.cli import main


def read_csv_columns(text):
    rows = [line for line in text.splitlines() if line and not
            line.startswith("#")]
    header = rows[0].split(",")
    data = np.array([[float(cell) for cell in row.split(",")]
                     for row in rows[1:]])
    return header, data


def test_simulate_stdout_decoherence_free(capsys):
    code = main(["simulate", "--n", "2", "--xi-over-pi", "1",
                 "--gamma-l", "1", "--gamma-r", "1",
                 "--horizon", "50", "--points", "501", "--stdout"])
    assert code == 0
    header, data = read_csv_columns(capsys.readouterr().out)
    assert header == ["t", "P_1", "P_2", "P_tot", "I_tot"]
    assert data.shape == (501, 5)
    assert np.max(np.abs(data[:, 3] - 1.0)) < 1e-9


def test_simulate_writes_files_and_manifest(tmp_path):
    code = main(["simulate", "--n", "3", "--xi-over-pi", "0.5",
                 "--gamma-l", "0.4", "--gamma-r", "1",
                 "--horizon", "5", "--points", "101", "--json",
                 "--outdir", str(tmp_path)])
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["tool"] == "chiralchain"
    assert manifest["command"] == "simulate"
    assert manifest["parameters"]["config"]["n_atoms"] == 3
    assert manifest["parameters"]["config"]["gamma_left"] == 0.4
    assert manifest["parameters"]["disorder"] == {"mode": "none"}
    assert manifest["detector_defaults"]["plateau"]["eps_rate"] == 2e-4
    names = {entry["path"] for entry in manifest["outputs"]}
    assert names == {"trajectory.csv", "trajectory.json"}
    for entry in manifest["outputs"]:
        blob = (tmp_path / entry["path"]).read_bytes()
        assert hashlib.sha256(blob).hexdigest() == entry["sha256"]
        assert len(blob) == entry["bytes"]
    payload = json.loads((tmp_path / "trajectory.json").read_text())
    assert len(payload["times"]) == 101


def test_simulate_output_is_deterministic(tmp_path):
    args = ["simulate", "--n", "4", "--xi-over-pi", "0.75",
            "--gamma-l", "0.9", "--gamma-r", "1",
            "--horizon", "10", "--points", "201"]
    assert main(args + ["--outdir", str(tmp_path / "a")]) == 0
    assert main(args + ["--outdir", str(tmp_path / "b")]) == 0
    first = (tmp_path / "a" / "trajectory.csv").read_bytes()
    second = (tmp_path / "b" / "trajectory.csv").read_bytes()
    assert first == second


def test_simulate_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "chain.cfg"
    cfg.write_text("n_atoms = 3\n"
                   "xi_over_pi = 1.0\n"
                   "gamma_left = 1.0  # comment survives parsing\n"
                   "gamma_right = 1.0\n")
    out = tmp_path / "run"
    code = main(["simulate", "--config", str(cfg), "--n", "2",
                 "--horizon", "5", "--points", "51", "--outdir", str(out)])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    # flag wins over the file for n, file supplies the rest
    assert manifest["parameters"]["config"]["n_atoms"] == 2
    assert manifest["parameters"]["config"]["xi_over_pi"] == 1.0
    header, _ = read_csv_columns((out / "trajectory.csv").read_text())
    assert header == ["t", "P_1", "P_2", "P_tot", "I_tot"]


def test_simulate_shift_site(tmp_path):
    code = main(["simulate", "--n", "5", "--xi-over-pi", "1",
                 "--gamma-l", "0.9", "--gamma-r", "1",
                 "--shift-site", "3", "--shift", "0.05",
                 "--horizon", "5", "--points", "51",
                 "--outdir", str(tmp_path)])
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    disorder = manifest["parameters"]["disorder"]
    assert disorder["mode"] == "single_site"
    assert disorder["site"] == 3
    assert disorder["shift_fraction"] == 0.05


def test_kernel_stdout_row_count_and_columns(capsys):
    code = main(["kernel", "--dim", "1", "--xi", "0:0.25:2", "--stdout"])
    assert code == 0
    header, data = read_csv_columns(capsys.readouterr().out)
    assert header == ["xi", "decay", "shift"]
    assert data.shape == (9, 3)
    assert data[0, 1] == pytest.approx(0.5)  # contact decay
    assert data[0, 0] == 0.0 and data[-1, 0] == 2.0


def test_kernel_chiral_columns(capsys):
    code = main(["kernel", "--dim", "1chiral", "--xi", "3.14159",
                 "--gamma-l", "0.2", "--gamma-r", "0.8", "--stdout"])
    assert code == 0
    header, data = read_csv_columns(capsys.readouterr().out)
    assert header == ["xi", "decay", "shift", "F_re", "F_im", "G_re", "G_im"]
    assert data.shape == (1, 7)


def test_kernel_3d_contact_divergence_flag(capsys):
    code = main(["kernel", "--dim", "3", "--xi", "0,1,2",
                 "--alignment", "0.5", "--stdout"])
    assert code == 0
    header, data = read_csv_columns(capsys.readouterr().out)
    assert header == ["xi", "decay", "shift", "shift_divergent"]
    assert data.shape == (3, 4)
    assert data[0, 3] == 1.0 and data[1, 3] == 0.0
    assert data[0, 1] == pytest.approx(0.5)  # contact decay, same scale as 1D


def test_kernel_writes_manifest(tmp_path):
    code = main(["kernel", "--dim", "2", "--xi", "0.5,1.0",
                 "--alignment", "1", "--outdir", str(tmp_path)])
    assert code == 0
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["command"] == "kernel"
    assert manifest["parameters"]["dimension"] == "2"
    assert (tmp_path / "kernel.csv").exists()


def test_ensemble_small_run_skips_burst_report(tmp_path):
    code = main(["ensemble", "--n", "3", "--xi-over-pi", "1",
                 "--gamma-l", "0.9", "--gamma-r", "1",
                 "--fluct", "0.01", "--realizations", "2", "--seed", "5",
                 "--horizon", "5", "--points", "201",
                 "--outdir", str(tmp_path)])
    assert code == 0
    header, data = read_csv_columns((tmp_path / "ensemble.csv").read_text())
    assert header == ["t", "mean_P_tot", "std_P_tot", "mean_I_tot",
                      "std_I_tot"]
    assert data.shape == (201, 5)
    bursts = json.loads((tmp_path / "bursts.json").read_text())
    assert "skipped" in bursts
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert manifest["parameters"]["disorder"]["n_realizations"] == 2


def test_outdir_environment_variable(tmp_path, monkeypatch):
    monkeypatch.setenv("CHIRALCHAIN_OUTDIR", str(tmp_path))
    code = main(["simulate", "--n", "2", "--xi-over-pi", "0",
                 "--horizon", "2", "--points", "21"])
    assert code == 0
    assert (tmp_path / "trajectory.csv").exists()


def test_figure_fig2_emits_curves_and_script(tmp_path):
    code = main(["figure", "fig2", "--outdir", str(tmp_path)])
    assert code == 0
    outdir = tmp_path / "fig2"
    names = sorted(p.name for p in outdir.iterdir())
    assert "fig2.gp" in names
    assert "manifest.json" in names
    csvs = [n for n in names if n.endswith(".csv")]
    assert len(csvs) == 4  # N in {2, 3} x {xi0, xipi}
    script = (outdir / "fig2.gp").read_text()
    assert "set datafile separator" in script


def test_error_exit_codes(capsys):
    # half-specified disorder pair
    assert main(["simulate", "--n", "5", "--xi-over-pi", "1",
                 "--shift-site", "3", "--stdout"]) == 2
    assert "error:" in capsys.readouterr().err
    # negative separation rejected by the kernel domain check
    assert main(["kernel", "--dim", "1", "--xi", "-1", "--stdout"]) == 2
    # argparse rejects unknown subcommands and figure names itself
    with pytest.raises(SystemExit):
        main(["no-such-command"])
    with pytest.raises(SystemExit):
        main(["figure", "fig99"])
