import csv
import shutil
import subprocess
import sys

import pytest

from detour_choice.cli import bundled_dataset, main
from detour_choice.presets import COST_TIME_MNL


def test_missing_dataset_exit_code(tmp_path, capsys):
    missing = tmp_path / "nope.csv"
    assert main(["fit", "--dataset", str(missing)]) == 2
    assert str(missing) in capsys.readouterr().err


def test_bad_config_is_stage_failure(tmp_path, capsys):
    ini = tmp_path / "bad.ini"
    ini.write_text("[draws]\nbogus = 1\n")
    assert main(["run", "--config", str(ini), "--out-dir", str(tmp_path / "o")]) == 1
    assert "bogus" in capsys.readouterr().err


def test_describe(capsys):
    assert main(["describe", "--dataset", str(bundled_dataset())]) == 0
    out = capsys.readouterr().out
    assert "Acceptable detour time" in out and "female" in out


def test_synthesize(tmp_path):
    out = tmp_path / "att.csv"
    assert main(["synthesize", "--dataset", str(bundled_dataset()), "--out", str(out)]) == 0
    with out.open() as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 249 * 6
    assert sum(r["available"] == "false" for r in rows) == 83


def test_synth_is_seeded(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["synth", "--n", "40", "--seed", "9", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert len(a.read_text().splitlines()) == 41


def test_synth_with_parameter_file(tmp_path):
    params = tmp_path / "truth.csv"
    params.write_text("name,value\n" + "".join(f"{k},{v}\n" for k, v in COST_TIME_MNL.items()))
    assert main(["synth", "--true-params", str(params), "--n", "20",
                 "--out", str(tmp_path / "d.csv")]) == 0


def test_fit_mpe_report_chain(tmp_path, capsys):
    data = str(bundled_dataset())
    stem = tmp_path / "ct"
    assert main(["fit", "--model", "cost-time", "--dataset", data, "--out", str(stem)]) == 0
    fit_text = capsys.readouterr().out
    assert "Number of parameters    20" in fit_text
    assert "Adjusted rho-square" in fit_text
    assert (tmp_path / "ct.csv").exists() and (tmp_path / "ct_cov.csv").exists()

    mpe_csv = tmp_path / "ct_mpe.csv"
    assert main(["mpe", "--model-result", str(stem), "--dataset", data, "--levels=-10,10",
                 "--out", str(mpe_csv)]) == 0
    assert "Detour cost, UAH" in capsys.readouterr().out

    assert main(["report", "--results", str(stem), "--mpe", str(mpe_csv),
                 "--out", str(tmp_path / "rep")]) == 0
    text = (tmp_path / "rep.txt").read_text()
    assert "cost-time MNL" in text and "Marginal probability effects" in text
    assert (tmp_path / "rep.csv").read_text().startswith("block,model,name")


def test_run_writes_all_outputs(tmp_path):
    out = tmp_path / "out"
    assert main(["run", "--out-dir", str(out)]) == 0
    names = {p.name for p in out.iterdir()}
    for f in ("summary.txt", "attributes.csv", "report.txt", "report.csv",
              "cost-time_mnl.csv", "profit-time_mnl_mpe.csv"):
        assert f in names
    text = (out / "report.txt").read_text()
    assert "Number of parameters    20" in text
    assert "Number of parameters    22" in text
    assert "Adjusted rho-square" in text and "Model comparison" in text


def test_run_keeps_earlier_outputs_on_failure(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["run", "--out-dir", str(out), "--model", "no-such-model"]) == 1
    assert "stage 'fit no-such-model' failed" in capsys.readouterr().err
    assert (out / "summary.txt").exists()


@pytest.mark.skipif(shutil.which("detour-choice") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["detour-choice", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "synth" in proc.stdout


def test_module_entry():
    proc = subprocess.run([sys.executable, "-m", "detour_choice.cli", "describe", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
