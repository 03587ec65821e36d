import csv
import json

import pytest

from cmcstab.cli import EXIT_DOMAIN, EXIT_OK, main


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_profile_outside_existence_range(capsys):
    assert main(["profile", "--space", "h2xr", "--H", "0.4"]) == EXIT_DOMAIN
    assert "1/2" in capsys.readouterr().err


def test_profile_row_count(tmp_path):
    out = tmp_path / "p.csv"
    assert main(["profile", "--space", "s2xr", "--H", "0.5", "--samples", "2000",
                 "--out", str(out)]) == EXIT_OK
    lines = out.read_text().splitlines()
    assert lines[0].lstrip("# ") == "s,r,t,sigma,k1,k2,rho,q"
    assert len(lines) - 1 == 2000
    man = json.loads((tmp_path / "p.csv.manifest.json").read_text())
    assert man["parameters"]["samples"] == 2000 and str(out) in man["outputs"]


def test_spectrum_commands(capsys):
    assert main(["spectrum", "--space", "s2xr", "--H", "0.5"]) == EXIT_OK
    assert _json(capsys)["kernel_dim"] == 3
    assert main(["spectrum", "--slice"]) == EXIT_OK
    d = _json(capsys)
    assert abs(d["lambda1"]) < 1e-8
    assert main(["spectrum", "--space", "h2xr", "--H", "0.75"]) == EXIT_OK
    assert _json(capsys)["negative_count"] == 1
    assert main(["spectrum", "--space", "s2xr"]) == EXIT_DOMAIN


def test_bounds(capsys):
    assert main(["bounds", "--h2xr", "--H", "0.8"]) == EXIT_OK
    assert _json(capsys)["max_genus"] == "sphere-only"
    assert main(["bounds", "--h2xr", "--H", "0.6", "--exact", "inv_sqrt3"]) == EXIT_OK
    assert _json(capsys)["max_genus"] == 2
    assert main(["bounds", "--conformally-flat", "--ricci-nonneg", "--embedded"]) == EXIT_OK
    assert _json(capsys)["max_genus"] == 1
    assert main(["bounds", "--s2xr"]) == EXIT_OK
    assert len(_json(capsys)["alternatives"]) == 2
    assert main(["bounds", "--conformally-flat"]) == EXIT_DOMAIN


def test_h0(capsys):
    assert main(["h0"]) == EXIT_OK
    assert 0.17 < _json(capsys)["H0"] < 0.19


def test_classify(capsys):
    assert main(["classify", "--space", "s2xr", "--H", "0.1", "--samples", "801"]) == EXIT_OK
    assert _json(capsys)["verdict"] == "Unstable"


def test_sweep_outputs(tmp_path):
    out = tmp_path / "s.csv"
    argv = ["sweep", "--space", "s2xr", "--H-min", "0.05", "--H-max", "1.0", "--steps", "8",
            "--samples", "801", "--out", str(out), "--plot-data"]
    assert main(argv) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 8
    summary = json.loads((tmp_path / "s_summary.json").read_text())
    (bracket,) = summary["transitions"]
    assert bracket[0] < summary["H0"] < bracket[1]
    assert (tmp_path / "s_area.csv").exists()
    man = json.loads((tmp_path / "s.csv.manifest.json").read_text())
    assert len(man["outputs"]) == 5
    assert all((tmp_path / p).exists() for p in man["outputs"])


def test_sweep_degenerate_range(tmp_path):
    out = tmp_path / "one.csv"
    assert main(["sweep", "--space", "h2xr", "--H-min", "1.0", "--H-max", "1.0",
                 "--samples", "801", "--out", str(out)]) == EXIT_OK
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 1 and rows[0]["verdict"] == "Stable"


def test_sweep_domain_error():
    assert main(["sweep", "--space", "h2xr", "--H-min", "0.3", "--H-max", "1.0",
                 "--steps", "3"]) == EXIT_DOMAIN


def test_manifest_replay_is_byte_identical(tmp_path):
    out = tmp_path / "r.csv"
    argv = ["sweep", "--space", "h2xr", "--H-min", "0.6", "--H-max", "2.0", "--steps", "3",
            "--samples", "801", "--out", str(out)]
    assert main(argv) == EXIT_OK
    before = {p.name: p.read_bytes() for p in tmp_path.iterdir() if "manifest" not in p.name}
    for p in tmp_path.iterdir():
        if "manifest" not in p.name:
            p.unlink()
    assert main(["replay", str(tmp_path / "r.csv.manifest.json")]) == EXIT_OK
    after = {p.name: p.read_bytes() for p in tmp_path.iterdir() if "manifest" not in p.name}
    assert before == after


def test_version(capsys):
    with pytest.raises(SystemExit):
        main(["--version"])
    assert capsys.readouterr().out.strip()
