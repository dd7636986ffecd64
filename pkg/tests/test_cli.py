import json
import os

import numpy as np
import pytest

from wavecrest import cli
from wavecrest.errors import SchemaError, ValidationError

MINIMAL = '{"gamma": {"kind": "poly", "coeffs": [-1.0], "B": 1.0}}'


def test_parse_config_defaults():
    cfg = cli.parse_config(MINIMAL)
    assert cfg.g == 1.0 and cfg.B == 1.0 and cfg.L == 1.0
    assert cfg.nx == 128 and cfg.ny == 128
    assert cfg.tol == 1e-8 and cfg.seed == 0
    assert cfg.vfn(0.5) == pytest.approx(-1.0)


def test_parse_config_missing_gamma():
    with pytest.raises(SchemaError) as exc:
        cli.parse_config('{"g": 1.0}')
    assert exc.value.path == "gamma"


def test_parse_config_unknown_keys():
    with pytest.raises(SchemaError) as exc:
        cli.parse_config('{"gamma": {"kind": "poly", "coeffs": [-1.0],'
                         ' "B": 1.0}, "bogus": 1}')
    assert exc.value.path == "bogus"
    with pytest.raises(SchemaError) as exc:
        cli.parse_config('{"gamma": {"kind": "poly", "coeffs": [-1.0],'
                         ' "B": 1.0, "extra": 2}}')
    assert exc.value.path == "gamma.extra"


def test_parse_config_invariants():
    with pytest.raises(ValidationError):
        cli.parse_config('{"gamma": {"kind": "poly", "coeffs": [-1.0],'
                         ' "B": 1.0}, "g": -2.0}')
    with pytest.raises(ValidationError):
        cli.parse_config('{"gamma": {"kind": "poly", "coeffs": [-1.0],'
                         ' "B": 1.0}, "tol": 2.0}')
    with pytest.raises(SchemaError):
        cli.parse_config('{"gamma": {"kind": "poly", "coeffs": [-1.0],'
                         ' "B": 1.0}, "grid": "abc"}')


def test_parse_config_table_vorticity():
    r = [0.0, 0.25, 0.5, 0.75, 1.0]
    doc = json.dumps({"gamma": {"kind": "table", "r": r,
                                "gamma": [-1.0 - t for t in r], "B": 1.0}})
    cfg = cli.parse_config(doc)
    assert cfg.vfn(0.5) == pytest.approx(-1.5)


def test_main_exit_codes(tmp_path, capsys):
    assert cli.main(["--out", str(tmp_path), "vort", "qbound"]) == 0
    out = capsys.readouterr().out
    assert "lambda0 = 0.36733846784201768" in out
    assert "f_lambda0 = 2.2324009178854958" in out

    # gamma = -1 at period 1 fails the size condition: category 3
    assert cli.main(["vort", "jhb"]) == 3
    capsys.readouterr()

    missing = tmp_path / "missing.json"
    assert cli.main(["--config", str(missing), "vort", "hat"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text('{"g": 1.0}')
    assert cli.main(["--config", str(bad), "vort", "hat"]) == 1
    capsys.readouterr()


def test_main_deterministic_output(capsys):
    cli.main(["vort", "qbound"])
    first = capsys.readouterr().out
    cli.main(["vort", "qbound"])
    second = capsys.readouterr().out
    assert first == second


def test_end_to_end_field_pipeline(tmp_path, capsys):
    cfgfile = tmp_path / "cfg.json"
    cfgfile.write_text(MINIMAL)
    assert cli.main(["--config", str(cfgfile), "--out", str(tmp_path),
                     "--grid", "64x64", "laminar", "extreme"]) == 0
    capsys.readouterr()
    csv = tmp_path / "extreme_wave.csv"
    assert csv.exists()

    doc = json.loads(MINIMAL)
    doc["params"] = {"field": str(csv)}
    cfgfile.write_text(json.dumps(doc))
    assert cli.main(["--config", str(cfgfile), "--out", str(tmp_path),
                     "field", "residuals"]) == 0
    capsys.readouterr()
    rep = json.loads((tmp_path / "residuals.json").read_text())
    assert rep["interior_pde"]["sup"] < 1e-8
    assert cli.main(["--config", str(cfgfile), "pressure", "nqt"]) == 0
    capsys.readouterr()


def test_theta_subcommands(tmp_path, capsys):
    assert cli.main(["--out", str(tmp_path), "theta", "solve"]) == 0
    out = capsys.readouterr().out
    assert (tmp_path / "theta.csv").exists()
    assert (tmp_path / "theta_log.json").exists()
    assert cli.main(["--out", str(tmp_path), "theta", "reconstruct"]) == 0
    capsys.readouterr()
    assert (tmp_path / "boundary.csv").exists()


def test_seventeen_digit_formatting(capsys):
    cli.main(["vort", "qbound"])
    out = capsys.readouterr().out
    val = out.splitlines()[0].split(" = ")[1]
    assert float(val) == 0.36733846784201768
    assert len(val.replace(".", "").lstrip("0")) >= 16
