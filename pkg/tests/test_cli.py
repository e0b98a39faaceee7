import csv
import io
import math

import pytest

from fbsdetect import cli
from fbsdetect.config import ConfigError, parse_config, render_config

SMALL = """
scenario = "fig2-sweep"
n_trials = 300
sweep_start = -24.0
sweep_stop = -16.0
sweep_step = 4.0
"""


def test_empty_config_defaults():
    cfg = parse_config("")
    assert cfg.scenario == "fig2-sweep"
    assert cfg.delta == 0.01
    assert cfg.scene.slots == 10 and cfg.scene.alpha == 3.0 and cfg.scene.lbs_power_dbm == 40.0
    assert cfg.scene.sigma_h_sq == 1.0 and cfg.scene.sigma_psi_sq == 3.0
    assert cfg.n_trials == 10_000
    assert cfg.detectors == ["naive", "sar", "ml"]


def test_fig3_defaults():
    cfg = parse_config('scenario = "fig3-sweep"')
    assert cfg.detectors == ["naive", "sar", "ml", "cooperative"]
    assert cfg.sweep_points()[0] == 30.0 and cfg.sweep_points()[-1] == 60.0
    assert (cfg.scene.r_lbs, cfg.scene.r_cn, cfg.scene.r_inner, cfg.scene.r_outer) == (100, 50, 90, 150)


@pytest.mark.parametrize("text,key", [
    ("delta = 1.5", "delta"),
    ("delta = 0", "delta"),
    ("sweep_step = -1.0", "sweep_step"),
    ("n_trials = 0", "n_trials"),
    ('detectors = ["naive", "magic"]', "detectors"),
    ("detectors = []", "detectors"),
    ('mode = "quantum"', "mode"),
    ("[scene]\nalpha = -2.0", "scene.alpha"),
    ("[scene]\nslots = 0", "scene.slots"),
    ('scenario = "fig9"', "scenario"),
    ('detectors = ["cooperative"]', "detectors"),
])
def test_range_errors_name_key(text, key):
    with pytest.raises(ConfigError, match=f"`{key}`"):
        parse_config(text)


def test_unknown_keys():
    with pytest.raises(ConfigError, match="bogus"):
        parse_config("bogus = 1")
    with pytest.raises(ConfigError, match="wat"):
        parse_config("[scene]\nwat = 1")
    with pytest.raises(ConfigError):
        parse_config("this is = = not toml")


@pytest.mark.parametrize("text", ["", SMALL, 'scenario = "fig3-sweep"\nedge_k = 2\nmode = "gaussian"',
                                  'scenario = "custom"\n[scene]\nlbs_positions = [[0.0, 50.0]]\n'
                                  'fbs_power_dbm = -inf\ncn_positions = [[1.0, 2.0]]'])
def test_render_roundtrip(text):
    cfg = parse_config(text)
    assert parse_config(render_config(cfg)) == cfg


def test_sweep_points():
    cfg = parse_config(SMALL)
    assert cfg.sweep_points() == [-24.0, -20.0, -16.0]


def run_sweep(tmp_path, text, name="out.csv", extra=()):
    cfg_path = tmp_path / "cfg.toml"
    cfg_path.write_text(text)
    out = tmp_path / name
    rc = cli.main(["sweep", "--config", str(cfg_path), "--out", str(out), *extra])
    return rc, out


def test_sweep_csv(tmp_path):
    rc, out = run_sweep(tmp_path, SMALL)
    assert rc == 0
    raw = out.read_bytes()
    assert raw.endswith(b"\n") and b"\r" not in raw
    rows = list(csv.reader(io.StringIO(raw.decode())))
    assert tuple(rows[0]) == cli.CSV_COLUMNS
    body = rows[1:]
    assert len(body) == 3 * 3
    for r in body:
        assert 0.0 <= float(r[2]) <= 1.0
        assert r[5] == "300"
        assert r[6] != "" and 0.0 <= float(r[6]) <= 1.0


def test_sweep_deterministic(tmp_path):
    _, a = run_sweep(tmp_path, SMALL, "a.csv")
    _, b = run_sweep(tmp_path, SMALL, "b.csv")
    assert a.read_bytes() == b.read_bytes()


def test_seed_overrides(tmp_path, monkeypatch):
    _, a = run_sweep(tmp_path, SMALL, "a.csv", ["--seed", "5"])
    monkeypatch.setenv(cli.SEED_ENV, "5")
    _, b = run_sweep(tmp_path, SMALL, "b.csv")
    _, c = run_sweep(tmp_path, SMALL + "seed = 5\n", "c.csv")
    monkeypatch.delenv(cli.SEED_ENV)
    _, d = run_sweep(tmp_path, SMALL + "seed = 5\n", "d.csv")
    assert a.read_bytes() == b.read_bytes() == c.read_bytes() == d.read_bytes()


def test_flags(tmp_path):
    rc, out = run_sweep(tmp_path, SMALL, extra=["--n", "50", "--detectors", "naive,sar-approx-nearest"])
    assert rc == 0
    rows = list(csv.reader(out.open()))[1:]
    assert {r[1] for r in rows} == {"naive", "sar-approx-nearest"}
    assert all(r[5] == "50" for r in rows)


def test_fig3_csv_has_no_analytic(tmp_path):
    rc, out = run_sweep(tmp_path, 'scenario = "fig3-sweep"\nn_trials = 100\nsweep_start = 40.0\nsweep_stop = 42.0')
    assert rc == 0
    rows = list(csv.reader(out.open()))[1:]
    assert len(rows) == 2 * 4
    assert all(r[6] == "" for r in rows)


def test_exit_codes(tmp_path):
    rc, _ = run_sweep(tmp_path, "delta = 1.5")
    assert rc == 2
    assert cli.main(["sweep", "--config", str(tmp_path / "missing.toml")]) == 2
    rc, _ = run_sweep(tmp_path, SMALL, extra=["--detectors", "nonsense"])
    assert rc == 2
    cfg_path = tmp_path / "ok.toml"
    cfg_path.write_text(SMALL)
    assert cli.main(["sweep", "--config", str(cfg_path), "--out", str(tmp_path / "no" / "dir.csv")]) == 2


def test_trace_consistency(capsys):
    from fbsdetect.priors import sar_threshold
    cfg = parse_config('scenario = "fig3-sweep"')
    assert cli.cmd_trace(cfg, seed=3, value=44.0) == 0
    out = capsys.readouterr().out
    thr = sar_threshold(cfg.build_scenario().ue_prior(44.0), cfg.delta)
    assert f"sar: threshold = {thr:.6g} dB" in out
    assert out.count("cooperative: CN") == 2
    assert "log-density" in out


def test_trace_fig2_defaults(capsys):
    cfg = parse_config("")
    cli.cmd_trace(cfg, seed=0)
    out = capsys.readouterr().out
    ml_line = next(l for l in out.splitlines() if l.startswith("ml:"))
    assert len(ml_line.split("[")[1].split("]")[0].split(",")) == 4
    assert "P = 40 dBm" in out and "alpha = 3" in out and "L = 10" in out and "delta = 0.01" in out
    assert "sigma_psi^2 = 3" in out and "sigma_h^2 = 1" in out


def test_validate_passes(capsys):
    assert cli.main(["validate"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    line = next(l for l in out.splitlines() if "sigma_X^2" in l)
    measured = float(line.split(": ")[1].split(" vs ")[0])
    assert measured == pytest.approx(31.03, abs=0.2)


def test_validate_failure_exit(monkeypatch):
    from fbsdetect import validation
    monkeypatch.setattr(validation, "run_all", lambda seed: [validation.CheckResult("x", False, "bad")])
    assert cli.main(["validate"]) == 1
