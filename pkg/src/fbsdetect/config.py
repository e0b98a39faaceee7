"""Experiment configuration: a flat TOML document plus one ``[scene]`` table.

Every key is optional; omitted keys take the defaults below, which follow the
three-LBS reference setup (P = 40 dBm, sigma_h^2 = 1, sigma_Psi^2 = 3,
L = 10, alpha = 3, delta = 0.01).
"""
from __future__ import annotations

import math
import sys
from dataclasses import asdict, dataclass, field, fields

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from . import montecarlo as mc
from .channel import Scene

SCENARIOS = ("fig2-sweep", "fig3-sweep", "custom")

DEFAULT_DETECTORS = {
    "fig2-sweep": ("naive", "sar", "ml"),
    "fig3-sweep": ("naive", "sar", "ml", "cooperative"),
    "custom": ("naive", "sar", "ml"),
}
# (start, stop, step): u_fbs in dB for fig2, FBS power in dBm otherwise
DEFAULT_SWEEP = {
    "fig2-sweep": (-30.0, 0.0, 2.0),
    "fig3-sweep": (30.0, 60.0, 2.0),
    "custom": (30.0, 60.0, 2.0),
}


class ConfigError(ValueError):
    pass


@dataclass
class SceneParams:
    lbs_positions: list = field(default_factory=lambda: [list(p) for p in mc.FIG2_LBS_POSITIONS])
    fbs_position: list = field(default_factory=lambda: [0.0, -mc.FIG2_FBS_DISTANCE])
    ue_position: list = field(default_factory=lambda: [0.0, 0.0])
    cn_positions: list = field(default_factory=list)
    lbs_power_dbm: float = 40.0
    fbs_power_dbm: float = 40.0
    alpha: float = 3.0
    sigma_psi_sq: float = 3.0
    sigma_h_sq: float = 1.0
    noise_power: float = 0.0
    slots: int = 10
    ss_len: int = 64
    r_lbs: float = mc.FIG3_LBS_DISTANCE
    r_cn: float = mc.FIG3_CN_RADIUS
    r_inner: float = mc.FIG3_FBS_INNER
    r_outer: float = mc.FIG3_FBS_OUTER
    num_cn: int = mc.FIG3_NUM_CN

    RADIO = ("lbs_power_dbm", "alpha", "sigma_psi_sq", "sigma_h_sq", "noise_power", "slots", "ss_len")

    def radio(self) -> dict:
        return {k: getattr(self, k) for k in self.RADIO}

    def geometry(self) -> dict:
        return {
            "lbs_positions": [tuple(p) for p in self.lbs_positions],
            "fbs_position": tuple(self.fbs_position),
            "ue_position": tuple(self.ue_position),
            "cn_positions": [tuple(p) for p in self.cn_positions],
        }

    def to_scene(self) -> Scene:
        return Scene(**self.geometry(), fbs_power_dbm=self.fbs_power_dbm, **self.radio())


@dataclass
class ExperimentConfig:
    scenario: str = "fig2-sweep"
    detectors: list = field(default_factory=lambda: list(DEFAULT_DETECTORS["fig2-sweep"]))
    delta: float = 0.01
    edge_k: int | None = None
    n_trials: int = 10000
    seed: int = 0
    sweep_start: float = DEFAULT_SWEEP["fig2-sweep"][0]
    sweep_stop: float = DEFAULT_SWEEP["fig2-sweep"][1]
    sweep_step: float = DEFAULT_SWEEP["fig2-sweep"][2]
    output_path: str = "scr.csv"
    mode: str = "fast"
    scene: SceneParams = field(default_factory=SceneParams)

    def sweep_points(self) -> list[float]:
        n = int(math.floor((self.sweep_stop - self.sweep_start) / self.sweep_step + 1e-9)) + 1
        return [round(self.sweep_start + i * self.sweep_step, 10) for i in range(n)]

    def detector_specs(self) -> list[mc.DetectorSpec]:
        return [mc.DetectorSpec(d, self.delta, self.edge_k) for d in self.detectors]

    def build_scenario(self) -> mc.Scenario:
        if self.scenario == "fig2-sweep":
            return mc.Fig2Scenario(**self.scene.geometry(), **self.scene.radio())
        if self.scenario == "fig3-sweep":
            s = self.scene
            return mc.Fig3Scenario(r_lbs=s.r_lbs, r_cn=s.r_cn, r_inner=s.r_inner,
                                   r_outer=s.r_outer, num_cn=s.num_cn, **s.radio())
        return mc.SceneScenario(self.scene.to_scene())


_TOP_KEYS = {f.name for f in fields(ExperimentConfig)} - {"scene"}
_SCENE_KEYS = {f.name for f in fields(SceneParams)}


def _require(cond, key, accepted):
    if not cond:
        raise ConfigError(f"invalid value for `{key}`: expected {accepted}")


def _number(value, key, accepted="a number"):
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), key, accepted)
    return float(value)


def _integer(value, key, accepted="an integer"):
    _require(isinstance(value, int) and not isinstance(value, bool), key, accepted)
    return int(value)


def _point(value, key):
    _require(isinstance(value, list) and len(value) == 2, key, "an [x, y] pair in metres")
    return [_number(v, key, "an [x, y] pair in metres") for v in value]


def _parse_scene(raw: dict) -> SceneParams:
    unknown = set(raw) - _SCENE_KEYS
    if unknown:
        raise ConfigError(f"unknown scene key(s): {', '.join(sorted(unknown))}")
    sp = SceneParams()
    for key, value in raw.items():
        if key in ("lbs_positions", "cn_positions"):
            _require(isinstance(value, list), f"scene.{key}", "a list of [x, y] pairs")
            value = [_point(p, f"scene.{key}") for p in value]
            if key == "lbs_positions":
                _require(len(value) >= 1, "scene.lbs_positions", "at least one LBS")
        elif key in ("fbs_position", "ue_position"):
            value = _point(value, f"scene.{key}")
        elif key in ("slots", "ss_len", "num_cn"):
            value = _integer(value, f"scene.{key}")
        else:
            value = _number(value, f"scene.{key}")
        setattr(sp, key, value)
    _require(sp.alpha > 0, "scene.alpha", "alpha > 0")
    _require(sp.sigma_psi_sq >= 0, "scene.sigma_psi_sq", "sigma_psi_sq >= 0")
    _require(sp.sigma_h_sq > 0, "scene.sigma_h_sq", "sigma_h_sq > 0")
    _require(sp.noise_power >= 0, "scene.noise_power", "noise_power >= 0")
    _require(sp.slots >= 1, "scene.slots", "slots >= 1")
    _require(sp.ss_len >= len(sp.lbs_positions) + 1, "scene.ss_len", "ss_len >= M+1")
    _require(sp.num_cn >= 0, "scene.num_cn", "num_cn >= 0")
    _require(0 <= sp.r_inner < sp.r_outer, "scene.r_inner", "0 <= r_inner < r_outer")
    _require(sp.r_cn > 0 and sp.r_lbs > 0, "scene.r_cn", "positive radii")
    return sp


def config_from_dict(raw: dict) -> ExperimentConfig:
    raw = dict(raw)
    scene_raw = raw.pop("scene", {})
    _require(isinstance(scene_raw, dict), "scene", "a table of scene parameters")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown key(s): {', '.join(sorted(unknown))}")

    scenario = raw.get("scenario", "fig2-sweep")
    _require(scenario in SCENARIOS, "scenario", f"one of {', '.join(SCENARIOS)}")
    start, stop, step = DEFAULT_SWEEP[scenario]
    cfg = ExperimentConfig(
        scenario=scenario, detectors=list(DEFAULT_DETECTORS[scenario]),
        sweep_start=start, sweep_stop=stop, sweep_step=step)

    if "detectors" in raw:
        dets = raw["detectors"]
        if isinstance(dets, str):
            dets = [d.strip() for d in dets.split(",") if d.strip()]
        _require(isinstance(dets, list) and dets and all(d in mc.DETECTORS for d in dets),
                 "detectors", f"a nonempty subset of {', '.join(mc.DETECTORS)}")
        cfg.detectors = list(dets)
    if "delta" in raw:
        cfg.delta = _number(raw["delta"], "delta", "a number in (0, 1)")
    _require(0 < cfg.delta < 1, "delta", "a number in (0, 1)")
    if "edge_k" in raw:
        cfg.edge_k = _integer(raw["edge_k"], "edge_k", "an integer >= 1")
        _require(cfg.edge_k >= 1, "edge_k", "an integer >= 1")
    if "n_trials" in raw:
        cfg.n_trials = _integer(raw["n_trials"], "n_trials", "an integer >= 1")
    _require(cfg.n_trials >= 1, "n_trials", "an integer >= 1")
    if "seed" in raw:
        cfg.seed = _integer(raw["seed"], "seed", "an integer in [0, 2^64)")
    _require(0 <= cfg.seed < 2**64, "seed", "an integer in [0, 2^64)")
    for key in ("sweep_start", "sweep_stop", "sweep_step"):
        if key in raw:
            setattr(cfg, key, _number(raw[key], key))
    _require(cfg.sweep_step > 0, "sweep_step", "a number > 0")
    _require(cfg.sweep_stop >= cfg.sweep_start, "sweep_stop", "a number >= sweep_start")
    if "output_path" in raw:
        _require(isinstance(raw["output_path"], str) and raw["output_path"], "output_path", "a path")
        cfg.output_path = raw["output_path"]
    if "mode" in raw:
        _require(raw["mode"] in mc.MODES, "mode", f"one of {', '.join(mc.MODES)}")
        cfg.mode = raw["mode"]
    cfg.scene = _parse_scene(scene_raw)
    if "cooperative" in cfg.detectors:
        _require(cfg.scenario == "fig3-sweep" or len(cfg.scene.lbs_positions) == 1,
                 "detectors", "cooperative only with a single-LBS scene")
    return cfg


def parse_config(text: str) -> ExperimentConfig:
    try:
        raw = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    return config_from_dict(raw)


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, str):
        return '"' + v.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_toml_value(x) for x in v) + "]"
    raise TypeError(f"cannot render {v!r}")


def render_config(cfg: ExperimentConfig) -> str:
    data = asdict(cfg)
    scene = data.pop("scene")
    lines = [f"{k} = {_toml_value(v)}" for k, v in data.items() if v is not None]
    lines.append("")
    lines.append("[scene]")
    lines.extend(f"{k} = {_toml_value(v)}" for k, v in scene.items())
    return "\n".join(lines) + "\n"
