"""Command-line front end: ``sweep``, ``validate`` and ``trace``.

Exit codes: 0 success, 1 failed validation check, 2 configuration error.
The seed can be overridden with the ``FBSDETECT_SEED`` environment variable;
``--seed`` takes precedence over both it and the config file.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from dataclasses import asdict

import numpy as np

from . import montecarlo as mc
from . import validation
from .arsss import observe
from .channel import draw_channel
from .config import ConfigError, ExperimentConfig, config_from_dict, parse_config
from .detectors import cooperative_scores
from .priors import false_alarm_prob, log_f_max_pdf, scene_means
from .scr import scr_ml, scr_no_check, scr_sar_bound

SEED_ENV = "FBSDETECT_SEED"
CSV_COLUMNS = ("sweep_value", "detector", "scr", "ci95", "outage_rate", "n", "scr_analytic")


def _fmt(x) -> str:
    return f"{x:.6g}"


def analytic_scr(cfg: ExperimentConfig, scenario: mc.Scenario, value, spec: mc.DetectorSpec):
    """Analytic SCR under the Gaussian model, or None where no formula applies."""
    if cfg.scenario == "fig3-sweep" or spec.name == "cooperative":
        return None
    scene = scenario.scene(value, None)
    if not scene.has_fbs:
        return None
    model = scenario.ue_prior(value)
    u_fbs = float(scene_means(scene)[0, -1])
    if spec.name == "naive":
        return scr_no_check(model, u_fbs)
    if spec.name == "ml":
        return scr_ml(model, u_fbs)
    thr = spec.threshold(model)
    fa = float(false_alarm_prob(thr, model))
    return scr_sar_bound(model, u_fbs, thr, min(max(fa, 1e-300), 1 - 1e-16))


def write_sweep_csv(cfg: ExperimentConfig, path: str) -> None:
    scenario = cfg.build_scenario()
    specs = cfg.detector_specs()
    rows = mc.sweep(scenario, cfg.sweep_points(), specs, cfg.n_trials, cfg.seed, cfg.mode)
    by_name = {s.name: s for s in specs}
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            est = row.estimate
            a = analytic_scr(cfg, scenario, row.value, by_name[row.detector])
            writer.writerow([_fmt(row.value), row.detector, _fmt(est.p_hat), _fmt(est.ci_half_width),
                             _fmt(est.outage_rate), est.n_trials, "" if a is None else _fmt(a)])


def cmd_sweep(cfg: ExperimentConfig) -> int:
    try:
        write_sweep_csv(cfg, cfg.output_path)
    except OSError as exc:
        print(f"cannot write {cfg.output_path}: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {cfg.output_path}")
    return 0


def cmd_validate(seed: int = 0, out=None) -> int:
    out = out or sys.stdout
    results = validation.run_all(seed)
    for r in results:
        print(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}: {r.measured}", file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed", file=out)
    return 0 if failed == 0 else 1


def cmd_trace(cfg: ExperimentConfig, seed: int, value=None, out=None) -> int:
    out = out or sys.stdout
    p = lambda *a: print(*a, file=out)  # noqa: E731
    value = cfg.sweep_start if value is None else value
    scenario = cfg.build_scenario()
    rng = mc.trial_rng(seed, 0)
    scene = scenario.scene(value, rng)
    model = scenario.ue_prior(value)

    p(f"scenario {cfg.scenario}, sweep value {_fmt(value)}, seed {seed}, mode {cfg.mode}")
    p(f"P = {_fmt(scene.lbs_power_dbm)} dBm, P_fbs = {_fmt(scene.fbs_power_dbm)} dBm, "
      f"alpha = {_fmt(scene.alpha)}, sigma_psi^2 = {_fmt(scene.sigma_psi_sq)}, "
      f"sigma_h^2 = {_fmt(scene.sigma_h_sq)}, noise = {_fmt(scene.noise_power)}, "
      f"L = {scene.slots}, tau = {scene.ss_len}, delta = {_fmt(cfg.delta)}")
    p(f"LBS positions {scene.lbs_positions}; FBS {scene.fbs_position}; CNs {scene.cn_positions}")

    if cfg.mode == "gaussian":
        obs = mc.sample_gaussian_observation(scene, rng)
    else:
        draw = draw_channel(scene, rng)
        obs = observe(scene, draw, cfg.mode, rng)
        p("shadowing (dB), rows = UE then CNs:")
        for row in draw.shadowing_db:
            p("  " + " ".join(_fmt(v) for v in row))
        fading = np.mean(20 * np.log10(np.abs(draw.small_scale)), axis=-1)
        p("mean 20log10|h| over slots (dB):")
        for row in fading:
            p("  " + " ".join(_fmt(v) for v in row))

    labels = [f"LBS{m + 1}" for m in range(scene.num_lbs)] + (["FBS"] if scene.has_fbs else [])
    p("ARSSS at UE: " + ", ".join(f"{lab}={_fmt(v)}" for lab, v in zip(labels, obs.values_db)))
    p(f"prior u = [{', '.join(_fmt(u) for u in model.u_db)}], sigma_S = {_fmt(model.sigma_s_db)}")

    def show(idx):
        return "NoSafeSS" if idx == mc.NO_SAFE_SS else labels[idx]

    values = obs.values_db[None, :]
    for spec in cfg.detector_specs():
        if spec.name == "cooperative":
            if obs.per_cn_values_db is None or len(labels) != 2:
                p("cooperative: needs one LBS, the FBS and CN reports; skipped")
                continue
            cn_means = scene_means(scene)[1:, 0]
            own = scores = cooperative_scores(obs.values_db, np.zeros((0, 2)), model.u_db[0],
                                              np.zeros(0), model.sigma_s_db)
            for i, (vals, u_c) in enumerate(zip(obs.per_cn_values_db, cn_means)):
                contrib = cooperative_scores(vals, np.zeros((0, 2)), u_c, np.zeros(0), model.sigma_s_db)
                p(f"cooperative: CN{i + 1} u_C = {_fmt(u_c)}, ARSSS = "
                  f"[{', '.join(_fmt(v) for v in vals)}], log-density = "
                  f"[{', '.join(_fmt(v) for v in contrib)}]")
                scores = scores + contrib
            p(f"cooperative: UE log-density = [{', '.join(_fmt(v) for v in own)}], "
              f"total = [{', '.join(_fmt(v) for v in scores)}] -> {show(int(np.argmax(scores)))}")
            continue
        batch = mc.Batch(values=values, has_fbs=scene.has_fbs, ue_prior=model)
        idx = int(mc.decide(batch, spec)[0])
        if spec.name == "ml":
            dens = np.exp(log_f_max_pdf(obs.values_db, model))
            p(f"ml: f_max = [{', '.join(_fmt(d) for d in dens)}] -> {show(idx)}")
        elif spec.name == "naive":
            p(f"naive -> {show(idx)}")
        else:
            p(f"{spec.name}: threshold = {_fmt(spec.threshold(model))} dB -> {show(idx)}")
    return 0


def _load_config(args) -> ExperimentConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = parse_config(fh.read())
    else:
        cfg = config_from_dict({})
    if os.environ.get(SEED_ENV):
        try:
            cfg.seed = int(os.environ[SEED_ENV])
        except ValueError:
            raise ConfigError(f"{SEED_ENV} must be an integer") from None
    if getattr(args, "seed", None) is not None:
        cfg.seed = args.seed
    if not 0 <= cfg.seed < 2**64:
        raise ConfigError("invalid value for `seed`: expected an integer in [0, 2^64)")
    if getattr(args, "n", None) is not None:
        if args.n < 1:
            raise ConfigError("invalid value for `n_trials`: expected an integer >= 1")
        cfg.n_trials = args.n
    if getattr(args, "out", None):
        cfg.output_path = args.out
    if getattr(args, "detectors", None):
        # re-validate through the config layer
        raw = {"scenario": cfg.scenario, "detectors": args.detectors, "scene": asdict(cfg.scene)}
        cfg.detectors = config_from_dict(raw).detectors
    return cfg


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fbsdetect",
                                     description="Location-based fake base station detection experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML experiment config")
        sp.add_argument("--seed", type=int, help=f"base seed (overrides config and ${SEED_ENV})")
        sp.add_argument("--detectors", help="comma-separated detector list")

    sp = sub.add_parser("sweep", help="run an SCR sweep and write CSV")
    common(sp)
    sp.add_argument("--out", help="CSV output path")
    sp.add_argument("--n", type=int, help="trials per sweep point")

    sp = sub.add_parser("validate", help="run the built-in oracle checks")
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("trace", help="print one trial end to end")
    common(sp)
    sp.add_argument("--value", type=float, help="sweep value to trace (default: sweep start)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "validate":
            seed = args.seed if args.seed is not None else int(os.environ.get(SEED_ENV, 0))
            return cmd_validate(seed)
        cfg = _load_config(args)
    except (OSError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    if args.command == "sweep":
        return cmd_sweep(cfg)
    return cmd_trace(cfg, cfg.seed, args.value)


if __name__ == "__main__":
    sys.exit(main())
