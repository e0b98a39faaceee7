"""Built-in oracle checks run by ``fbsdetect validate``.

Each check is cheap enough for an interactive run (seconds) and compares an
implementation path against an independent estimate: raw Monte Carlo of the
fading statistics, brute-force signal synthesis, or a second integration
route.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import montecarlo as mc
from .arsss import observe
from .channel import Scene, draw_channel
from .priors import (GAMMA_DB, LOG_FADING_VAR_DB, PriorModel, arsss_std, false_alarm_prob,
                     sar_threshold)
from .scr import scr_ml, scr_ml_nearest, scr_no_check


@dataclass
class CheckResult:
    name: str
    passed: bool
    measured: str


def check_log_fading_moments(seed: int) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    x = 10 * np.log10(rng.exponential(size=2_000_000))
    mean, var = x.mean(), x.var(ddof=1)
    return [
        CheckResult("log-fading mean (-gamma_dB)", abs(mean + GAMMA_DB) < 0.02,
                    f"{mean:.4f} vs {-GAMMA_DB:.4f}"),
        CheckResult("sigma_X^2", abs(var - LOG_FADING_VAR_DB) < 0.2,
                    f"{var:.3f} vs {LOG_FADING_VAR_DB:.3f}"),
    ]


def check_arsss_moments(seed: int, n: int = 20_000) -> list[CheckResult]:
    batch = mc.simulate(mc.Fig2Scenario(), None, n, seed)
    model = batch.ue_prior
    s1 = batch.values[:, 0]
    se_mean = model.sigma_s_db / np.sqrt(n)
    var_expected = model.sigma_s_db**2
    se_var = var_expected * np.sqrt(2.0 / (n - 1))
    return [
        CheckResult("E[S_1] = u_1", abs(s1.mean() - model.u_db[0]) < 4 * se_mean,
                    f"{s1.mean():.4f} vs {model.u_db[0]:.4f}"),
        CheckResult("Var[S_1] = sigma_S^2", abs(s1.var(ddof=1) - var_expected) < 4 * se_var,
                    f"{s1.var(ddof=1):.4f} vs {var_expected:.4f}"),
    ]


def check_signal_fast_equivalence(seed: int, scenes: int = 20) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(scenes):
        m = int(rng.integers(1, 5))
        pts = rng.uniform(-300, 300, size=(m + 1, 2))
        scene = Scene(lbs_positions=pts[:m], fbs_position=pts[m], ue_position=(0.5, 0.5),
                      fbs_power_dbm=float(rng.uniform(20, 60)), ss_len=16)
        draw = draw_channel(scene, rng)
        diff = observe(scene, draw, "signal").values_db - observe(scene, draw, "fast").values_db
        worst = max(worst, float(np.max(np.abs(diff))))
    return CheckResult("signal vs fast ARSSS", worst < 1e-9, f"max |diff| = {worst:.2e} dB")


def check_false_alarm(seed: int, n: int = 20_000, delta: float = 0.01) -> list[CheckResult]:
    batch = mc.simulate(mc.Fig2Scenario(), None, n, seed)
    model = batch.ue_prior
    thr = sar_threshold(model, delta)
    rate = float(np.mean(batch.values.max(axis=1) > thr))
    fa = float(false_alarm_prob(thr, model))
    return [
        CheckResult("SAR threshold solves P_FA = delta", abs(fa - delta) < 1e-9,
                    f"threshold {thr:.4f} dB, P_FA {fa:.3e}"),
        CheckResult("empirical false alarm in [0.005, 0.02]", 0.005 <= rate <= 0.02, f"{rate:.4f}"),
    ]


def check_symmetry(seed: int, n: int = 20_000) -> list[CheckResult]:
    model = PriorModel([-20.0], arsss_std(3.0, 10))
    analytic = scr_no_check(model, -20.0)
    scene = Scene(lbs_positions=[(0.0, 80.0)], fbs_position=(80.0, 0.0))
    est = mc.estimate_scr(scene, "naive", n, seed)
    return [
        CheckResult("analytic no-check SCR at u_fbs = u_1", abs(analytic - 0.5) < 1e-6, f"{analytic:.8f}"),
        CheckResult("simulated no-check SCR at u_fbs = u_1", abs(est.p_hat - 0.5) < 0.02, f"{est.p_hat:.4f}"),
    ]


def check_analytic_vs_mc(seed: int, n: int = 5_000) -> list[CheckResult]:
    sc = mc.Fig2Scenario()
    model = sc.ue_prior(None)
    out = []
    for k in (-1.0, 0.0, 2.0):
        u = float(model.u_db[0] + k * model.sigma_s_db)
        est = mc.estimate_scr(sc, "naive", n, seed, value=u, mode="gaussian")
        a = scr_no_check(model, u)
        out.append(CheckResult(f"no-check SCR analytic vs MC at u_1{k:+.0f}sigma",
                               abs(a - est.p_hat) <= max(3 * est.ci_half_width, 1e-3),
                               f"{a:.4f} vs {est.p_hat:.4f} +- {est.ci_half_width:.4f}"))
    return out


def check_ml_routes() -> CheckResult:
    model = PriorModel([0.0], 1.0)
    worst = max(abs(scr_ml(model, u) - scr_ml_nearest(0.0, 1.0, u)) for u in (-2.0, 0.0, 1.0, 3.0))
    return CheckResult("ML SCR grid vs closed region (M=1)", worst < 1e-4, f"max |diff| = {worst:.2e}")


def run_all(seed: int = 0) -> list[CheckResult]:
    results = []
    results += check_log_fading_moments(seed)
    results += check_arsss_moments(seed)
    results.append(check_signal_fast_equivalence(seed))
    results += check_false_alarm(seed)
    results += check_symmetry(seed)
    results += check_analytic_vs_mc(seed)
    results.append(check_ml_routes())
    return results
