"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also collected into an "acceptance criteria" section of the summary.
"""
import time

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES, SBAR_FIG2, SIGMA_S_FIG2, U1_FIG2
from fbsdetect import montecarlo as mc
from fbsdetect.arsss import observe
from fbsdetect.channel import Scene, draw_channel
from fbsdetect.cli import cmd_sweep
from fbsdetect.config import config_from_dict
from fbsdetect.detectors import choose_ml
from fbsdetect.priors import PriorModel, sar_threshold
from fbsdetect.scr import scr_ml, scr_ml_nearest, scr_no_check, scr_sar_bound

SEED = 2026


def report(num: int, passed: bool, measured: str) -> None:
    line = f"[{'PASS' if passed else 'FAIL'}] criterion {num}: {measured}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    assert passed, line


def test_criterion_01_moment_calibration():
    t0 = time.perf_counter()
    batch = mc.simulate(mc.Fig2Scenario(), None, 100_000, SEED)
    elapsed = time.perf_counter() - t0
    s1 = batch.values[:, 0]
    mean, var = float(s1.mean()), float(s1.var(ddof=1))
    ok = abs(mean + 19.60) <= 0.03 and abs(var - 6.10) <= 0.15 and elapsed < 10
    report(1, ok, f"mean {mean:.4f} dB (target -19.60 +- 0.03), var {var:.4f} dB^2 "
                  f"(target 6.10 +- 0.15), {elapsed:.1f} s (< 10 s)")


def test_criterion_02_signal_fast_equivalence():
    rng = np.random.default_rng(SEED)
    worst = 0.0
    for _ in range(1000):
        m = int(rng.integers(1, 5))
        pts = rng.uniform(-400, 400, size=(m + 2, 2))
        scene = Scene(lbs_positions=pts[:m], fbs_position=pts[m], ue_position=pts[m + 1],
                      lbs_power_dbm=float(rng.uniform(20, 50)), fbs_power_dbm=float(rng.uniform(10, 70)),
                      alpha=float(rng.uniform(2, 4)), slots=int(rng.integers(1, 12)), ss_len=16)
        draw = draw_channel(scene, rng)
        diff = observe(scene, draw, "signal").values_db - observe(scene, draw, "fast").values_db
        worst = max(worst, float(np.max(np.abs(diff))))
    report(2, worst <= 1e-9, f"max |signal - fast| over 1000 scenes = {worst:.2e} dB (<= 1e-9)")


def test_criterion_03_sar_calibration():
    scenario = mc.Fig2Scenario()
    batch = mc.simulate(scenario, None, 100_000, SEED + 3)
    thr = sar_threshold(batch.ue_prior, 0.01)
    rate = float(np.mean(batch.values.max(axis=1) > thr))
    report(3, 0.005 <= rate <= 0.02, f"empirical P(S_max > {thr:.4f}) = {rate:.5f} (in [0.005, 0.02])")


def test_criterion_04_symmetry():
    # one LBS and the FBS at equal distance and power: u_fbs = u_1
    scene = Scene(lbs_positions=[(0.0, 80.0)], fbs_position=(80.0, 0.0))
    est = mc.estimate_scr(scene, "naive", 100_000, SEED + 4)
    model = PriorModel.from_scene(Scene(lbs_positions=[(0.0, 80.0)], fbs_position=None))
    u1 = float(model.u_db[0])
    analytic = scr_no_check(model, u1)
    ok = abs(est.p_hat - 0.5) <= 0.01 and abs(analytic - 0.5) <= 1e-6
    report(4, ok, f"simulated SCR {est.p_hat:.4f} (0.500 +- 0.01), analytic {analytic:.9f} (0.5 +- 1e-6)")


def test_criterion_05_analytic_vs_simulation():
    scenario = mc.Fig2Scenario()
    model = scenario.ue_prior(None)
    u1, s = float(model.u_db[0]), model.sigma_s_db
    t0 = time.perf_counter()
    parts, ok = [], True
    for u in np.linspace(u1 - 2 * s, u1 + 5 * s, 5):
        a = scr_no_check(model, float(u))
        g = mc.estimate_scr(scenario, "naive", 10_000, SEED + 5, value=float(u), mode="gaussian")
        f = mc.estimate_scr(scenario, "naive", 10_000, SEED + 5, value=float(u), mode="fast")
        g_ok = abs(a - g.p_hat) <= 3 * g.ci_half_width
        f_ok = abs(a - f.p_hat) <= max(0.02, 3 * f.ci_half_width)
        ok &= g_ok and f_ok
        parts.append(f"u={u:.2f}: a={a:.4f} gauss={g.p_hat:.4f}+-{g.ci_half_width:.4f} "
                     f"full={f.p_hat:.4f}{'' if g_ok and f_ok else ' (miss)'}")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 60
    report(5, ok, "; ".join(parts) + f"; {elapsed:.1f} s (< 60 s)")


def test_criterion_06_fig2_qualitative():
    scenario = mc.Fig2Scenario()
    model = scenario.ue_prior(None)
    u1, s = float(model.u_db[0]), model.sigma_s_db
    thr = sar_threshold(model, 0.01)
    naive_hi = mc.estimate_scr(scenario, "naive", 10_000, SEED + 6, value=u1 + 5 * s)
    far = mc.simulate(scenario, thr + 3 * s, 10_000, SEED + 6)
    sar_far = mc.estimate_from_batch(far, mc.DetectorSpec("sar"))
    ml_far = mc.estimate_from_batch(far, mc.DetectorSpec("ml"))
    mid = mc.simulate(scenario, u1 + 2 * s, 10_000, SEED + 6)
    sar_mid = mc.estimate_from_batch(mid, mc.DetectorSpec("sar"))
    ml_mid = mc.estimate_from_batch(mid, mc.DetectorSpec("ml"))
    slack = 2 * max(sar_mid.ci_half_width, ml_mid.ci_half_width)
    ok = (naive_hi.p_hat >= 0.99 and sar_far.p_hat <= 0.05 and ml_far.p_hat <= 0.05
          and ml_mid.p_hat <= sar_mid.p_hat + slack)
    report(6, ok, f"naive at u1+5s {naive_hi.p_hat:.4f} (>= 0.99); at Sbar+3s SAR {sar_far.p_hat:.4f}, "
                  f"ML {ml_far.p_hat:.4f} (<= 0.05); at u1+2s ML {ml_mid.p_hat:.4f} <= "
                  f"SAR {sar_mid.p_hat:.4f} + {slack:.4f}")


def test_fig2_reference_constants(fig2_model):
    assert fig2_model.u_db[0] == pytest.approx(U1_FIG2, abs=1e-9)
    assert fig2_model.sigma_s_db == pytest.approx(SIGMA_S_FIG2, abs=1e-9)
    assert sar_threshold(fig2_model, 0.01) == pytest.approx(SBAR_FIG2, abs=1e-7)


def test_criterion_07_sar_bound():
    scenario = mc.Fig2Scenario()
    model = scenario.ue_prior(None)
    thr = sar_threshold(model, 0.01)
    points = config_from_dict({}).sweep_points()
    rows = mc.sweep(scenario, points, ["sar"], 10_000, SEED + 7)
    worst, ok = -np.inf, True
    for r in rows:
        bound = scr_sar_bound(model, r.value, thr, 0.01)
        margin = r.estimate.p_hat - (bound + 2 * r.estimate.ci_half_width)
        worst = max(worst, margin)
        ok &= margin <= 0
    report(7, ok, f"{len(rows)} points, max (MC - bound - 2CI) = {worst:.4f} (<= 0)")


def test_criterion_08_ml_cross_check():
    rng = np.random.default_rng(SEED + 8)
    model = PriorModel([U1_FIG2], SIGMA_S_FIG2)
    n = 1_000_000
    parts, ok = [], True
    for k in (-1.0, 0.0, 1.0, 2.5):
        u = U1_FIG2 + k * SIGMA_S_FIG2
        grid = scr_ml(model, u)
        closed = scr_ml_nearest(U1_FIG2, SIGMA_S_FIG2, u)
        s = np.column_stack([rng.normal(U1_FIG2, SIGMA_S_FIG2, n), rng.normal(u, SIGMA_S_FIG2, n)])
        p = float(np.mean(choose_ml(s, model) == 1))
        se = np.sqrt(max(p * (1 - p), 1.0 / n) / n)
        this = abs(grid - closed) <= 1e-4 and abs(grid - p) <= 3 * se and abs(closed - p) <= 3 * se
        ok &= this
        parts.append(f"k={k:+.1f}: grid {grid:.6f} closed {closed:.6f} MC {p:.6f}+-{se:.6f}")
    report(8, ok, "; ".join(parts))


def test_criterion_09_fig3_reproduction():
    scenario = mc.Fig3Scenario()
    points = [float(p) for p in np.arange(30.0, 60.0 + 1e-9, 2.0)]
    t0 = time.perf_counter()
    rows = mc.sweep(scenario, points, ["naive", "ml", "cooperative"], 10_000, SEED + 9)
    elapsed = time.perf_counter() - t0
    est = {(r.value, r.detector): r.estimate for r in rows}

    coop_ok = all(
        est[p, "cooperative"].p_hat <= est[p, "ml"].p_hat
        + 2 * max(est[p, "cooperative"].ci_half_width, est[p, "ml"].ci_half_width)
        for p in points)

    def interior_max(name):
        i = int(np.argmax([est[p, name].p_hat for p in points]))
        return 0 < i < len(points) - 1, points[i]

    ml_in, ml_at = interior_max("ml")
    co_in, co_at = interior_max("cooperative")
    naive_ok = all(
        est[b, "naive"].p_hat >= est[a, "naive"].p_hat
        - max(est[a, "naive"].ci_half_width, est[b, "naive"].ci_half_width)
        for a, b in zip(points, points[1:]))
    ok = coop_ok and ml_in and co_in and naive_ok and elapsed < 300
    report(9, ok, f"coop <= ML+2CI everywhere: {coop_ok}; ML max at {ml_at:g} dBm, coop max at "
                  f"{co_at:g} dBm (interior: {ml_in and co_in}); naive nondecreasing: {naive_ok}; "
                  f"{elapsed:.0f} s (< 300 s)")


def test_criterion_10_determinism(tmp_path):
    blobs = []
    for i in range(2):
        cfg = config_from_dict({"seed": 7, "output_path": str(tmp_path / f"run{i}.csv")})
        assert cmd_sweep(cfg) == 0
        blobs.append((tmp_path / f"run{i}.csv").read_bytes())
    report(10, blobs[0] == blobs[1] and len(blobs[0]) > 0,
           f"two default fig2 sweeps, {len(blobs[0])} bytes each, identical: {blobs[0] == blobs[1]}")
