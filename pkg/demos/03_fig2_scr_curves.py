"""SCR against the FBS mean ARSSS: analytic curves next to simulation."""
import numpy as np

from fbsdetect import montecarlo as mc
from fbsdetect.priors import sar_threshold
from fbsdetect.scr import scr_ml, scr_no_check, scr_sar_bound

scenario = mc.Fig2Scenario()
model = scenario.ue_prior(None)
thr = sar_threshold(model, 0.01)
points = np.arange(-30.0, 0.1, 3.0)

# every detector sees the same 4000 trials at each point
rows = mc.sweep(scenario, points, ["naive", "sar", "ml"], 4000, base_seed=0)
sim = {(r.value, r.detector): r.estimate.p_hat for r in rows}

print(f"{'u_fbs':>7} | {'naive':>13} | {'sar (bound)':>13} | {'ml':>13}")
for u in points:
    a = (scr_no_check(model, u), scr_sar_bound(model, u, thr, 0.01), scr_ml(model, u))
    s = (sim[u, "naive"], sim[u, "sar"], sim[u, "ml"])
    print(f"{u:7.1f} | " + " | ".join(f"{x:.3f} / {y:.3f}" for x, y in zip(a, s)))
# naive rises to one, SAR peaks near the threshold and falls back,
# ML peaks near u_1 and decays fastest
