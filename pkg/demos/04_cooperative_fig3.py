"""Random-geometry sweep over FBS power with two cooperative nodes."""
import numpy as np

from fbsdetect import montecarlo as mc

scenario = mc.Fig3Scenario()
powers = np.arange(30.0, 61.0, 5.0)
rows = mc.sweep(scenario, powers, ["naive", "sar", "ml", "cooperative"], 2000, base_seed=0)

print(f"{'P_fbs':>6}" + "".join(f"{d:>13}" for d in ("naive", "sar", "ml", "cooperative")))
for p in powers:
    est = {r.detector: r.estimate for r in rows if r.value == p}
    print(f"{p:6.0f}" + "".join(f"{est[d].p_hat:13.4f}" for d in ("naive", "sar", "ml", "cooperative")))
# a weak FBS is rarely chosen and a very strong one is obviously fake, so
# the proposed detectors peak at moderate power; CN reports push it lower
