"""Compare the naive, SAR and ML decisions on a handful of observations."""
import numpy as np

from fbsdetect import montecarlo as mc
from fbsdetect.detectors import detect_ml, detect_naive, detect_sar
from fbsdetect.priors import false_alarm_prob, sar_threshold, sar_threshold_edge, sar_threshold_nearest

scene, model = mc.gen_fig2_scene(-15.0)
print("prior means:", np.round(model.u_db, 3), "sigma_S:", round(model.sigma_s_db, 3))

# SAR threshold for a 1% false-alarm budget, plus the two cheap approximations
thr = sar_threshold(model, 0.01)
print(f"exact threshold  {thr:.4f} dB, P_FA = {false_alarm_prob(thr, model):.2e}")
print(f"nearest-LBS approximation {sar_threshold_nearest(model.u_db[0], model.sigma_s_db, 0.01):.4f} dB")
print(f"edge approximation (K=1)  {sar_threshold_edge(model.u_db[0], model.sigma_s_db, 0.01, 1):.4f} dB")

labels = ["LBS1", "LBS2", "LBS3", "FBS"]
for i in range(6):
    obs = mc.observe_trial(scene, mc.trial_rng(3, i))
    naive = detect_naive(obs.values_db)
    sar = detect_sar(obs.values_db, thr)
    ml = detect_ml(obs.values_db, model)
    show = lambda d: "NoSafeSS" if d.no_safe_ss else labels[d.index]  # noqa: E731
    print(np.round(obs.values_db, 2), "naive:", show(naive), "sar:", show(sar), "ml:", show(ml))
