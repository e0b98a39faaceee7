"""Walk through one cell-selection snapshot: geometry, channel draw, ARSSS."""
import numpy as np

from fbsdetect.arsss import observe
from fbsdetect.channel import Scene, draw_channel
from fbsdetect.priors import PriorModel, scene_means

# three legitimate stations and one fake station 100 m south of the UE
scene = Scene(lbs_positions=[(0, 80), (250, 0), (-250, 0)], fbs_position=(0, -100),
              fbs_power_dbm=40.0)
print("link distances (m):", np.round(scene.distances()[0], 1))

# expected ARSSS per transmitter, and the common spread sigma_S
means = scene_means(scene)[0]
model = PriorModel.from_scene(scene)
print("mean ARSSS (dB):", np.round(means, 3))
print("sigma_S (dB):", round(model.sigma_s_db, 4))

rng = np.random.default_rng(1)
draw = draw_channel(scene, rng)
print("shadowing (dB):", np.round(draw.shadowing_db[0], 2))

# the fast route uses powers directly, the signal route correlates
# synthesized received slots against the known sequences
fast = observe(scene, draw, "fast").values_db
sig = observe(scene, draw, "signal").values_db
print("ARSSS fast  :", np.round(fast, 4))
print("ARSSS signal:", np.round(sig, 4))
print("max difference (dB):", np.abs(fast - sig).max())

# the spread across many draws should match sigma_S
samples = np.array([observe(scene, draw_channel(scene, rng)).values_db for _ in range(5000)])
print("empirical mean:", np.round(samples.mean(axis=0), 2))
print("empirical std :", np.round(samples.std(axis=0), 3))
