"""Monte Carlo estimation of the successful cheating rate.

Trial ``i`` of a run with base seed ``s`` draws all of its randomness
(geometry, shadowing, fading, noise) from ``SeedSequence(s, spawn_key=(i,))``,
so results do not depend on execution order and the same trial sees the
same draws under every detector and at every sweep point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .arsss import ArsssObservation, observe
from .channel import Scene, draw_channel, lt
from .detectors import (NO_SAFE_SS, choose_cooperative, choose_ml, choose_naive, choose_sar)
from .priors import (PriorModel, arsss_std, log_fading_mean_db, sar_threshold,
                     sar_threshold_edge, sar_threshold_nearest, scene_means)

DETECTORS = ("naive", "sar", "sar-approx-nearest", "sar-approx-edge", "ml", "cooperative")
MODES = ("fast", "signal", "gaussian")

CHEATED, NOT_CHEATED, OUTAGE = "cheated", "not-cheated", "outage"

# Fig. 2 geometry: UE at the origin, LBS distances 80/250/250 m
FIG2_LBS_POSITIONS = ((0.0, 80.0), (250.0, 0.0), (-250.0, 0.0))
FIG2_FBS_DISTANCE = 100.0
# Fig. 3 geometry (metres)
FIG3_LBS_DISTANCE = 100.0
FIG3_CN_RADIUS = 50.0
FIG3_FBS_INNER = 90.0
FIG3_FBS_OUTER = 150.0
FIG3_NUM_CN = 2


def trial_rng(base_seed: int, trial: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(base_seed, spawn_key=(trial,)))


@dataclass(frozen=True)
class DetectorSpec:
    name: str
    delta: float = 0.01
    edge_k: int | None = None

    def __post_init__(self):
        if self.name not in DETECTORS:
            raise ValueError(f"unknown detector {self.name!r}; expected one of {DETECTORS}")
        if not 0 < self.delta < 1:
            raise ValueError(f"delta must be in (0, 1), got {self.delta}")

    def threshold(self, model: PriorModel) -> float | None:
        """SAR threshold for this detector, or None for non-SAR rules."""
        if self.name == "sar":
            return sar_threshold(model, self.delta)
        u1 = float(model.u_db.max())
        if self.name == "sar-approx-nearest":
            return sar_threshold_nearest(u1, model.sigma_s_db, self.delta)
        if self.name == "sar-approx-edge":
            k = self.edge_k if self.edge_k is not None else default_edge_k(model)
            return sar_threshold_edge(u1, model.sigma_s_db, self.delta, k)
        return None


def default_edge_k(model: PriorModel) -> int:
    """Number of LBSs whose mean lies within one sigma_S of the strongest."""
    return int(np.sum(model.u_db >= model.u_db.max() - model.sigma_s_db))


@dataclass(frozen=True)
class ScrEstimate:
    p_hat: float
    n_trials: int
    ci_half_width: float
    outage_rate: float = 0.0

    @classmethod
    def from_counts(cls, cheated: int, outage: int, n: int) -> "ScrEstimate":
        if n < 1:
            raise ValueError("need at least one trial")
        p = cheated / n
        return cls(p, n, 1.96 * math.sqrt(p * (1.0 - p) / n), outage / n)


# -- scenarios ---------------------------------------------------------------

def fbs_power_for_mean(u_fbs_db: float, distance_m: float, alpha: float, sigma_h_sq: float) -> float:
    """Transmit power (dBm) whose mean ARSSS at ``distance_m`` equals ``u_fbs_db``."""
    return u_fbs_db - log_fading_mean_db(sigma_h_sq) + alpha * float(lt(distance_m))


def gen_fig2_scene(u_fbs_db: float | None, **overrides) -> tuple[Scene, PriorModel]:
    """Three-LBS scene with the FBS power set to realize mean ARSSS ``u_fbs_db``.

    ``None`` gives the LBS-only scene.  Keyword overrides replace Scene fields.
    """
    base = Scene(lbs_positions=FIG2_LBS_POSITIONS, fbs_position=(0.0, -FIG2_FBS_DISTANCE))
    scene = replace(base, **overrides)
    if u_fbs_db is None:
        scene = replace(scene, fbs_position=None)
    else:
        d = float(np.hypot(*np.subtract(scene.fbs_position, scene.ue_position)))
        power = fbs_power_for_mean(u_fbs_db, d, scene.alpha, scene.sigma_h_sq)
        scene = replace(scene, fbs_power_dbm=power)
    return scene, PriorModel.from_scene(scene)


def _uniform_disk(rng, n: int, r_inner: float, r_outer: float) -> np.ndarray:
    # inverse CDF of the area-uniform radius on an annulus
    r = np.sqrt(rng.uniform(size=n) * (r_outer**2 - r_inner**2) + r_inner**2)
    theta = rng.uniform(0.0, 2.0 * np.pi, size=n)
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])


def gen_fig3_realization(rng: np.random.Generator, fbs_power_dbm: float = 40.0,
                         r_lbs: float = FIG3_LBS_DISTANCE, r_cn: float = FIG3_CN_RADIUS,
                         r_inner: float = FIG3_FBS_INNER, r_outer: float = FIG3_FBS_OUTER,
                         num_cn: int = FIG3_NUM_CN, **overrides) -> Scene:
    """Random geometry: UE at the origin, one LBS at (0, r_lbs), FBS in an annulus, CNs in a disk."""
    fbs = _uniform_disk(rng, 1, r_inner, r_outer)[0]
    cns = _uniform_disk(rng, num_cn, 0.0, r_cn)
    return Scene(lbs_positions=[(0.0, r_lbs)], fbs_position=tuple(fbs),
                 cn_positions=[tuple(c) for c in cns], fbs_power_dbm=fbs_power_dbm, **overrides)


class Scenario:
    """Maps a sweep value and a trial rng to a Scene."""

    def scene(self, value, rng) -> Scene:
        raise NotImplementedError

    def ue_prior(self, value) -> PriorModel:
        raise NotImplementedError


class Fig2Scenario(Scenario):
    """Sweep over the FBS mean ARSSS u_fbs (dB)."""

    def __init__(self, **overrides):
        self.overrides = overrides
        self._cache = {}

    def _get(self, value):
        if value not in self._cache:
            self._cache[value] = gen_fig2_scene(value, **self.overrides)
        return self._cache[value]

    def scene(self, value, rng) -> Scene:
        return self._get(value)[0]

    def ue_prior(self, value) -> PriorModel:
        return self._get(value)[1]


class Fig3Scenario(Scenario):
    """Sweep over the FBS transmit power (dBm) with a fresh geometry per trial."""

    def __init__(self, **params):
        self.params = params

    def scene(self, value, rng) -> Scene:
        return gen_fig3_realization(rng, fbs_power_dbm=value, **self.params)

    def ue_prior(self, value) -> PriorModel:
        keys = ("alpha", "sigma_h_sq", "sigma_psi_sq", "slots", "lbs_power_dbm")
        kw = {k: self.params[k] for k in keys if k in self.params}
        r_lbs = self.params.get("r_lbs", FIG3_LBS_DISTANCE)
        scene = Scene(lbs_positions=[(0.0, r_lbs)], fbs_position=None, **kw)
        return PriorModel.from_scene(scene)


class SceneScenario(Scenario):
    """Fixed user-supplied geometry; the sweep value is the FBS power (dBm)."""

    def __init__(self, scene: Scene):
        self.base = scene

    def scene(self, value, rng) -> Scene:
        return self.base if value is None else replace(self.base, fbs_power_dbm=value)

    def ue_prior(self, value) -> PriorModel:
        return PriorModel.from_scene(self.base)


# -- trial execution -----------------------------------------------------------

def sample_gaussian_observation(scene: Scene, rng: np.random.Generator) -> ArsssObservation:
    """ARSSS drawn straight from the asymptotic N(u, sigma_S^2) law of every link."""
    means = scene_means(scene)
    values = means + arsss_std(scene.sigma_psi_sq, scene.slots) * rng.standard_normal(means.shape)
    return ArsssObservation(values[0], values[1:] if scene.num_rx > 1 else None)


def observe_trial(scene: Scene, rng: np.random.Generator, mode: str = "fast") -> ArsssObservation:
    if mode == "gaussian":
        return sample_gaussian_observation(scene, rng)
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return observe(scene, draw_channel(scene, rng), mode, rng)


@dataclass
class Batch:
    """Observations of n trials at one sweep point, shared by every detector."""

    values: np.ndarray
    has_fbs: bool
    ue_prior: PriorModel
    cn_values: np.ndarray | None = None
    cn_means: np.ndarray | None = None
    scenes: list = field(default_factory=list, repr=False)

    @property
    def n(self) -> int:
        return self.values.shape[0]


def simulate(scenario: Scenario, value, n: int, base_seed: int, mode: str = "fast",
             keep_scenes: bool = False) -> Batch:
    if n < 1:
        raise ValueError(f"need n >= 1 trials, got {n}")
    values, cn_values, cn_means, scenes = [], [], [], []
    has_fbs = False
    for i in range(n):
        rng = trial_rng(base_seed, i)
        scene = scenario.scene(value, rng)
        has_fbs = scene.has_fbs
        obs = observe_trial(scene, rng, mode)
        values.append(obs.values_db)
        if obs.per_cn_values_db is not None:
            cn_values.append(obs.per_cn_values_db)
            cn_means.append(scene_means(scene)[1:, 0])
        if keep_scenes:
            scenes.append(scene)
    return Batch(
        values=np.array(values), has_fbs=has_fbs, ue_prior=scenario.ue_prior(value),
        cn_values=np.array(cn_values) if cn_values else None,
        cn_means=np.array(cn_means) if cn_means else None, scenes=scenes)


def decide(batch: Batch, detector: DetectorSpec) -> np.ndarray:
    """Chosen SS index per trial (NO_SAFE_SS for a SAR rejection)."""
    model = batch.ue_prior
    if detector.name == "naive":
        return choose_naive(batch.values)
    if detector.name == "ml":
        return choose_ml(batch.values, model)
    if detector.name == "cooperative":
        if batch.values.shape[1] != 2:
            raise ValueError("cooperative detection needs exactly one LBS and the FBS")
        if batch.cn_values is None:
            cn_values = np.zeros((batch.n, 0, 2))
            cn_means = np.zeros((batch.n, 0))
        else:
            cn_values, cn_means = batch.cn_values, batch.cn_means
        return choose_cooperative(batch.values, cn_values, model.u_db[0], cn_means, model.sigma_s_db)
    return choose_sar(batch.values, detector.threshold(model))


def classify(choices: np.ndarray, num_tx: int, has_fbs: bool) -> np.ndarray:
    out = np.full(choices.shape, NOT_CHEATED, dtype=object)
    if has_fbs:
        out[choices == num_tx - 1] = CHEATED
    out[choices == NO_SAFE_SS] = OUTAGE
    return out


def estimate_from_batch(batch: Batch, detector: DetectorSpec) -> ScrEstimate:
    choices = decide(batch, detector)
    cheated = int(np.sum(choices == batch.values.shape[1] - 1)) if batch.has_fbs else 0
    return ScrEstimate.from_counts(cheated, int(np.sum(choices == NO_SAFE_SS)), batch.n)


def _as_scenario(target) -> Scenario:
    return SceneScenario(target) if isinstance(target, Scene) else target


def estimate_scr(target, detector: DetectorSpec | str, n: int, base_seed: int = 0,
                 value=None, mode: str = "fast") -> ScrEstimate:
    """SCR of ``detector`` over ``n`` trials of a Scene or Scenario at sweep point ``value``."""
    if isinstance(detector, str):
        detector = DetectorSpec(detector)
    batch = simulate(_as_scenario(target), value, n, base_seed, mode)
    return estimate_from_batch(batch, detector)


@dataclass(frozen=True)
class Trial:
    seed: int
    scene: Scene
    detector: DetectorSpec
    mode: str = "fast"


def run_trial(trial: Trial) -> str:
    """Outcome of one trial: 'cheated', 'not-cheated' or 'outage'."""
    batch = simulate(SceneScenario(trial.scene), None, 1, trial.seed, trial.mode)
    choices = decide(batch, trial.detector)
    return classify(choices, batch.values.shape[1], batch.has_fbs)[0]


@dataclass(frozen=True)
class SweepRow:
    value: float
    detector: str
    estimate: ScrEstimate


def sweep(scenario: Scenario, points, detectors, n: int, base_seed: int = 0,
          mode: str = "fast") -> list[SweepRow]:
    """One ScrEstimate per (point, detector); all detectors see the same trials."""
    points = list(points)
    if not points:
        raise ValueError("sweep needs at least one point")
    specs = [d if isinstance(d, DetectorSpec) else DetectorSpec(d) for d in detectors]
    rows = []
    for value in points:
        batch = simulate(scenario, value, n, base_seed, mode)
        rows.extend(SweepRow(value, d.name, estimate_from_batch(batch, d)) for d in specs)
    return rows
