"""Location-derived Gaussian model of the legitimate ARSSS values.

Knowing its own position and the LBS map, the UE predicts each legitimate
ARSSS as N(u_m, sigma_S^2).  This module supplies those moments, the
Gaussian special functions, the density of the strongest legitimate ARSSS,
and the threshold of the suspicious region.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .channel import Scene, lt

DB_PER_NEPER = 10.0 / math.log(10.0)
#: E[ln E] = -gamma for E ~ Exp(1); expressed in dB.
GAMMA_DB = DB_PER_NEPER * np.euler_gamma
#: Var[10 log10 E] for E ~ Exp(mean), whatever the mean.
LOG_FADING_VAR_DB = DB_PER_NEPER**2 * math.pi**2 / 6.0


def log_fading_mean_db(sigma_h_sq: float) -> float:
    """E[10 log10 |h|^2] for Rayleigh h with E|h|^2 = sigma_h_sq."""
    if not sigma_h_sq > 0:
        raise ValueError(f"sigma_h_sq must be > 0, got {sigma_h_sq}")
    return float(lt(sigma_h_sq) - GAMMA_DB)


def log_fading_var_db() -> float:
    return LOG_FADING_VAR_DB


def arsss_mean(power_dbm, distance_m, alpha: float, sigma_h_sq: float):
    """Mean ARSSS u = lt(sigma_h^2) + P[dBm] - alpha lt(d) - gamma_dB."""
    distance_m = np.asarray(distance_m, dtype=float)
    if np.any(distance_m <= 0):
        raise ValueError("distance must be positive")
    u = log_fading_mean_db(sigma_h_sq) + np.asarray(power_dbm, dtype=float) - alpha * lt(distance_m)
    return float(u) if u.ndim == 0 else u


def arsss_std(sigma_psi_sq: float, slots: float) -> float:
    """sigma_S = sqrt(sigma_Psi^2 + sigma_X^2 / L)."""
    if slots < 1:
        raise ValueError(f"slots must be >= 1, got {slots}")
    return math.sqrt(sigma_psi_sq + LOG_FADING_VAR_DB / slots)


def gaussian_q(x):
    """Upper tail of the standard normal."""
    return 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))


def gaussian_q_inv(p):
    p = np.asarray(p, dtype=float)
    if np.any((p <= 0) | (p >= 1)):
        raise ValueError("gaussian_q_inv needs p in (0, 1)")
    x = -special.ndtri(p)
    return float(x) if x.ndim == 0 else x


def scene_means(scene: Scene) -> np.ndarray:
    """Mean ARSSS of every (receiver, transmitter) link, shape (num_rx, num_tx)."""
    return arsss_mean(scene.tx_power_dbm[None, :], scene.distances(), scene.alpha, scene.sigma_h_sq)


@dataclass(frozen=True)
class PriorModel:
    u_db: np.ndarray
    sigma_s_db: float

    def __post_init__(self):
        u = np.atleast_1d(np.asarray(self.u_db, dtype=float))
        if u.ndim != 1 or u.size == 0:
            raise ValueError("u_db must be a nonempty 1-D list")
        if not self.sigma_s_db > 0:
            raise ValueError(f"sigma_s_db must be > 0, got {self.sigma_s_db}")
        object.__setattr__(self, "u_db", u)
        object.__setattr__(self, "sigma_s_db", float(self.sigma_s_db))

    @classmethod
    def from_scene(cls, scene: Scene, receiver: int = 0) -> "PriorModel":
        """Model of the LBS ARSSS values as seen from ``receiver`` (0 = UE)."""
        u = scene_means(scene)[receiver, : scene.num_lbs]
        return cls(u, arsss_std(scene.sigma_psi_sq, scene.slots))

    @property
    def num_lbs(self) -> int:
        return self.u_db.size

    def shifted(self, c: float) -> "PriorModel":
        return PriorModel(self.u_db + c, self.sigma_s_db)


def _standardize(x, model: PriorModel):
    x = np.asarray(x, dtype=float)
    return (x[..., None] - model.u_db) / model.sigma_s_db


def log_gaussian_pdf(x, mean, sigma):
    z = (np.asarray(x, dtype=float) - mean) / sigma
    return -0.5 * z * z - math.log(sigma) - 0.5 * math.log(2.0 * math.pi)


def log_f_max_pdf(x, model: PriorModel):
    """log density of the largest of M independent N(u_m, sigma_S^2)."""
    z = _standardize(x, model)
    log_f = -0.5 * z * z - math.log(model.sigma_s_db) - 0.5 * math.log(2.0 * math.pi)
    log_F = special.log_ndtr(z)
    # k-th term: f_k * prod_{m != k} F_m
    terms = log_f + (log_F.sum(axis=-1, keepdims=True) - log_F)
    return special.logsumexp(terms, axis=-1)


def f_max_pdf(x, model: PriorModel):
    out = np.exp(log_f_max_pdf(x, model))
    return float(out) if np.ndim(out) == 0 else out


def false_alarm_prob(threshold_db, model: PriorModel):
    """P{max_m S_m > threshold} under the model, 1 - prod_m (1 - Q((S - u_m)/sigma_S))."""
    z = _standardize(threshold_db, model)
    return -np.expm1(special.log_ndtr(z).sum(axis=-1))


def sar_threshold(model: PriorModel, delta: float, tol: float = 1e-12, max_iter: int = 200) -> float:
    """Bisection for the threshold whose false-alarm probability is ``delta``."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    s = model.sigma_s_db
    lo = model.u_db.min() - 10 * s
    hi = model.u_db.max() + 10 * s
    # widen for extreme delta; false_alarm_prob is decreasing in the threshold
    while false_alarm_prob(lo, model) < delta:
        lo -= 10 * s
    while false_alarm_prob(hi, model) > delta:
        hi += 10 * s
    mid = 0.5 * (lo + hi)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        p = false_alarm_prob(mid, model)
        if abs(p - delta) <= tol * delta:
            break
        if p > delta:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 4 * np.spacing(abs(mid) + 1.0):
            break
    return float(mid)


def sar_threshold_nearest(u1: float, sigma_s: float, delta: float) -> float:
    """Threshold when one LBS dominates: u_1 + sigma_S Q^-1(delta)."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    return float(u1 + sigma_s * gaussian_q_inv(delta))


def sar_threshold_edge(u1: float, sigma_s: float, delta: float, k: int) -> float:
    """Threshold when K LBSs share the largest mean u_1."""
    if k < 1:
        raise ValueError(f"K must be >= 1, got {k}")
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    per_station = -math.expm1(math.log1p(-delta) / k)
    return float(u1 + sigma_s * gaussian_q_inv(per_station))
