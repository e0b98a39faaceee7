"""Matched-filter powers and the averaged received SS strength (ARSSS).

Two routes produce the same statistic: the signal route synthesizes every
slot, correlates against each SS and averages the dB powers; the fast route
skips the waveform and uses the noiseless per-link decomposition directly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelDraw, Scene, lt, make_ss_family, synthesize_rx_slot

MODES = ("signal", "fast")


@dataclass(frozen=True)
class ArsssObservation:
    """ARSSS values of one trial.

    ``values_db[m]`` is the UE's ARSSS of SS ``m`` (LBSs first, FBS last).
    ``per_cn_values_db`` has one row per cooperative node with the same
    column layout, or is None when the scene has no CNs.
    """

    values_db: np.ndarray
    per_cn_values_db: np.ndarray | None = None

    def __post_init__(self):
        if not np.all(np.isfinite(self.values_db)):
            raise ValueError("ARSSS values must be finite")
        if self.per_cn_values_db is not None and not np.all(np.isfinite(self.per_cn_values_db)):
            raise ValueError("CN ARSSS values must be finite")


def matched_filter_power(y, z) -> float:
    """|<y, z>|^2 / tau^2 for a length-tau sequence z with ||z||^2 = tau."""
    y = np.asarray(y)
    z = np.asarray(z)
    if y.shape != z.shape:
        raise ValueError(f"length mismatch: {y.shape} vs {z.shape}")
    tau = z.shape[-1]
    return float(np.abs(np.vdot(z, y)) ** 2 / tau**2)


def arsss_from_powers(powers) -> float:
    powers = np.asarray(powers, dtype=float)
    if np.any(powers <= 0):
        raise ValueError("matched-filter powers must be positive; got a zero-energy slot")
    return float(np.mean(lt(powers)))


def arsss_fast(u_m_db: float, small_scale) -> float:
    """U_m plus the slot average of 20*log10|h[l]|."""
    mag = np.abs(np.asarray(small_scale))
    if mag.size < 1:
        raise ValueError("need at least one slot")
    if np.any(mag == 0):
        raise ValueError("zero-magnitude small-scale gain")
    return float(u_m_db + np.mean(20.0 * np.log10(mag)))


def _fast_values(scene: Scene, draw: ChannelDraw) -> np.ndarray:
    mag = np.abs(draw.small_scale)
    if np.any(mag == 0):
        raise ValueError("zero-magnitude small-scale gain")
    u = scene.mean_level_db() + draw.shadowing_db
    return u + np.mean(20.0 * np.log10(mag), axis=-1)


def _signal_values(scene: Scene, draw: ChannelDraw, rng) -> np.ndarray:
    ss = make_ss_family(scene.num_tx, scene.ss_len)
    out = np.empty((scene.num_rx, scene.num_tx))
    for r in range(scene.num_rx):
        powers = np.empty((scene.num_tx, draw.slots))
        for slot in range(1, draw.slots + 1):
            y = synthesize_rx_slot(scene, draw, ss, slot, rng, receiver=r)
            for m in range(scene.num_tx):
                powers[m, slot - 1] = matched_filter_power(y, ss[m])
        out[r] = [arsss_from_powers(p) for p in powers]
    return out


def observe(scene: Scene, draw: ChannelDraw, mode: str = "fast",
            rng: np.random.Generator | None = None) -> ArsssObservation:
    """ARSSS of every SS at the UE and at each CN."""
    if draw.shadowing_db.shape != (scene.num_rx, scene.num_tx) or draw.slots != scene.slots:
        raise ValueError("channel draw does not match the scene dimensions")
    if mode == "fast":
        values = _fast_values(scene, draw)
    elif mode == "signal":
        values = _signal_values(scene, draw, rng)
    else:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    cn = values[1:] if scene.num_rx > 1 else None
    return ArsssObservation(values_db=values[0], per_cn_values_db=cn)
