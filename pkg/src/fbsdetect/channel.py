"""Scene geometry and stochastic channel realization.

A :class:`Scene` holds the positions of the legitimate base stations (LBSs),
the fake base station (FBS), the user equipment (UE) and any cooperative
nodes (CNs), together with the radio parameters shared by every link.

Receivers are indexed with the UE first (row 0) followed by the CNs.
Transmitters are indexed with the M LBSs first and the FBS last, so the
FBS is always transmitter ``M`` (0-based) when present.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

Point = tuple[float, float]


def dbm_to_mw(power_dbm):
    return 10.0 ** (np.asarray(power_dbm, dtype=float) / 10.0)


def lt(x):
    """10*log10(x), the dB map used throughout."""
    return 10.0 * np.log10(x)


def link_distance(a, b) -> float:
    """Euclidean distance between two 2-D points in metres."""
    return float(np.hypot(b[0] - a[0], b[1] - a[1]))


def _as_points(points) -> tuple[Point, ...]:
    return tuple((float(p[0]), float(p[1])) for p in points)


@dataclass(frozen=True)
class Scene:
    lbs_positions: tuple[Point, ...]
    fbs_position: Point | None
    ue_position: Point = (0.0, 0.0)
    cn_positions: tuple[Point, ...] = ()
    lbs_power_dbm: float = 40.0
    fbs_power_dbm: float = 40.0
    alpha: float = 3.0
    sigma_psi_sq: float = 3.0
    sigma_h_sq: float = 1.0
    noise_power: float = 0.0
    slots: int = 10
    ss_len: int = 64

    def __post_init__(self):
        object.__setattr__(self, "lbs_positions", _as_points(self.lbs_positions))
        object.__setattr__(self, "cn_positions", _as_points(self.cn_positions))
        object.__setattr__(self, "ue_position", _as_points([self.ue_position])[0])
        if self.fbs_position is not None:
            object.__setattr__(self, "fbs_position", _as_points([self.fbs_position])[0])
        object.__setattr__(self, "slots", int(self.slots))
        object.__setattr__(self, "ss_len", int(self.ss_len))

        if not self.lbs_positions:
            raise ValueError("scene needs at least one LBS")
        if not self.alpha > 0:
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if self.sigma_psi_sq < 0:
            raise ValueError(f"sigma_psi_sq must be >= 0, got {self.sigma_psi_sq}")
        if not self.sigma_h_sq > 0:
            raise ValueError(f"sigma_h_sq must be > 0, got {self.sigma_h_sq}")
        if self.noise_power < 0:
            raise ValueError(f"noise_power must be >= 0, got {self.noise_power}")
        if self.slots < 1:
            raise ValueError(f"slots must be >= 1, got {self.slots}")
        if self.ss_len < self.num_lbs + 1:
            raise ValueError(f"ss_len={self.ss_len} must be >= M+1={self.num_lbs + 1}")
        if np.any(self.distances() <= 0):
            raise ValueError("every receiver must be at a positive distance from every BS")

    @property
    def num_lbs(self) -> int:
        return len(self.lbs_positions)

    @property
    def has_fbs(self) -> bool:
        return self.fbs_position is not None and np.isfinite(self.fbs_power_dbm)

    @property
    def num_tx(self) -> int:
        return self.num_lbs + int(self.has_fbs)

    @property
    def num_rx(self) -> int:
        return 1 + len(self.cn_positions)

    @property
    def tx_positions(self) -> tuple[Point, ...]:
        if self.has_fbs:
            return self.lbs_positions + (self.fbs_position,)
        return self.lbs_positions

    @property
    def rx_positions(self) -> tuple[Point, ...]:
        return (self.ue_position,) + self.cn_positions

    @property
    def tx_power_dbm(self) -> np.ndarray:
        powers = [self.lbs_power_dbm] * self.num_lbs
        if self.has_fbs:
            powers.append(self.fbs_power_dbm)
        return np.array(powers, dtype=float)

    def distances(self) -> np.ndarray:
        """Receiver-by-transmitter distance matrix, shape (num_rx, num_tx)."""
        rx = np.array(self.rx_positions)
        tx = np.array(self.tx_positions)
        return np.hypot(rx[:, None, 0] - tx[None, :, 0], rx[:, None, 1] - tx[None, :, 1])

    def mean_level_db(self) -> np.ndarray:
        """lt(P_m) - alpha*lt(d_m) per link, i.e. the draw-independent part of U_m."""
        return self.tx_power_dbm[None, :] - self.alpha * lt(self.distances())


@dataclass(frozen=True)
class ChannelDraw:
    """One realization of every link's fading.

    ``shadowing_db`` has shape (num_rx, num_tx) and is held fixed over the
    observation window; ``small_scale`` has shape (num_rx, num_tx, L).
    """

    shadowing_db: np.ndarray
    small_scale: np.ndarray = field(repr=False)

    def __post_init__(self):
        if self.small_scale.shape[:2] != self.shadowing_db.shape:
            raise ValueError("shadowing and small-scale link dimensions disagree")

    @property
    def slots(self) -> int:
        return self.small_scale.shape[2]


def draw_channel(scene: Scene, rng: np.random.Generator) -> ChannelDraw:
    shape = (scene.num_rx, scene.num_tx)
    shadowing = np.sqrt(scene.sigma_psi_sq) * rng.standard_normal(shape)
    scale = np.sqrt(scene.sigma_h_sq / 2.0)
    re = rng.standard_normal(shape + (scene.slots,))
    im = rng.standard_normal(shape + (scene.slots,))
    return ChannelDraw(shadowing_db=shadowing, small_scale=scale * (re + 1j * im))


def make_ss_family(count: int, ss_len: int) -> np.ndarray:
    """Rows of the DFT matrix: ``count`` orthogonal sequences with squared norm ``ss_len``."""
    if ss_len < count:
        raise ValueError(f"need ss_len >= count for orthogonality, got {ss_len} < {count}")
    k = np.arange(ss_len)
    return np.exp(2j * np.pi * np.outer(np.arange(count), k) / ss_len)


def link_amplitudes(scene: Scene, draw: ChannelDraw, receiver: int = 0) -> np.ndarray:
    """sqrt(P_m Psi_m d_m^-alpha) for every transmitter, in sqrt(mW)."""
    level_db = scene.mean_level_db()[receiver] + draw.shadowing_db[receiver]
    return np.sqrt(dbm_to_mw(level_db))


def synthesize_rx_slot(scene: Scene, draw: ChannelDraw, ss: np.ndarray, slot: int,
                       rng: np.random.Generator | None = None, receiver: int = 0) -> np.ndarray:
    """Received length-tau vector at ``receiver`` during ``slot`` (1-based).

    Superposes every transmitter's scaled and faded sequence and adds
    circularly-symmetric noise of per-element variance ``scene.noise_power``.
    """
    if not 1 <= slot <= draw.slots:
        raise ValueError(f"slot must be in [1, {draw.slots}], got {slot}")
    gains = link_amplitudes(scene, draw, receiver) * draw.small_scale[receiver, :, slot - 1]
    y = gains @ ss[: scene.num_tx]
    if scene.noise_power > 0:
        if rng is None:
            raise ValueError("noise_power > 0 requires an rng")
        s = np.sqrt(scene.noise_power / 2.0)
        y = y + s * (rng.standard_normal(y.shape) + 1j * rng.standard_normal(y.shape))
    return y
