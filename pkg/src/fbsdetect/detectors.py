"""SS selection rules.

Each rule has a batch form working on an array of observations with shape
(n_trials, n_ss) and returning chosen indices, plus a single-observation
wrapper returning a :class:`Decision`.  Indices are 0-based; the FBS is the
last column.  :data:`NO_SAFE_SS` (-1) marks a suspicious-region rejection
of every SS.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .arsss import ArsssObservation
from .priors import PriorModel, log_f_max_pdf, log_gaussian_pdf

NO_SAFE_SS = -1


@dataclass(frozen=True)
class Decision:
    index: int | None
    threshold_db: float | None = None
    likelihoods: np.ndarray | None = field(default=None, repr=False)
    log_scores: np.ndarray | None = field(default=None, repr=False)

    @property
    def no_safe_ss(self) -> bool:
        return self.index is None


def _values(obs) -> np.ndarray:
    if isinstance(obs, ArsssObservation):
        return obs.values_db
    return np.asarray(obs, dtype=float)


def choose_naive(values) -> np.ndarray:
    # np.argmax returns the first maximum, which is the tie-break rule
    return np.argmax(values, axis=-1)


def choose_sar(values, threshold_db) -> np.ndarray:
    values = np.asarray(values, dtype=float)
    threshold_db = np.asarray(threshold_db, dtype=float)[..., None]
    masked = np.where(values <= threshold_db, values, -np.inf)
    idx = np.argmax(masked, axis=-1)
    return np.where(np.all(values > threshold_db, axis=-1), NO_SAFE_SS, idx)


def choose_ml(values, model: PriorModel) -> np.ndarray:
    return np.argmax(log_f_max_pdf(values, model), axis=-1)


def cooperative_scores(ue_values, cn_values, u1, cn_means, sigma_s):
    """Per-SS log of f_1(S_j) * prod_i f_{C,i}(S_{j,i}).

    ``ue_values``: (..., 2); ``cn_values``: (..., n_cn, 2);
    ``u1``: scalar or (...); ``cn_means``: (..., n_cn).
    """
    ue_values = np.asarray(ue_values, dtype=float)
    cn_values = np.asarray(cn_values, dtype=float)
    cn_means = np.asarray(cn_means, dtype=float)
    if cn_values.shape[-2] != cn_means.shape[-1]:
        raise ValueError(f"{cn_values.shape[-2]} CN reports but {cn_means.shape[-1]} CN models")
    own = log_gaussian_pdf(ue_values, np.asarray(u1, dtype=float)[..., None], sigma_s)
    cn = log_gaussian_pdf(cn_values, cn_means[..., None], sigma_s)
    return own + cn.sum(axis=-2)


def choose_cooperative(ue_values, cn_values, u1, cn_means, sigma_s) -> np.ndarray:
    return np.argmax(cooperative_scores(ue_values, cn_values, u1, cn_means, sigma_s), axis=-1)


def detect_naive(obs) -> Decision:
    values = _values(obs)
    return Decision(int(choose_naive(values)))


def detect_sar(obs, threshold_db: float) -> Decision:
    idx = int(choose_sar(_values(obs), threshold_db))
    return Decision(None if idx == NO_SAFE_SS else idx, threshold_db=float(threshold_db))


def detect_ml(obs, model: PriorModel) -> Decision:
    """Pick the SS whose ARSSS best fits the strongest-LBS density.

    The argmax runs on log densities so that far-off values do not all
    underflow to the same zero.
    """
    log_dens = log_f_max_pdf(_values(obs), model)
    return Decision(int(np.argmax(log_dens)), likelihoods=np.exp(log_dens), log_scores=log_dens)


def detect_cooperative(ue_values, cn_values, ue_model: PriorModel,
                       cn_models: list[PriorModel]) -> Decision:
    """Fuse the UE's and the CNs' evidence about which of two SSs is legitimate.

    ``ue_model`` and every entry of ``cn_models`` are single-LBS models
    sharing one sigma_S.  ``cn_values`` holds one pair of ARSSS values per CN.
    """
    ue_values = np.asarray(ue_values, dtype=float)
    if ue_values.shape != (2,):
        raise ValueError("cooperative detection compares exactly two SSs")
    cn_values = np.asarray(cn_values, dtype=float).reshape(-1, 2)
    if len(cn_models) != cn_values.shape[0]:
        raise ValueError(f"{cn_values.shape[0]} CN reports but {len(cn_models)} CN models")
    for m in [ue_model, *cn_models]:
        if m.num_lbs != 1:
            raise ValueError("cooperative models must describe a single LBS")
        if m.sigma_s_db != ue_model.sigma_s_db:
            raise ValueError("cooperative models must share sigma_S")
    cn_means = np.array([m.u_db[0] for m in cn_models])
    scores = cooperative_scores(ue_values, cn_values, ue_model.u_db[0], cn_means, ue_model.sigma_s_db)
    return Decision(int(np.argmax(scores)), log_scores=scores)
