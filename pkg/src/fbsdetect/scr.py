"""Successful cheating rate (SCR) by numerical integration.

All values are computed under the Gaussian model of the ARSSS: each legitimate
value is N(u_m, sigma_S^2) and the FBS value is N(u_fbs, sigma_S^2).
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate as _integrate
from scipy import special

from .priors import PriorModel, log_f_max_pdf, log_gaussian_pdf


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class Quadrature:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    span_sigmas: float = 8.0
    grid_points: int = 4096
    max_subintervals: int = 200
    gl_order: int = 8

    def __post_init__(self):
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        if self.span_sigmas < 6:
            raise ValueError(f"span_sigmas must be >= 6, got {self.span_sigmas}")
        if self.grid_points < 256:
            raise ValueError(f"grid_points must be >= 256, got {self.grid_points}")


DEFAULT_QUAD = Quadrature()


def integrate(f, lo: float, hi: float, quad: Quadrature = DEFAULT_QUAD) -> float:
    """Adaptive Gauss-Kronrod integral of a scalar function on [lo, hi]."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", _integrate.IntegrationWarning)
        value, err = _integrate.quad(
            f, lo, hi, epsabs=quad.abs_tol, epsrel=quad.rel_tol,
            limit=quad.max_subintervals, full_output=1)[:2]
    tol = max(quad.abs_tol, quad.rel_tol * abs(value))
    # roundoff-limited results slightly above tolerance are accepted
    if not np.isfinite(value) or err > 1e3 * tol:
        raise QuadratureError(f"no convergence on [{lo}, {hi}] (estimate {value}, error {err})")
    return float(value)


def gauss_legendre(f, lo: float, hi: float, panels: int, order: int = 8) -> float:
    """Composite fixed-order Gauss-Legendre rule; ``f`` must accept arrays."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)[:, None]
    x = (edges[:-1, None] + half * (nodes + 1.0)).ravel()
    w = (half * weights).ravel()
    return float(np.sum(w * f(x)))


def _clip(p: float) -> float:
    return float(min(1.0, max(0.0, p)))


def _max_term(model: PriorModel, u_fbs: float):
    offsets = (u_fbs - model.u_db) / model.sigma_s_db

    def f(t):
        # phi(t) * prod_m Phi(t + offset_m)
        return math.exp(-0.5 * t * t + special.log_ndtr(t + offsets).sum()) / math.sqrt(2 * math.pi)

    return f


def scr_no_check(model: PriorModel, u_fbs: float, quad: Quadrature = DEFAULT_QUAD) -> float:
    """P{S_fbs > max_m S_m} when the UE simply picks the strongest SS."""
    span = quad.span_sigmas
    return _clip(integrate(_max_term(model, u_fbs), -span, span, quad))


def scr_sar_bound(model: PriorModel, u_fbs: float, threshold_db: float, delta: float,
                  quad: Quadrature = DEFAULT_QUAD) -> float:
    """Upper bound P{max_m S_m < S_fbs < threshold} + delta for the SAR rule."""
    if not 0 < delta < 1:
        raise ValueError(f"delta must be in (0, 1), got {delta}")
    span = quad.span_sigmas
    upper = min((threshold_db - u_fbs) / model.sigma_s_db, span)
    if upper <= -span:
        return _clip(delta)
    return _clip(integrate(_max_term(model, u_fbs), -span, upper, quad) + delta)


def omega_indicator_nearest(t, x, u1):
    """Membership of t in the lower-density region of a single Gaussian centred at u1."""
    t = np.asarray(t, dtype=float)
    x = np.asarray(x, dtype=float)
    lo = np.minimum(x, 2 * u1 - x)
    hi = np.maximum(x, 2 * u1 - x)
    out = (t < lo) | (t > hi)
    return bool(out) if out.ndim == 0 else out


class _LevelSet:
    """Sub-level sets of f_max on a uniform midpoint grid.

    Cells are sorted by the density at their midpoint; ``cum[m, r]`` is the
    f_m-mass of the r lowest-density cells, so the inner integrals for a
    level c are read off at r = #{cells with density < c}.
    """

    def __init__(self, model: PriorModel, quad: Quadrature):
        s = model.sigma_s_db
        span = quad.span_sigmas * s
        edges = np.linspace(model.u_db.min() - span, model.u_db.max() + span, quad.grid_points + 1)
        mids = 0.5 * (edges[1:] + edges[:-1])
        mass = np.diff(special.ndtr((edges[:, None] - model.u_db) / s), axis=0).T
        levels = log_f_max_pdf(mids, model)
        order = np.argsort(levels, kind="stable")
        self.model = model
        self.sorted_levels = levels[order]
        self.cum = np.concatenate(
            [np.zeros((model.num_lbs, 1)), np.cumsum(mass[:, order], axis=1)], axis=1)

    def inner(self, x):
        """prod_m of the f_m-mass of {t : f_max(t) < f_max(x)}."""
        r = np.searchsorted(self.sorted_levels, log_f_max_pdf(x, self.model), side="left")
        return np.prod(self.cum[:, r], axis=0)


def scr_ml(model: PriorModel, u_fbs: float, quad: Quadrature = DEFAULT_QUAD) -> float:
    """SCR of the maximum-likelihood rule with the level set found on a grid."""
    s = model.sigma_s_db
    level_set = _LevelSet(model, quad)
    span = quad.span_sigmas * s

    def integrand(x):
        return np.exp(log_gaussian_pdf(x, u_fbs, s)) * level_set.inner(x)

    # the inner term is piecewise constant in x, so a dense fixed rule is
    # used rather than adaptive refinement chasing every jump
    value = gauss_legendre(integrand, u_fbs - span, u_fbs + span, quad.grid_points, quad.gl_order)
    return _clip(value)


def scr_ml_nearest(u1: float, sigma_s: float, u_fbs: float, quad: Quadrature = DEFAULT_QUAD) -> float:
    """ML SCR for a single LBS using the closed-form lower-density region.

    The f_1-mass of {t < x or t > 2u_1 - x} is 2 Q(|x - u_1| / sigma_S).
    """
    span = quad.span_sigmas * sigma_s

    def integrand(x):
        z = abs(x - u1) / sigma_s
        return math.exp(log_gaussian_pdf(x, u_fbs, sigma_s)) * special.erfc(z / math.sqrt(2.0))

    lo, hi = u_fbs - span, u_fbs + span
    if lo < u1 < hi:
        value = integrate(integrand, lo, u1, quad) + integrate(integrand, u1, hi, quad)
    else:
        value = integrate(integrand, lo, hi, quad)
    return _clip(value)
