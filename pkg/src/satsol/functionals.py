"""Scalar functionals of the saturable model.

The saturating potential density is G(s) = s - ln(1+s) evaluated at s = rho^2.
Energy of a radial state: H[rho] = int |grad rho|^2 + Gamma * int G(rho^2).
Power: P[rho] = int rho^2. All integrals are plane integrals via the radial
quadrature. Small-argument branches guard against cancellation so that limits
such as (s - ln(1+s))/s^2 -> 1/2 survive in floating point.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, asdict

import numpy as np

from .radial import RadialProfile, gradient_norm_sq, integrate_radial

__all__ = [
    "g_sat",
    "h_ratio",
    "f_aux",
    "energy_H",
    "power_P",
    "rayleigh_Q",
    "lagrange_lambda",
    "pohozaev_residual",
    "energy_E_polar",
    "saturable_potential",
    "FunctionalReport",
]

_SERIES_CUT = 1e-4


def g_sat(s):
    """G(s) = s - ln(1+s) for s >= 0, series-protected below s = 1e-4."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0):
        raise ValueError("g_sat requires s >= 0")
    small = s_arr < _SERIES_CUT
    out = np.empty_like(s_arr)
    ss = s_arr[small]
    # s^2/2 - s^3/3 + s^4/4 - s^5/5; next term is below 1e-12 relative here
    out[small] = ss * ss * (0.5 - ss * (1.0 / 3.0 - ss * (0.25 - ss * 0.2)))
    big = s_arr[~small]
    out[~small] = big - np.log1p(big)
    return out if out.ndim else float(out)


def h_ratio(s):
    """h(s) = (s - ln(1+s))/s^2 for s > 0; decreasing, with limit 1/2 at 0+."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr <= 0.0):
        raise ValueError("h_ratio requires s > 0")
    small = s_arr < _SERIES_CUT
    out = np.empty_like(s_arr)
    ss = s_arr[small]
    out[small] = 0.5 - ss * (1.0 / 3.0 - ss * (0.25 - ss * 0.2))
    big = s_arr[~small]
    out[~small] = (big - np.log1p(big)) / (big * big)
    return out if out.ndim else float(out)


def f_aux(s):
    """F(s) = 2[s - ln(1+s)] - s^2/(1+s) for s >= 0; nonnegative, F(0) = 0."""
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < 0.0):
        raise ValueError("f_aux requires s >= 0")
    small = s_arr < _SERIES_CUT
    out = np.empty_like(s_arr)
    ss = s_arr[small]
    # int_0^s t^2/(1+t)^2 dt = s^3/3 - s^4/2 + 3 s^5/5 - 2 s^6/3 + ...
    out[small] = ss**3 * (1.0 / 3.0 - ss * (0.5 - ss * (0.6 - ss * (2.0 / 3.0))))
    big = s_arr[~small]
    out[~small] = 2.0 * (big - np.log1p(big)) - big * big / (1.0 + big)
    return out if out.ndim else float(out)


def saturable_potential(rho: RadialProfile) -> float:
    """int G(rho^2) over the plane; the potential part of the energy."""
    return integrate_radial(RadialProfile(rho.grid, g_sat(rho.values**2)))


def energy_H(rho: RadialProfile, gamma: float) -> float:
    """H[rho] = kinetic + Gamma * potential."""
    return gradient_norm_sq(rho) + gamma * saturable_potential(rho)


def power_P(rho: RadialProfile) -> float:
    """P[rho] = int rho^2 >= 0."""
    return max(integrate_radial(RadialProfile(rho.grid, rho.values**2)), 0.0)


def rayleigh_Q(w: RadialProfile) -> float:
    """Quotient int |grad w|^2 / int G(w^2) for unit-power w.

    Strictly exceeds the coupling threshold for every admissible trial
    function (the infimum is not attained).
    """
    p = power_P(w)
    if abs(p - 1.0) > 1e-8:
        raise ValueError(f"rayleigh_Q requires unit power, got P = {p!r}")
    den = saturable_potential(w)
    if den <= 0.0:
        raise ValueError("rayleigh_Q is undefined for a vanishing profile")
    return gradient_norm_sq(w) / den


def lagrange_lambda(rho: RadialProfile, gamma: float) -> float:
    """Multiplier from testing the stationary equation with rho itself:

    lambda = -int |grad rho|^2 - Gamma * int rho^4/(1+rho^2).
    """
    p = power_P(rho)
    if abs(p - 1.0) > 1e-6:
        raise ValueError(f"lagrange_lambda requires unit power, got P = {p!r}")
    v = rho.values
    j = integrate_radial(RadialProfile(rho.grid, v**4 / (1.0 + v**2)))
    return -gradient_norm_sq(rho) - gamma * j


def pohozaev_residual(rho: RadialProfile, gamma: float, lam: float) -> float:
    """Relative defect of the dilation identity lambda = -Gamma * int G(rho^2).

    Near zero only for genuine solutions of the stationary equation; the
    denominator is guarded for the degenerate lambda -> 0 case.
    """
    return abs(lam + gamma * saturable_potential(rho)) / max(abs(lam), 1e-12)


def energy_E_polar(rho: RadialProfile, phi: float, gamma: float) -> float:
    """Pair energy E[u, v] with u = rho cos(phi), v = rho sin(phi).

    Evaluated directly from the pair fields (not via the polar identity);
    for constant phi it must reproduce energy_H(rho, gamma).
    """
    u = RadialProfile(rho.grid, rho.values * np.cos(phi))
    v = RadialProfile(rho.grid, rho.values * np.sin(phi))
    kin = gradient_norm_sq(u) + gradient_norm_sq(v)
    s = u.values**2 + v.values**2
    pot = integrate_radial(RadialProfile(rho.grid, g_sat(s)))
    return kin + gamma * pot


@dataclass
class FunctionalReport:
    """Scalar summary of a state: energy split, power, multipliers, defect."""

    energy_H: float
    power_P: float
    kinetic: float
    potential: float
    lambda_pz2: float
    lambda_pz1: float
    pohozaev_residual: float

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_state(cls, rho: RadialProfile, gamma: float) -> "FunctionalReport":
        kin = gradient_norm_sq(rho)
        pot = saturable_potential(rho)
        lam2 = lagrange_lambda(rho, gamma)
        lam1 = -gamma * pot
        return cls(
            energy_H=kin + gamma * pot,
            power_P=power_P(rho),
            kinetic=kin,
            potential=pot,
            lambda_pz2=lam2,
            lambda_pz1=lam1,
            pohozaev_residual=pohozaev_residual(rho, gamma, lam2),
        )
