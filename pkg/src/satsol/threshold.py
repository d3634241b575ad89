"""Existence threshold on the coupling constant.

Ground states exist exactly for Gamma < -T0 where T0 is the infimum of the
quotient int |grad w|^2 / int [w^2 - ln(1+w^2)] over unit-power w. The
infimum is not attained: shrinking the amplitude of any trial family drives
the quotient down to the sharp critical-focusing constant, realized here as
the squared L2 norm of the ground state of Q'' + Q'/r - Q + Q^3 = 0. The
module therefore reports that limiting mass as the threshold together with a
decreasing certificate of trial-function quotients sitting strictly above it.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.linalg import solve_banded
from scipy.special import k0e, k1e

from .errors import BracketError, ConvergenceError, ResourceLimitError
from .functionals import power_P, rayleigh_Q
from .radial import (
    RadialGrid,
    RadialProfile,
    integrate_radial,
    lap_banded_apply,
    lap_banded_coefficients,
    make_grid,
)

__all__ = [
    "ThresholdEstimate",
    "Classification",
    "townes_profile",
    "upper_bound_sequence",
    "classify_gamma",
    "default_threshold_estimate",
]

# containment bracket for the critical ground-state amplitude
_AMP_LO, _AMP_HI = 1.0, 4.0
_DEFAULT_DELTAS = (1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125)
MAX_TRIAL_RADIUS = 2048.0


class Classification(enum.Enum):
    NO_GROUND_STATE = "NoGroundState"
    GROUND_STATE_EXISTS = "GroundStateExists"
    MARGINAL = "Marginal"

    def __str__(self):
        return self.value


@dataclass
class ThresholdEstimate:
    """Threshold bracket: certificate quotients above the limiting mass."""

    upper_bounds: list  # (delta, Q) pairs, delta decreasing
    townes_mass: float
    T0_estimate: float
    bracket_width: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "townes_mass": self.townes_mass,
                "T0_estimate": self.T0_estimate,
                "upper_bounds": [[d, q] for d, q in self.upper_bounds],
                "bracket_width": self.bracket_width,
            },
            indent=2,
        )

    @classmethod
    def from_json(cls, text: str) -> "ThresholdEstimate":
        obj = json.loads(text)
        return cls(
            upper_bounds=[(float(d), float(q)) for d, q in obj["upper_bounds"]],
            townes_mass=float(obj["townes_mass"]),
            T0_estimate=float(obj["T0_estimate"]),
            bracket_width=float(obj["bracket_width"]),
        )


def _shoot_critical(amp, dr, r_max):
    """RK4 shot of Q'' + Q'/r = Q - Q^3 from Q(0) = amp, Q'(0) = 0.

    Returns (r samples, Q samples, crossed) where crossed means Q hit zero
    (amplitude too large). Any other outcome counts as too small.
    """
    g0 = amp - amp**3
    r = dr
    q = amp + 0.25 * g0 * dr * dr
    p = 0.5 * g0 * dr
    rs = [0.0, r]
    qs = [amp, q]
    crossed = False
    while r < r_max - 0.5 * dr:
        k1q = p
        k1p = -p / r + q - q**3
        r2 = r + 0.5 * dr
        q2 = q + 0.5 * dr * k1q
        p2 = p + 0.5 * dr * k1p
        k2q = p2
        k2p = -p2 / r2 + q2 - q2**3
        q3 = q + 0.5 * dr * k2q
        p3 = p + 0.5 * dr * k2p
        k3q = p3
        k3p = -p3 / r2 + q3 - q3**3
        r4 = r + dr
        q4 = q + dr * k3q
        p4 = p + dr * k3p
        k4q = p4
        k4p = -p4 / r4 + q4 - q4**3
        q += dr / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q)
        p += dr / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p)
        r += dr
        rs.append(r)
        qs.append(q)
        if q < 0.0:
            crossed = True
            break
        if p > 0.0 and q < 0.5 * amp:
            break
    return np.array(rs), np.array(qs), crossed


def _graft_tail(rs, qs, kappa, n, dr):
    """Extend a decaying shot with the linear far-field solution K0(kappa r).

    The graft point minimizes the log-derivative mismatch between the shot and
    K0, which balances integrator contamination against the neglected cubic
    term. Value-continuous by construction.
    """
    vals = np.zeros(n + 1)
    m = min(rs.size, n + 1)
    vals[:m] = qs[:m]
    positive = qs > 0
    q = np.where(positive, qs, 1.0)
    ld = np.gradient(np.log(q), dr)
    x = kappa * rs[1:]
    target = -kappa * k1e(x) / k0e(x)
    mism = np.abs(ld[1:] - target)
    usable = positive[1:] & (rs[1:] >= 3.0 / kappa) & (rs[1:] <= rs[-1] - 2.0 * dr)
    idx = np.where(usable)[0]
    if idx.size == 0:
        raise ConvergenceError("shot decayed too fast to place the far-field graft")
    best = idx[np.argmin(mism[idx])] + 1
    rg = rs[best]
    rtail = np.arange(best, n + 1) * dr
    vals[best:] = qs[best] * k0e(kappa * rtail) / k0e(kappa * rg) * np.exp(
        -kappa * (rtail - rg)
    )
    vals[:best] = qs[:best]
    return vals


def _newton_critical(grid: RadialGrid, v0: np.ndarray, max_iters=60):
    """Newton solve of the discrete system L q - q + q^3 = 0, Dirichlet at R."""
    n = grid.n
    main, upper, lower = lap_banded_coefficients(grid)
    q = v0[:n].copy()
    for _ in range(max_iters):
        F = lap_banded_apply(main, upper, lower, q) - q + q**3
        ab = np.zeros((3, n))
        ab[0] = upper
        ab[1] = main - 1.0 + 3.0 * q * q
        ab[2] = lower
        dq = solve_banded((1, 1), ab, -F)
        q += dq
        if np.max(np.abs(dq)) < 1e-13:
            break
    else:
        raise ConvergenceError("discrete polish of the critical profile stalled")
    full = np.zeros(n + 1)
    full[:n] = q
    return full


def townes_profile(tol: float, R: float = 16.0, n: int = 4096):
    """Ground state of the critical equation and its squared L2 norm.

    Shooting with bisection on the initial amplitude: solutions that cross
    zero bracket from above, solutions that turn upward bracket from below.
    The converged shot is extended by the K0 far field and polished into an
    exact solution of the discrete system, so the returned profile satisfies
    the discrete equation to solver precision.

    Returns (profile, mass).
    """
    if not (1e-12 < tol < 1e-4):
        raise ValueError(f"tol must lie in (1e-12, 1e-4), got {tol}")
    grid = make_grid(R, n)
    dr_shot = min(grid.dr, 2e-3)
    lo, hi = _AMP_LO, _AMP_HI
    _, _, crossed_lo = _shoot_critical(lo, dr_shot, R)
    _, _, crossed_hi = _shoot_critical(hi, dr_shot, R)
    if crossed_lo or not crossed_hi:
        raise BracketError(
            f"critical amplitude not bracketed in [{_AMP_LO}, {_AMP_HI}]"
        )
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid == lo or mid == hi:
            break
        _, _, crossed = _shoot_critical(mid, dr_shot, R)
        if crossed:
            hi = mid
        else:
            lo = mid
    amp = 0.5 * (lo + hi)
    # rebuild the final shot on the output spacing for the graft
    sub = max(1, int(round(grid.dr / dr_shot)))
    rs, qs, _ = _shoot_critical(amp, grid.dr / sub, R)
    vals = _graft_tail(rs[::sub], qs[::sub], 1.0, n, grid.dr)
    vals = _newton_critical(grid, vals)
    profile = RadialProfile(grid, vals)
    mass = integrate_radial(RadialProfile(grid, vals * vals))
    return profile, float(mass)


def upper_bound_sequence(w: RadialProfile, deltas, max_radius: float = MAX_TRIAL_RADIUS):
    """Quotient certificate along the scaling family w_d(r) = d * w(d r).

    Each entry resamples the scaled trial onto an enlarged grid (outer radius
    R/d at the source spacing), renormalizes to unit power, and evaluates the
    quotient. For smooth w the sequence decreases toward the critical limit.
    """
    p = power_P(w)
    if abs(p - 1.0) > 1e-6:
        raise ValueError(f"trial function must have unit power, got P = {p!r}")
    out = []
    for d in deltas:
        if not (0.0 < d <= 1.0):
            raise ValueError(f"scale factors must lie in (0, 1], got {d}")
        R_big = w.grid.R / d
        if R_big > max_radius:
            raise ResourceLimitError(
                f"scaled trial needs outer radius {R_big} > limit {max_radius}"
            )
        n_big = int(round(w.grid.n / d))
        big = make_grid(R_big, n_big)
        wd = RadialProfile(big, d * _eval_scaled(w, big.nodes, d))
        nrm = np.sqrt(power_P(wd))
        if nrm == 0.0:
            raise ValueError("trial function vanished after scaling")
        wd = RadialProfile(big, wd.values / nrm)
        out.append((float(d), float(rayleigh_Q(wd))))
    return out


def _eval_scaled(w: RadialProfile, r_new: np.ndarray, d: float) -> np.ndarray:
    spl = CubicSpline(w.r, w.values, bc_type=((1, 0.0), (1, 0.0)))
    arg = d * r_new
    return np.where(arg <= w.grid.R, spl(np.minimum(arg, w.grid.R)), 0.0)


def classify_gamma(gamma: float, est: ThresholdEstimate) -> Classification:
    """Theorem-level classification of the coupling constant.

    Couplings within one bracket width of -T0 are reported Marginal rather
    than resolved; the solver refuses both Marginal and NoGroundState inputs.
    """
    if abs(gamma + est.T0_estimate) <= est.bracket_width:
        return Classification.MARGINAL
    if gamma > -est.T0_estimate:
        return Classification.NO_GROUND_STATE
    return Classification.GROUND_STATE_EXISTS


def _gaussian_trial(R: float = 16.0, n: int = 2048) -> RadialProfile:
    grid = make_grid(R, n)
    r = grid.nodes
    v = np.exp(-(r**2) / 2.0) / np.sqrt(np.pi)
    w = RadialProfile(grid, v)
    return RadialProfile(grid, v / np.sqrt(power_P(w)))


@lru_cache(maxsize=4)
def default_threshold_estimate(tol: float = 1e-10) -> ThresholdEstimate:
    """Threshold estimate with the Gaussian-family certificate.

    The certificate trial family is independent of the shooting oracle that
    supplies the limiting mass, so the two routes cross-check each other. The
    bracket width is the gap between the best certificate quotient and the
    limit.
    """
    _, mass = townes_profile(tol)
    bounds = upper_bound_sequence(_gaussian_trial(), _DEFAULT_DELTAS)
    best = min(q for _, q in bounds)
    return ThresholdEstimate(
        upper_bounds=bounds,
        townes_mass=mass,
        T0_estimate=mass,
        bracket_width=max(best - mass, 0.0),
    )
