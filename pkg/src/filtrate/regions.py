"""
Applicability regions and phase-transition curves on the (d, t) plane.

A self-similar solution depends on (d, t) only through r = d / sqrt(t), so
every threshold crossing r* traces the parabola d = r* sqrt(t), and every
region is a union of sectors between such parabolas.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from . import thermo
from .selfsim import SelfSimilarSolution, pressure, volume_profile

logger = logging.getLogger(__name__)

N_SAMPLES = 2048


@dataclass(frozen=True)
class RegionSpec:
    """Physical bounds plus the plotting window and grid resolution.

    The temperature band is (T_min, T_max); ``t_max`` is the time window.
    """

    v_min: float
    p_min: float
    p_max: float
    T_min: float
    T_max: float
    d_max: float
    t_max: float
    nx: int = 200
    ny: int = 200

    def __post_init__(self):
        if not 0 < self.p_min < self.p_max:
            raise ValueError("need 0 < p_min < p_max")
        if not 0 < self.T_min < self.T_max:
            raise ValueError("need 0 < T_min < T_max")
        if not self.v_min > 0:
            raise ValueError("need v_min > 0")
        if self.nx < 2 or self.ny < 2:
            raise ValueError("need nx, ny >= 2")
        if not (self.d_max > 0 and self.t_max > 0):
            raise ValueError("need d_max > 0 and t_max > 0")

    def axes(self):
        d = self.d_max * np.arange(1, self.nx + 1) / self.nx
        t = self.t_max * np.arange(1, self.ny + 1) / self.ny
        return d, t

    def r_window(self):
        """Range of r covered by the grid."""
        d, t = self.axes()
        return d[0] / np.sqrt(t[-1]), d[-1] / np.sqrt(t[0])


def _profiles(sol, r):
    """(v, p, T) at r with evaluation failures mapped to NaN."""
    r = np.asarray(r, dtype=float)
    v = volume_profile(sol, r)
    try:
        p = np.asarray(pressure(sol, r), dtype=float)
    except (ValueError, RuntimeError):
        p = np.array([_safe_pressure(sol, ri) for ri in r.ravel()]).reshape(r.shape)
    return v, p, p * v / sol.R


def _safe_pressure(sol, r):
    try:
        return float(pressure(sol, r))
    except (ValueError, RuntimeError):
        return np.nan


@dataclass(frozen=True)
class PointFlags:
    density_ok: np.ndarray
    pressure_ok: np.ndarray
    temperature_ok: np.ndarray
    all_ok: np.ndarray


def classify_r(sol, spec, r):
    v, p, T = _profiles(sol, r)
    with np.errstate(invalid="ignore"):
        dens = v >= spec.v_min
        pres = (p >= spec.p_min) & (p <= spec.p_max)
        temp = (T >= spec.T_min) & (T <= spec.T_max)
    return PointFlags(dens, pres, temp, dens & pres & temp)


def classify_point(sol: SelfSimilarSolution, spec: RegionSpec, d, t) -> PointFlags:
    d = np.asarray(d, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)) or np.any(~(d > 0)):
        raise ValueError("classify_point needs d > 0 and t > 0")
    return classify_r(sol, spec, d / np.sqrt(t))


@dataclass(frozen=True)
class RegionGrid:
    """Row-major sweep: d varies slowest, t fastest."""

    d: np.ndarray
    t: np.ndarray
    flags: PointFlags
    shape: tuple

    def rows(self):
        f = self.flags
        for i in range(self.d.size):
            yield (self.d[i], self.t[i], bool(f.density_ok[i]), bool(f.pressure_ok[i]),
                   bool(f.temperature_ok[i]), bool(f.all_ok[i]))

    def as_matrix(self, name):
        return np.asarray(getattr(self.flags, name)).reshape(self.shape)


def region_grid(sol: SelfSimilarSolution, spec: RegionSpec) -> RegionGrid:
    d, t = spec.axes()
    D, Tt = np.meshgrid(d, t, indexing="ij")
    flags = classify_point(sol, spec, D.ravel(), Tt.ravel())
    return RegionGrid(D.ravel(), Tt.ravel(), flags, (spec.nx, spec.ny))


@dataclass(frozen=True)
class Curve:
    """Parabola d = r_star sqrt(t) labelled by the threshold that defines it."""

    label: str
    kind: str
    r_star: float
    info: dict = field(default_factory=dict, compare=False)

    def d_at(self, t):
        return self.r_star * np.sqrt(t)


def _log_samples(lo, hi, n=N_SAMPLES):
    return np.geomspace(lo, hi, n)


def _sign_change_roots(fun, rs, values, rtol=1e-12):
    roots = []
    ok = np.isfinite(values)
    for i in range(len(rs) - 1):
        if not (ok[i] and ok[i + 1]):
            continue
        a, b = values[i], values[i + 1]
        if a == 0:
            roots.append(float(rs[i]))
        elif a * b < 0:
            roots.append(float(brentq(fun, rs[i], rs[i + 1], xtol=1e-300, rtol=rtol)))
    if ok[-1] and values[-1] == 0:
        roots.append(float(rs[-1]))
    return roots


def _bracket(spec, r_floor, r_ceil):
    lo, hi = spec.r_window()
    return (r_floor if r_floor is not None else 0.5 * lo,
            r_ceil if r_ceil is not None else 2.0 * hi)


def boundary_curves(sol: SelfSimilarSolution, spec: RegionSpec, r_floor=None, r_ceil=None):
    """Roots r* of v = v_min, p = p_min, p = p_max, T = T_min, T = T_max.

    Roots are found by sign changes over log-spaced samples of the bracket
    (default: the grid's r-range widened by 2x each way) and refined by
    Brent's method. Thresholds that never bind produce no curve.
    """
    lo, hi = _bracket(spec, r_floor, r_ceil)
    rs = _log_samples(lo, hi)
    v, p, T = _profiles(sol, rs)
    checks = [
        ("v_min", "density", lambda r: volume_profile(sol, r), v, spec.v_min),
        ("p_min", "pressure", lambda r: _safe_pressure(sol, r), p, spec.p_min),
        ("p_max", "pressure", lambda r: _safe_pressure(sol, r), p, spec.p_max),
        ("T_min", "temperature", lambda r: _safe_pressure(sol, r) * volume_profile(sol, r) / sol.R, T, spec.T_min),
        ("T_max", "temperature", lambda r: _safe_pressure(sol, r) * volume_profile(sol, r) / sol.R, T, spec.T_max),
    ]
    curves = []
    for label, kind, fun, vals, bound in checks:
        for root in _sign_change_roots(lambda r: float(fun(r)) - bound, rs, vals - bound):
            curves.append(Curve(label, kind, root, {"bound": bound}))
    curves.sort(key=lambda c: (c.r_star, c.label))
    return curves


def all_ok_intervals(sol, spec, r_floor=None, r_ceil=None):
    """Maximal r-intervals (within the bracket) on which all flags hold."""
    lo, hi = _bracket(spec, r_floor, r_ceil)
    edges = [lo] + [c.r_star for c in boundary_curves(sol, spec, lo, hi)] + [hi]
    edges = sorted(set(edges))
    out = []
    for a, b in zip(edges[:-1], edges[1:]):
        mid = np.sqrt(a * b)
        if bool(classify_r(sol, spec, mid).all_ok):
            if out and out[-1][1] == a:
                out[-1] = (out[-1][0], b)
            else:
                out.append((a, b))
    return out


def _coexistence_distance(model, crit, v, T):
    """Signed log-distance of (v, T) to the coexistence dome; < 0 inside."""
    v_c, T_c = crit
    if T >= T_c:
        return abs(np.log(v / v_c)) + (T - T_c) / T_c
    v1, v2 = thermo.coexistence_at_T(model, T)
    return max(np.log(v1 / v), np.log(v / v2))


def phase_curves(sol: SelfSimilarSolution, model: thermo.PotentialModel,
                 r_floor=1e-2, r_ceil=10.0, n_samples=N_SAMPLES):
    """Crossings of the trajectory (v(r), T(r)) with the spinodal and the
    coexistence curve, sorted by r*.

    Samples where the state lies outside the model's domain (v <= b) or
    where the coexistence solve fails are skipped.
    """
    if model.kind is thermo.PotentialKind.IDEAL:
        return []
    # Far below T_c the vapour volume reaches ~1e70 and its cubes overflow
    # harmlessly to inf inside the coexistence solve.
    with np.errstate(over="ignore"):
        return _phase_curves(sol, model, r_floor, r_ceil, n_samples)


def _phase_curves(sol, model, r_floor, r_ceil, n_samples):
    rs = _log_samples(r_floor, r_ceil, n_samples)
    v, p, T = _profiles(sol, rs)
    valid = np.isfinite(T) & (T > 0) & (v > model.excluded_volume)

    def state(r):
        vv = float(volume_profile(sol, r))
        return vv, _safe_pressure(sol, r) * vv / sol.R

    curves = []

    def spin(r):
        vv, TT = state(r)
        return float(eval_scaled_phi_vv(model, vv, TT))

    spin_vals = np.full(rs.shape, np.nan)
    spin_vals[valid] = eval_scaled_phi_vv(model, v[valid], T[valid])
    for root in _sign_change_roots(spin, rs, spin_vals):
        vv, TT = state(root)
        curves.append(Curve("spinodal", "spinodal", root, {"v": vv, "T": TT}))

    try:
        crit = thermo.critical_point(model)
    except (thermo.NoRootError, thermo.ConvergenceError):
        crit = None
    if crit is not None:
        def dist(r):
            vv, TT = state(r)
            return _coexistence_distance(model, crit, vv, TT)

        vals = np.full(rs.shape, np.nan)
        for i in np.flatnonzero(valid):
            try:
                vals[i] = _coexistence_distance(model, crit, v[i], T[i])
            except (thermo.ConvergenceError, thermo.NoRootError, ValueError, FloatingPointError):
                logger.debug("coexistence failed at r=%g", rs[i])
        for root in _sign_change_roots(dist, rs, vals):
            vv, TT = state(root)
            v1, v2 = thermo.coexistence_at_T(model, TT)
            curves.append(Curve("coexistence", "coexistence", root,
                                {"v": vv, "T": TT, "v1": v1, "v2": v2}))
    curves.sort(key=lambda c: c.r_star)
    return curves


def eval_scaled_phi_vv(model, v, T):
    """v^2 phi_vv: dimensionless, negative where the state is stable."""
    v = np.asarray(v, dtype=float)
    with np.errstate(over="ignore"):
        return thermo.eval_potential(model, v, T).phi_vv * v**2


@dataclass
class PhaseReport:
    no_transition_in_region: bool
    curves: list
    intervals: list
    distances: list

    def to_dict(self):
        return {
            "no_transition_in_region": self.no_transition_in_region,
            "curve_count": len(self.curves),
            "curves": [{"kind": c.kind, "r_star": c.r_star} for c in self.curves],
            "all_ok_intervals": [list(iv) for iv in self.intervals],
            "distances": self.distances,
        }


def physical_phase_report(sol, model, spec, curves=None, r_floor=None, r_ceil=None):
    """Whether any phase curve enters the all_ok region.

    ``distances`` holds, per curve, the gap in r to the nearest all_ok
    interval (0 when the curve lies inside one).
    """
    if curves is None:
        lo, hi = _bracket(spec, r_floor, r_ceil)
        curves = phase_curves(sol, model, lo, hi)
    intervals = all_ok_intervals(sol, spec, r_floor, r_ceil)
    distances = []
    hit = False
    for c in curves:
        gaps = [0.0 if a <= c.r_star <= b else min(abs(c.r_star - a), abs(c.r_star - b))
                for a, b in intervals]
        gap = min(gaps) if gaps else float("inf")
        distances.append(gap)
        if gap == 0.0 and bool(classify_r(sol, spec, c.r_star).all_ok):
            hit = True
    return PhaseReport(not hit, list(curves), intervals, distances)
