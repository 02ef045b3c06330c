"""
First-order van der Waals corrections to the self-similar ideal-gas flow
with mobility mu = alpha v / T.

With T = T0 + a T1 + b T2 and v = v0 (volume corrections vanish)::

    T1(r) = (6/(C1 R^2 (q-1)) int exp(r^2/(4 alpha R)) r^((q-7)/(1-q)) dr + C3)
            * r^(3/(1-q)) exp(-r^2/(4 alpha R))
    T2(r) = (C2 (q-1) r^2 / (2 (2q+1) alpha R^2) - C2/R + C4 r^(3/(1-q)))
            * exp(-r^2/(4 alpha R))

The corrections solve the radial Darcy balance for the van der Waals
pressure p = R T/v + b R T/v^2 - a/v^2 at first order in (a, b), with the
flow u unchanged. The antiderivative in T1 runs from ``r_ref``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import thermo, verify
from .selfsim import PressureMode, SelfSimilarSolution, _is_alpha_v_over_T, flow_field, similarity_variable, temperature_profile, volume_profile


@dataclass(frozen=True)
class CorrectionSet:
    base: SelfSimilarSolution
    a: float
    b: float
    C3: float = 0.0
    C4: float = 0.0
    r_ref: float = 1.0
    r_floor: float = 1e-3

    def __post_init__(self):
        if self.base.pressure_mode is not PressureMode.CASE2 or not _is_alpha_v_over_T(self.base.law):
            raise ValueError("corrections are derived for case2, mu = alpha v / T")
        if self.base.q == -0.5:
            raise ValueError("q = -1/2 is excluded")
        if not self.r_ref >= self.r_floor > 0:
            raise ValueError("need r_ref >= r_floor > 0")

    @property
    def gauss_rate(self):
        """1 / (4 alpha R): the Gaussian rate of the base pressure."""
        return 1.0 / (4 * self.base.law.alpha * self.base.R)

    def scaled(self, factor):
        return CorrectionSet(self.base, self.a * factor, self.b * factor,
                             self.C3, self.C4, self.r_ref, self.r_floor)


def _t1_scalar(cs, r):
    if r < cs.r_floor:
        raise ValueError(f"r={r} below r_floor={cs.r_floor}; the T1 integrand is singular at 0")
    sol = cs.base
    q, R, C1 = sol.q, sol.R, sol.C1
    g = cs.gauss_rate
    m = (q - 7) / (1 - q)
    # exp(g s^2) exp(-g r^2) kept under one exponent to avoid overflow
    integral, err = quad(
        lambda s: np.exp(g * (s * s - r * r)) * s**m,
        cs.r_ref, r, epsabs=1e-10, epsrel=1e-10, limit=200,
    )
    pref = 6.0 / (C1 * R**2 * (q - 1))
    return r**sol.exponent * (pref * integral + cs.C3 * np.exp(-g * r * r))


def t1_correction(cs: CorrectionSet, r):
    """Temperature correction multiplying ``a``."""
    r = np.asarray(r, dtype=float)
    vals = np.array([_t1_scalar(cs, float(ri)) for ri in r.ravel()])
    return vals.reshape(r.shape) if r.ndim else float(vals[0])


def t2_correction(cs: CorrectionSet, r):
    """Temperature correction multiplying ``b``."""
    r = np.asarray(r, dtype=float)
    sol = cs.base
    q, R, C2, alpha = sol.q, sol.R, sol.C2, sol.law.alpha
    if cs.C4 != 0 and np.any(~(r > 0)):
        raise ValueError("r must be positive when C4 != 0")
    if np.any(r < 0):
        raise ValueError("r must be non-negative")
    rk = r**sol.exponent if cs.C4 != 0 else 0.0
    poly = C2 * (q - 1) * r**2 / (2 * (2 * q + 1) * alpha * R**2) - C2 / R + cs.C4 * rk
    return poly * np.exp(-cs.gauss_rate * r**2)


def corrected_fields(cs: CorrectionSet, r, T1=None, T2=None):
    """Corrected v, T, p at r, plus the base and correction profiles.

    p is the first-order van der Waals pressure with the a- and
    b-coefficients collected: p0 + a (R T1/v0 - 1/v0^2) + b (R T2/v0 + R T0/v0^2).
    """
    sol = cs.base
    R = sol.R
    v0 = volume_profile(sol, r)
    T0 = temperature_profile(sol, r)
    if T1 is None:
        T1 = t1_correction(cs, r)
    if T2 is None:
        T2 = t2_correction(cs, r)
    p0 = R * T0 / v0
    p1 = R * T1 / v0 - 1.0 / v0**2
    p2 = R * T2 / v0 + R * T0 / v0**2
    return {
        "v": v0,
        "T": T0 + cs.a * T1 + cs.b * T2,
        "p": p0 + cs.a * p1 + cs.b * p2,
        "T0": T0,
        "T1": T1,
        "T2": T2,
    }


def corrected_field_set(cs: CorrectionSet, include_corrections=True):
    """4-D fields of the corrected solution under the exact van der Waals law.

    p and s come from the exact van der Waals potential evaluated on the
    corrected (v, T); u is the base flow, whose first-order corrections
    vanish. ``include_corrections=False`` keeps T = T0 (negative control).
    """
    sol = cs.base
    model = thermo.PotentialModel.van_der_waals(cs.a, cs.b, n=sol.n, R=sol.R, exact=True)

    def v(t, x, y, z):
        return volume_profile(sol, similarity_variable(t, x, y, z))

    def T(t, x, y, z):
        r = similarity_variable(t, x, y, z)
        T = temperature_profile(sol, r)
        if include_corrections:
            T = T + cs.a * t1_correction(cs, r) + cs.b * t2_correction(cs, r)
        return T

    def u(t, x, y, z):
        return flow_field(sol, t, x, y, z)

    return verify.fields_from_state(v, T, u, model, source=cs)


def correction_order_check(cs: CorrectionSet, points, factors=(1.0, 0.5, 0.25),
                           include_corrections=True, h=1e-5):
    """Empirical order of the full residual in the size of (a, b).

    The residual of the corrected fields is evaluated at (a, b) scaled by
    each factor; for correct first-order terms it shrinks by ~4 per halving.
    """
    law = cs.base.law
    q = cs.base.q
    residuals = []
    for f in factors:
        fs = corrected_field_set(cs.scaled(f), include_corrections)
        residuals.append(max(
            verify.residual_norm(verify.pde_residual(fs, law, q, P, h)) for P in points
        ))
    residuals = np.array(residuals)
    ratios = residuals[:-1] / residuals[1:]
    return {
        "factors": list(factors),
        "residuals": residuals.tolist(),
        "ratios": ratios.tolist(),
        "orders": (np.log(ratios) / np.log(np.divide(factors[:-1], factors[1:]))).tolist(),
        "passed": bool(np.all((ratios >= 3.2) & (ratios <= 4.8))),
    }
