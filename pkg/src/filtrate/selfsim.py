"""
Self-similar filtration of an ideal gas.

Solutions invariant under rotations and the scaling t -> e^{2l} t,
x -> e^l x depend on (t, x, y, z) only through

    r = sqrt((x^2 + y^2 + z^2) / t),

and take the form

    v(r) = R C1 r^(3/(1-q)),    dp/dr = -r / (2 mu(v, T)),    T = p v / R.

The pressure equation is closed in p because mu depends on T = p v / R.
Four mobility laws integrate in closed form (``PressureMode.CASE1`` ..
``CASE4``); any other law uses ``PressureMode.NUMERIC``.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from .media import MediumFamily, MediumLaw

logger = logging.getLogger(__name__)


class PressureCrossing(RuntimeError):
    """Numeric pressure reached zero; ``r_cross`` is where it happened."""

    def __init__(self, r_cross):
        super().__init__(f"pressure reached zero at r={r_cross:.12g}")
        self.r_cross = r_cross


class PressureMode(str, enum.Enum):
    CASE1 = "case1"
    CASE2 = "case2"
    CASE3 = "case3"
    CASE4 = "case4"
    NUMERIC = "numeric"


def _is_alpha_v_over_T(law):
    pl = law.as_power_law()
    return pl is not None and pl[1] == 1 and pl[2] == -1


@dataclass(frozen=True)
class SelfSimilarSolution:
    """Parameters of one self-similar solution.

    ``anchor`` = (r0, p0) is the initial condition of the numeric pressure
    integration and is required for ``PressureMode.NUMERIC``. ``n`` is the
    ideal-gas degrees-of-freedom parameter used for the entropy field.
    """

    q: float
    C1: float
    C2: float
    R: float
    law: MediumLaw
    pressure_mode: PressureMode = PressureMode.CASE2
    anchor: Optional[tuple] = None
    n: float = 3.0

    def __post_init__(self):
        object.__setattr__(self, "pressure_mode", PressureMode(self.pressure_mode))
        if self.q == 1:
            raise ValueError("porosity q = 1 is excluded")
        if not self.R > 0:
            raise ValueError("R must be positive")
        mode = self.pressure_mode
        law = self.law
        pl = law.as_power_law()
        if mode is PressureMode.CASE1:
            if law.family is not MediumFamily.RATIO_POWER or law.beta == -1:
                raise ValueError("case1 needs mu = alpha (T/v)^beta with beta != -1")
        elif mode is PressureMode.CASE2:
            if not _is_alpha_v_over_T(law):
                raise ValueError("case2 needs mu = alpha v / T")
        elif mode is PressureMode.CASE3:
            if pl is None:
                raise ValueError("case3 needs mu = alpha v^beta T^gamma")
            _, b, g = pl
            if g == -1 or 3 * g + 3 * b + 2 * self.q - 2 == 0:
                raise ValueError("case3 needs gamma != -1 and 3 gamma + 3 beta + 2 q - 2 != 0")
        elif mode is PressureMode.CASE4:
            if pl is None or pl[2] != -1:
                raise ValueError("case4 needs mu = alpha v^beta / T")
            if 3 * pl[1] + 2 * self.q - 5 == 0:
                raise ValueError("case4 needs 3 beta + 2 q - 5 != 0")
        else:
            if self.anchor is None:
                raise ValueError("numeric pressure mode needs an anchor (r0, p0)")
            r0, p0 = self.anchor
            if not (r0 > 0 and p0 > 0):
                raise ValueError("anchor needs r0 > 0 and p0 > 0")

    @property
    def exponent(self):
        """Power of r in v(r): 3 / (1 - q)."""
        return 3.0 / (1.0 - self.q)

    def v(self, r):
        return volume_profile(self, r)

    def p(self, r):
        return pressure(self, r)

    def T(self, r):
        return temperature_profile(self, r)


def similarity_variable(t, x, y, z):
    t = np.asarray(t, dtype=float)
    if np.any(~(t > 0)):
        raise ValueError(f"similarity variable needs t > 0, got t={t}")
    return np.sqrt((np.square(x) + np.square(y) + np.square(z)) / t)


def _check_r(r):
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise ValueError(f"profiles need r > 0, got r={r}")
    return r


def volume_profile(sol: SelfSimilarSolution, r):
    r = _check_r(r)
    return sol.R * sol.C1 * r**sol.exponent


def _volume_derivatives(sol, r):
    k = sol.exponent
    v = volume_profile(sol, r)
    return v, k * v / r, k * (k - 1) * v / r**2


def pressure_closed_form(sol: SelfSimilarSolution, r):
    """Closed-form pressure of cases 1-4.

    case1  mu = alpha (T/v)^beta      p = R ((1+beta)(C2 - r^2)/(4 alpha R))^(1/(1+beta))
    case2  mu = alpha v/T             p = C2 exp(-r^2/(4 alpha R))
    case3  mu = alpha v^beta T^gamma  p = (C2 + K r^e)^(1/(1+gamma)),  e = (3gamma+3beta+2q-2)/(q-1)
    case4  mu = alpha v^beta / T      p = C2 exp(K r^e),               e = (3beta+2q-5)/(q-1)
    """
    mode = sol.pressure_mode
    r = np.asarray(r, dtype=float)
    if mode is not PressureMode.CASE2:
        r = _check_r(r)
    elif np.any(r < 0):
        raise ValueError("r must be non-negative")
    R, q, C1, C2 = sol.R, sol.q, sol.C1, sol.C2
    alpha = sol.law.alpha
    if mode is PressureMode.CASE1:
        beta = sol.law.beta
        base = (1 + beta) * (C2 - r**2) / (4 * alpha * R)
        if np.any(base < 0):
            raise ValueError("case1 pressure base is negative (r^2 > C2)")
        return R * base ** (1.0 / (1 + beta))
    if mode is PressureMode.CASE2:
        return C2 * np.exp(-(r**2) / (4 * alpha * R))
    _, beta, gamma = sol.law.as_power_law()
    if mode is PressureMode.CASE3:
        d = 3 * gamma + 3 * beta + 2 * q - 2
        K = C1 ** (-beta - gamma) * (1 + gamma) * (1 - q) / (2 * alpha * R**beta * d)
        base = C2 + K * r ** (d / (q - 1))
        if np.any(base < 0):
            raise ValueError("case3 pressure base is negative")
        return base ** (1.0 / (1 + gamma))
    if mode is PressureMode.CASE4:
        d = 3 * beta + 2 * q - 5
        K = C1 ** (1 - beta) * (1 - q) / (2 * alpha * R**beta * d)
        return C2 * np.exp(K * r ** (d / (q - 1)))
    raise ValueError("pressure_closed_form needs a closed-form pressure mode")


def _pressure_rhs(sol, r, p):
    v = volume_profile(sol, r)
    return -r / (2 * sol.law(v, p * v / sol.R))


def pressure_numeric(sol: SelfSimilarSolution, r0, p0, r, rtol=1e-9, atol=0.0):
    """Integrate dp/dr = -r / (2 mu(v(r), p v(r) / R)) from (r0, p0) to r.

    ``r`` may be an array; points on either side of ``r0`` are handled by
    two integrations. Raises :class:`PressureCrossing` if p reaches zero.
    """
    if not (r0 > 0 and p0 > 0):
        raise ValueError("pressure_numeric needs r0 > 0 and p0 > 0")
    r = _check_r(r)
    flat = r.ravel()
    out = np.empty_like(flat)

    def rhs(rr, y):
        if y[0] <= 0:
            return [0.0]
        return [_pressure_rhs(sol, rr, y[0])]

    def hit_zero(rr, y):
        return y[0]

    hit_zero.terminal = True

    for side in (flat >= r0, flat < r0):
        idx = np.flatnonzero(side)
        if idx.size == 0:
            continue
        targets = flat[idx]
        order = np.argsort(targets)
        if targets[0] < r0:
            order = order[::-1]
        ts = targets[order]
        end = ts[-1]
        if end == r0:
            out[idx] = p0
            continue
        res = solve_ivp(
            rhs, (r0, end), [p0], method="DOP853", t_eval=ts, rtol=rtol,
            atol=atol if atol > 0 else 1e-14 * p0, events=hit_zero,
        )
        if res.status == 1:
            raise PressureCrossing(float(res.t_events[0][0]))
        if not res.success:
            raise RuntimeError(f"pressure integration failed: {res.message}")
        out[idx[order]] = res.y[0]
    return out.reshape(r.shape) if r.ndim else float(out[0])


def pressure(sol: SelfSimilarSolution, r):
    """Pressure in the solution's configured mode."""
    if sol.pressure_mode is PressureMode.NUMERIC:
        r0, p0 = sol.anchor
        return pressure_numeric(sol, r0, p0, r, rtol=1e-12)
    return pressure_closed_form(sol, r)


def pressure_derivative(sol: SelfSimilarSolution, r, p=None):
    """dp/dr from the pressure ODE (exact for the closed forms)."""
    r = _check_r(r)
    if p is None:
        p = pressure(sol, r)
    return _pressure_rhs(sol, r, p)


def temperature_profile(sol: SelfSimilarSolution, r):
    r = _check_r(r)
    return pressure(sol, r) * volume_profile(sol, r) / sol.R


def flow_field(sol: SelfSimilarSolution, t, x, y, z):
    """Darcy velocity u = -mu grad p as an array of shape (3, ...)."""
    x, y, z = (np.asarray(c, dtype=float) for c in (x, y, z))
    t = np.asarray(t, dtype=float)
    d = np.sqrt(x**2 + y**2 + z**2)
    if np.any(d == 0):
        raise ValueError("flow field undefined at the origin")
    r = similarity_variable(t, x, y, z)
    v = volume_profile(sol, r)
    p = pressure(sol, r)
    mu = sol.law(v, p * v / sol.R)
    dp = -r / (2 * mu)
    w = -mu * dp / (np.sqrt(t) * d)
    return np.stack([w * x, w * y, w * z])


def reduced_equations(r, v, T, mu, q, R, n):
    """Residuals of the two radial equations.

    ``v``, ``T`` are (value, first, second) derivative triples in r and
    ``mu`` is (value, d/dr). The first equation is the product of the Darcy
    factor 2 R mu (v' T - v T') - r v^2 and the isentrope factor
    2 v' T + n v T'; the second is mass conservation

        2 R mu (r v (v'' T - v T'') + (2 v - 3 r v') D)
            + r v (2 R mu' D + q r v v') = 0,   D = v' T - v T'.

    Each residual is divided by the sum of magnitudes of its terms, so a
    value near machine epsilon means the equation holds exactly; 0/0 is
    reported as 0.
    """
    v0, v1, v2 = v
    T0, T1, T2 = T
    m0, m1 = mu
    D = v1 * T0 - v0 * T1
    darcy = (2 * R * m0 * D, -r * v0**2)
    isen = (2 * v1 * T0, n * v0 * T1)
    terms2 = (
        2 * R * m0 * r * v0 * v2 * T0,
        -2 * R * m0 * r * v0**2 * T2,
        2 * R * m0 * (2 * v0 - 3 * r * v1) * D,
        2 * R * r * v0 * m1 * D,
        q * r**2 * v0**2 * v1,
    )

    def rel(num, den):
        den = np.asarray(den, dtype=float)
        return np.where(den == 0, 0.0, np.abs(num) / np.where(den == 0, 1.0, den))

    res1 = rel(sum(darcy) * sum(isen),
               (abs(darcy[0]) + abs(darcy[1])) * (abs(isen[0]) + abs(isen[1])))
    res2 = rel(sum(terms2), sum(abs(t) for t in terms2))
    return res1, res2


def profile_jets(sol: SelfSimilarSolution, r):
    """(v, v', v''), (T, T', T''), (mu, mu') along the solution at r.

    Closed-form modes use analytic derivatives; the numeric mode applies
    4th-order central differences with step 1e-4 r to the pressure.
    """
    r = _check_r(r)
    R = sol.R
    v, dv, d2v = _volume_derivatives(sol, r)
    if sol.pressure_mode is PressureMode.NUMERIC:
        h = 1e-4 * r
        nodes = np.stack([r - 2 * h, r - h, r, r + h, r + 2 * h])
        P = pressure(sol, nodes)
        p = P[2]
        dp = (P[0] - 8 * P[1] + 8 * P[3] - P[4]) / (12 * h)
        d2p = (-P[0] + 16 * P[1] - 30 * P[2] + 16 * P[3] - P[4]) / (12 * h**2)
    else:
        p = pressure_closed_form(sol, r)
        dp = pressure_derivative(sol, r, p)
    T = p * v / R
    dT = (dp * v + p * dv) / R
    mu, mu_v, mu_T = sol.law.partials(v, T)
    dmu = mu_v * dv + mu_T * dT
    if sol.pressure_mode is not PressureMode.NUMERIC:
        # differentiate dp/dr = -r / (2 mu)
        d2p = -1.0 / (2 * mu) + r * dmu / (2 * mu**2)
    d2T = (d2p * v + 2 * dp * dv + p * d2v) / R
    return (v, dv, d2v), (T, dT, d2T), (mu, dmu)


def reduced_ode_residual(sol: SelfSimilarSolution, r):
    """Scaled residuals (res1, res2) of the radial equations at r."""
    vj, Tj, mj = profile_jets(sol, r)
    return reduced_equations(np.asarray(r, float), vj, Tj, mj, sol.q, sol.R, sol.n)
