"""
Thermodynamic states from a Massieu-Planck potential phi(v, T).

State relations::

    p = R T phi_v,    eps = R T^2 phi_T,    s = R (phi + T phi_T)

Supported potentials:

    ideal            phi = n/2 ln T + ln v
    vdw_exact        phi = n/2 ln T + ln(v - b) + a/(R v T)
    vdw_first_order  phi = n/2 ln T + ln v - b/v + a/(R v T)
    virial           phi = n/2 ln T + ln v - sum_k A_k(T) v^-k / k

All functions accept scalars or numpy arrays for ``v`` and ``T``.
"""
from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import brentq, minimize_scalar

logger = logging.getLogger(__name__)


class ThermoDomainError(ValueError):
    """State outside the domain of the potential (v <= b, T <= 0, ...)."""


class NoRootError(RuntimeError):
    """A requested curve (spinodal, critical point) does not exist."""


class ConvergenceError(RuntimeError):
    """Iterative solver failed; ``diagnostics`` holds the iterate history."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CoexistenceCollapse(ConvergenceError):
    """The two coexisting phases merged (temperature at or above critical)."""


class PotentialKind(str, enum.Enum):
    IDEAL = "ideal"
    VDW_EXACT = "vdw_exact"
    VDW_FIRST_ORDER = "vdw_first_order"
    VIRIAL = "virial"


def _coefficient_derivatives(coeff):
    """Return callables (A, A', A'') for one virial coefficient.

    Objects with a ``deriv`` method (numpy polynomials) are differentiated
    exactly; plain callables fall back to central differences.
    """
    if hasattr(coeff, "deriv"):
        d1 = coeff.deriv(1)
        d2 = coeff.deriv(2)
        return coeff, d1, d2

    def d1(T):
        h = 1e-5 * np.maximum(np.abs(T), 1.0)
        return (coeff(T + h) - coeff(T - h)) / (2 * h)

    def d2(T):
        h = 1e-4 * np.maximum(np.abs(T), 1.0)
        return (coeff(T + h) - 2 * coeff(T) + coeff(T - h)) / h**2

    return coeff, d1, d2


@dataclass(frozen=True)
class PotentialModel:
    """Massieu-Planck potential of a gas.

    ``R`` is the specific gas constant; it enters ``phi`` through the
    attraction term ``a/(R v T)`` of the van der Waals kinds.
    """

    kind: PotentialKind = PotentialKind.IDEAL
    n: float = 3.0
    a: float = 0.0
    b: float = 0.0
    R: float = 1.0
    virial_coeffs: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "kind", PotentialKind(self.kind))
        if not self.n > 0:
            raise ValueError(f"n must be positive, got {self.n}")
        if self.a < 0 or self.b < 0:
            raise ValueError(f"a and b must be non-negative, got a={self.a}, b={self.b}")
        if not self.R > 0:
            raise ValueError(f"R must be positive, got {self.R}")
        if self.kind is PotentialKind.VIRIAL:
            object.__setattr__(self, "virial_coeffs", tuple(self.virial_coeffs))
        elif self.virial_coeffs:
            raise ValueError("virial_coeffs only apply to the virial kind")

    @classmethod
    def ideal(cls, n=3.0, R=1.0):
        return cls(PotentialKind.IDEAL, n=n, R=R)

    @classmethod
    def van_der_waals(cls, a, b, n=3.0, R=1.0, exact=True):
        kind = PotentialKind.VDW_EXACT if exact else PotentialKind.VDW_FIRST_ORDER
        return cls(kind, n=n, a=a, b=b, R=R)

    @classmethod
    def virial(cls, coeffs: Sequence[Callable], n=3.0, R=1.0):
        return cls(PotentialKind.VIRIAL, n=n, R=R, virial_coeffs=tuple(coeffs))

    @property
    def excluded_volume(self):
        return self.b if self.kind is PotentialKind.VDW_EXACT else 0.0


@dataclass(frozen=True)
class PotentialJet:
    phi: np.ndarray
    phi_v: np.ndarray
    phi_T: np.ndarray
    phi_vv: np.ndarray
    phi_TT: np.ndarray
    phi_vT: np.ndarray
    phi_vvv: np.ndarray


@dataclass(frozen=True)
class ThermoState:
    p: np.ndarray
    epsilon: np.ndarray
    s: np.ndarray
    v: np.ndarray
    T: np.ndarray
    R: float


def _check_domain(model, v, T):
    v = np.asarray(v, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(~(T > 0)):
        raise ThermoDomainError(f"temperature must be positive, got T={T}")
    if np.any(~(v > model.excluded_volume)) or np.any(~(v > 0)):
        raise ThermoDomainError(
            f"specific volume must exceed {model.excluded_volume}, got v={v}"
        )
    return v, T


def eval_potential(model: PotentialModel, v, T) -> PotentialJet:
    """phi and its partial derivatives at (v, T), evaluated analytically."""
    v, T = _check_domain(model, v, T)
    n, a, b, R = model.n, model.a, model.b, model.R
    kind = model.kind

    phi = 0.5 * n * np.log(T) + np.log(v)
    phi_v = 1.0 / v
    phi_T = 0.5 * n / T
    phi_vv = -1.0 / v**2
    phi_TT = -0.5 * n / T**2
    phi_vT = np.zeros(np.broadcast(v, T).shape)
    phi_vvv = 2.0 / v**3

    if kind in (PotentialKind.VDW_EXACT, PotentialKind.VDW_FIRST_ORDER):
        if kind is PotentialKind.VDW_EXACT:
            w = v - b
            phi = 0.5 * n * np.log(T) + np.log(w)
            phi_v = 1.0 / w
            phi_vv = -1.0 / w**2
            phi_vvv = 2.0 / w**3
        else:
            phi = phi - b / v
            phi_v = phi_v + b / v**2
            phi_vv = phi_vv - 2 * b / v**3
            phi_vvv = phi_vvv + 6 * b / v**4
        att = a / (R * v * T)
        phi = phi + att
        phi_v = phi_v - att / v
        phi_vv = phi_vv + 2 * att / v**2
        phi_vvv = phi_vvv - 6 * att / v**3
        phi_T = phi_T - att / T
        phi_TT = phi_TT + 2 * att / T**2
        phi_vT = phi_vT + att / (v * T)
    elif kind is PotentialKind.VIRIAL:
        for k, coeff in enumerate(model.virial_coeffs, start=1):
            A, dA, d2A = _coefficient_derivatives(coeff)
            Ak, dAk, d2Ak = A(T), dA(T), d2A(T)
            vk = v ** (-k)
            phi = phi - Ak * vk / k
            phi_v = phi_v + Ak * vk / v
            phi_vv = phi_vv - (k + 1) * Ak * vk / v**2
            phi_vvv = phi_vvv + (k + 1) * (k + 2) * Ak * vk / v**3
            phi_T = phi_T - dAk * vk / k
            phi_TT = phi_TT - d2Ak * vk / k
            phi_vT = phi_vT + dAk * vk / v

    return PotentialJet(phi, phi_v, phi_T, phi_vv, phi_TT, phi_vT, phi_vvv)


def state_from_potential(model: PotentialModel, v, T) -> ThermoState:
    jet = eval_potential(model, v, T)
    v = np.asarray(v, dtype=float)
    T = np.asarray(T, dtype=float)
    R = model.R
    return ThermoState(
        p=R * T * jet.phi_v,
        epsilon=R * T**2 * jet.phi_T,
        s=R * (jet.phi + T * jet.phi_T),
        v=v,
        T=T,
        R=R,
    )


def pressure(model, v, T):
    return model.R * T * eval_potential(model, v, T).phi_v


def entropy(model, v, T):
    jet = eval_potential(model, v, T)
    return model.R * (jet.phi + T * jet.phi_T)


@dataclass(frozen=True)
class Applicability:
    convexity_ok: np.ndarray
    heat_capacity_ok: np.ndarray


def applicability(model: PotentialModel, v, T) -> Applicability:
    """Strict applicability inequalities; the boundary phi_vv = 0 is not ok."""
    jet = eval_potential(model, v, T)
    T = np.asarray(T, dtype=float)
    return Applicability(
        convexity_ok=np.asarray(jet.phi_vv < 0),
        heat_capacity_ok=np.asarray(T * jet.phi_TT + 2 * jet.phi_T > 0),
    )


def spinodal_temperature(model: PotentialModel, v, T_bracket=(1e-8, 1e8)):
    """Temperature at which phi_vv(v, T) = 0.

    The van der Waals kinds use their closed forms; the virial kind is solved
    by a log-spaced scan of ``T_bracket`` followed by Brent's method.
    """
    kind = model.kind
    if kind is PotentialKind.IDEAL or (
        kind in (PotentialKind.VDW_EXACT, PotentialKind.VDW_FIRST_ORDER) and model.a == 0
    ):
        raise NoRootError("phi_vv < 0 everywhere; no spinodal")
    v = float(v)
    if kind is PotentialKind.VDW_EXACT:
        if not v > model.b:
            raise ThermoDomainError(f"v={v} must exceed b={model.b}")
        T = 2 * model.a * (v - model.b) ** 2 / (model.R * v**3)
    elif kind is PotentialKind.VDW_FIRST_ORDER:
        if not v > 0:
            raise ThermoDomainError(f"v={v} must be positive")
        T = 2 * model.a / (model.R * (v + 2 * model.b))
    else:
        grid = np.geomspace(*T_bracket, 400)
        vals = eval_potential(model, np.full_like(grid, v), grid).phi_vv
        idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        if idx.size == 0:
            raise NoRootError(f"phi_vv has fixed sign over T in {T_bracket} at v={v}")
        i = idx[-1]
        T = brentq(
            lambda T: float(eval_potential(model, v, T).phi_vv),
            grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps,
        )
    # phi_vv is a difference of two terms that both blow up as v -> b, so the
    # residual is taken relative to the repulsive term.
    w = v - model.excluded_volume
    resid = float(eval_potential(model, v, T).phi_vv) * w**2
    if abs(resid) > 1e-10:
        raise ConvergenceError(f"spinodal residual {resid:.3e} at v={v}", {"T": T})
    return float(T)


def _spinodal_volume_scan(model):
    lo = model.b if model.b > 0 else 1e-8
    return np.geomspace(lo * (1 + 1e-6), lo * 1e6 if model.b > 0 else 1e8, 1500)


def critical_point(model: PotentialModel, tol=1e-13, maxiter=50):
    """(v_c, T_c): simultaneous root of phi_vv and phi_vvv.

    Start from the maximum of the spinodal curve on a volume scan, then
    polish with 2-D Newton on the dimensionless pair
    (v^2 phi_vv, v^3 phi_vvv) using a central-difference Jacobian.
    """
    if model.kind is PotentialKind.IDEAL:
        raise NoRootError("ideal gas has no critical point")
    vs = _spinodal_volume_scan(model)
    Ts = np.empty_like(vs)
    for i, v in enumerate(vs):
        try:
            Ts[i] = spinodal_temperature(model, v)
        except (NoRootError, ThermoDomainError):
            Ts[i] = np.nan
    if np.all(np.isnan(Ts)):
        raise NoRootError("no spinodal found; no critical point")
    i = int(np.nanargmax(Ts))
    if i == 0 or i == len(vs) - 1 or np.isnan(Ts[i - 1]) or np.isnan(Ts[i + 1]):
        raise NoRootError("spinodal temperature has no interior maximum; no critical point")

    def F(x):
        v, T = np.exp(x)
        jet = eval_potential(model, v, T)
        return np.array([jet.phi_vv * v**2, jet.phi_vvv * v**3])

    x = np.log([vs[i], Ts[i]])
    history = []
    for _ in range(maxiter):
        f = F(x)
        history.append((*np.exp(x), *f))
        if np.max(np.abs(f)) < tol:
            break
        J = np.empty((2, 2))
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = 1e-6
            J[:, j] = (F(x + dx) - F(x - dx)) / 2e-6
        try:
            step = np.linalg.solve(J, -f)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular Jacobian in critical_point", {"history": history}) from exc
        step = np.clip(step, -0.5, 0.5)
        x = x + step
        if np.max(np.abs(step)) < 1e-15:
            break
    f = F(x)
    if np.max(np.abs(f)) > 1e-10:
        raise ConvergenceError(
            f"critical point not converged, residual {np.max(np.abs(f)):.3e}",
            {"history": history},
        )
    v_c, T_c = np.exp(x)
    return float(v_c), float(T_c)


def spinodal_volumes(model: PotentialModel, T):
    """The two volumes bracketing the unstable region at temperature T < T_c."""
    vs = _spinodal_volume_scan(model)
    vals = eval_potential(model, vs, np.full_like(vs, T)).phi_vv

    def g(v):
        return float(eval_potential(model, v, T).phi_vv)

    i = int(np.argmax(vals * vs**2))
    v_top = vs[i]
    if vals[i] <= 0 and 0 < i < len(vs) - 1:
        res = minimize_scalar(
            lambda v: -g(v) * v**2, bounds=(vs[i - 1], vs[i + 1]), method="bounded",
            options={"xatol": 1e-14 * vs[i]},
        )
        v_top = res.x
    if not g(v_top) > 0:
        raise NoRootError(f"no unstable region at T={T}")
    lo = brentq(g, vs[0], v_top, xtol=1e-300, rtol=1e-15)
    hi = brentq(g, v_top, vs[-1], xtol=1e-300, rtol=1e-15)
    return lo, hi


def _coexistence_equations(model, T, v1, v2):
    j1 = eval_potential(model, v1, T)
    j2 = eval_potential(model, v2, T)
    F = np.array([
        j1.phi_v - j2.phi_v,
        j2.phi - j1.phi + v1 * j1.phi_v - v2 * j2.phi_v,
    ])
    J = np.array([
        [j1.phi_vv, -j2.phi_vv],
        [v1 * j1.phi_vv, -v2 * j2.phi_vv],
    ])
    return F, J


def _scaled_norm(F, v1):
    # phi_v carries units of 1/v; scale it by the liquid volume
    return max(abs(F[0]) * v1, abs(F[1]))


def _newton_coexistence(model, T, v1, v2, tol, maxiter):
    floor = model.excluded_volume
    F, J = _coexistence_equations(model, T, v1, v2)
    norm = _scaled_norm(F, v1)
    history = [(v1, v2, norm)]
    for _ in range(maxiter):
        if norm < tol:
            break
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as exc:
            raise ConvergenceError("singular coexistence Jacobian", {"history": history}) from exc
        lam = 1.0
        while lam > 1e-10:
            n1, n2 = v1 + lam * step[0], v2 + lam * step[1]
            if n1 > floor and n2 > n1:
                Fn, Jn = _coexistence_equations(model, T, n1, n2)
                nn = _scaled_norm(Fn, n1)
                if nn < norm or nn < tol:
                    break
            lam *= 0.5
        else:
            if norm < 1e-10:
                # stagnated at the rounding floor
                break
            raise ConvergenceError("line search failed in coexistence solve", {"history": history})
        v1, v2, F, J, norm = n1, n2, Fn, Jn, nn
        history.append((v1, v2, norm))
    if norm >= max(tol, 1e-10):
        raise ConvergenceError(f"coexistence did not converge at T={T}", {"history": history})
    return v1, v2, history


def _maxwell_bracket_guess(model, T, v_lo, v_hi):
    """Coexistence pair from nested 1-D solves on the pressure level.

    For each trial pressure the liquid and vapour roots of p(v) = P are
    found on the two stable branches; the outer solve zeroes the Gibbs
    difference. Used when Newton from the spinodal guess fails.
    """
    R = model.R
    floor = model.excluded_volume

    def p(v):
        return R * T * float(eval_potential(model, v, T).phi_v)

    # p has a local minimum at v_lo and a local maximum at v_hi
    p_top = p(v_hi)
    p_bot = max(p(v_lo), p_top * 1e-200)

    def liquid(P):
        a = floor + (v_lo - floor) * 1e-14 if floor > 0 else v_lo * 1e-14
        return brentq(lambda v: p(v) - P, a, v_lo, xtol=1e-300, rtol=1e-15)

    def vapour(P):
        top = 2 * v_hi
        while p(top) > P:
            top *= 2
        return brentq(lambda v: p(v) - P, v_hi, top, xtol=1e-300, rtol=1e-15)

    def gibbs(logP):
        P = np.exp(logP)
        v1, v2 = liquid(P), vapour(P)
        j1, j2 = eval_potential(model, v1, T), eval_potential(model, v2, T)
        return float(j2.phi - j1.phi + v1 * j1.phi_v - v2 * j2.phi_v)

    span = np.log(p_top) - np.log(p_bot)
    logP = brentq(gibbs, np.log(p_bot) + 1e-12 * span, np.log(p_top) - 1e-12 * span, xtol=1e-15)
    P = np.exp(logP)
    return liquid(P), vapour(P)


def coexistence_at_T(model: PotentialModel, T, guess=None, tol=1e-13, maxiter=100):
    """Coexisting volumes (v1, v2) at temperature T.

    Damped Newton on the pair (phi_v difference, Gibbs difference). Without a
    guess the start is taken from the spinodal volumes: v1 halfway between
    the excluded volume and the low spinodal, v2 at twice the high spinodal.
    """
    T = float(T)
    if guess is not None:
        v1, v2 = map(float, guess)
        if abs(v2 - v1) < 1e-8:
            raise CoexistenceCollapse(
                f"guess pair collapsed at T={T}", {"guess": (v1, v2)}
            )
        fallback = None
    else:
        try:
            v_lo, v_hi = spinodal_volumes(model, T)
        except NoRootError as exc:
            raise CoexistenceCollapse(f"no two-phase region at T={T}") from exc
        v1 = 0.5 * (model.excluded_volume + v_lo)
        v2 = 2 * v_hi
        fallback = (v_lo, v_hi)

    try:
        v1, v2, _ = _newton_coexistence(model, T, v1, v2, tol, maxiter)
        if abs(v2 - v1) < 1e-8 and fallback is not None:
            # slid onto the trivial root v1 = v2
            raise ConvergenceError("collapsed onto trivial root")
    except ConvergenceError:
        if fallback is None:
            try:
                fallback = spinodal_volumes(model, T)
            except NoRootError as exc:
                raise CoexistenceCollapse(f"no two-phase region at T={T}") from exc
        logger.debug("Newton from spinodal guess failed at T=%g; bracketing", T)
        g1, g2 = _maxwell_bracket_guess(model, T, *fallback)
        v1, v2, _ = _newton_coexistence(model, T, g1, g2, tol, maxiter)

    if abs(v2 - v1) < 1e-8:
        raise CoexistenceCollapse(f"phases collapsed at T={T}", {"v1": v1, "v2": v2})
    if v1 > v2:
        v1, v2 = v2, v1
    F, _ = _coexistence_equations(model, T, v1, v2)
    if np.max(np.abs(F)) > 1e-10 and _scaled_norm(F, v1) > 1e-10:
        raise ConvergenceError(f"coexistence residual too large at T={T}", {"F": F})
    return float(v1), float(v2)


def coexistence_curve(model: PotentialModel, T_lo, T_hi, steps):
    """Rows (T, v1, v2) from T_hi down to T_lo, each seeded by its predecessor."""
    if steps < 1 or (steps == 1 and T_lo != T_hi) or T_lo > T_hi:
        raise ValueError("need T_lo <= T_hi and steps >= 2 (or one step with T_lo == T_hi)")
    rows = []
    guess = None
    for T in np.linspace(T_hi, T_lo, steps):
        try:
            v1, v2 = coexistence_at_T(model, T, guess)
        except ConvergenceError as exc:
            if guess is None:
                raise ConvergenceError(f"coexistence failed at T={T}", exc.diagnostics) from exc
            try:
                v1, v2 = coexistence_at_T(model, T)
            except ConvergenceError as exc2:
                raise ConvergenceError(f"coexistence failed at T={T}", exc2.diagnostics) from exc2
        rows.append((float(T), v1, v2))
        guess = (v1, v2)
    return rows


def caloric_compatibility_residual(A, B, v_grid, T_grid, h=1e-3):
    """max |(B/T^2)_v - (A/T)_T| over a (v, T) grid by central differences.

    ``A`` is the thermic equation p = A(v, T), ``B`` the caloric one
    eps = B(v, T). ``h`` is a relative step: each node uses h * v and h * T.
    """
    if not h > 0:
        raise ValueError("h must be positive")
    V, TT = np.meshgrid(np.asarray(v_grid, float), np.asarray(T_grid, float), indexing="ij")
    hv = h * V
    hT = h * TT
    dB = (B(V + hv, TT) / TT**2 - B(V - hv, TT) / TT**2) / (2 * hv)
    dA = (A(V, TT + hT) / (TT + hT) - A(V, TT - hT) / (TT - hT)) / (2 * hT)
    return float(np.max(np.abs(dB - dA)))
