"""
Finite-difference residuals of the filtration system

    u = -mu(v, T) grad p                 (Darcy)
    q v_t + u . grad v = v div u         (mass)
    s_t + u . grad s = 0                 (isentropic flow)

for fields given as callables of (t, x, y, z), and checks that symmetry
flows map solutions to solutions.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import thermo
from .media import GeneratorDescriptor, MediumLaw, generator_flow
from .selfsim import SelfSimilarSolution, flow_field, similarity_variable, temperature_profile, volume_profile


@dataclass(frozen=True)
class FieldSet:
    """Scalar fields v, T, p, s and the velocity u of one candidate solution.

    Every callable takes broadcastable arrays (t, x, y, z); ``u`` returns an
    array of shape (3, ...).
    """

    v: Callable
    T: Callable
    p: Callable
    s: Callable
    u: Callable
    potential: Optional[thermo.PotentialModel] = None
    source: object = field(default=None, compare=False)


def fields_from_state(v, T, u, potential, source=None):
    """FieldSet whose p and s follow from (v, T) through the potential."""

    def p(t, x, y, z):
        return thermo.pressure(potential, v(t, x, y, z), T(t, x, y, z))

    def s(t, x, y, z):
        return thermo.entropy(potential, v(t, x, y, z), T(t, x, y, z))

    return FieldSet(v=v, T=T, p=p, s=s, u=u, potential=potential, source=source)


def fields_from_solution(sol: SelfSimilarSolution) -> FieldSet:
    """The 4-D ideal-gas fields of a self-similar solution."""
    potential = thermo.PotentialModel.ideal(n=sol.n, R=sol.R)

    def v(t, x, y, z):
        return volume_profile(sol, similarity_variable(t, x, y, z))

    def T(t, x, y, z):
        return temperature_profile(sol, similarity_variable(t, x, y, z))

    def u(t, x, y, z):
        return flow_field(sol, t, x, y, z)

    return fields_from_state(v, T, u, potential, source=sol)


@dataclass(frozen=True)
class Residual:
    darcy: np.ndarray
    mass: float
    entropy: float

    def norms(self):
        return {
            "darcy": float(np.linalg.norm(self.darcy)),
            "mass": abs(float(self.mass)),
            "entropy": abs(float(self.entropy)),
        }


def _steps(point, h):
    return h * np.maximum(np.abs(point), 1.0)


def _stencil(point, steps):
    """Centre followed by +/- offsets along t, x, y, z (9 nodes)."""
    nodes = np.tile(point, (9, 1))
    for i in range(4):
        nodes[1 + 2 * i, i] += steps[i]
        nodes[2 + 2 * i, i] -= steps[i]
    return nodes


def _gradient(vals, steps):
    """Central differences (d_t, d_x, d_y, d_z) from stencil values."""
    return np.array([(vals[1 + 2 * i] - vals[2 + 2 * i]) / (2 * steps[i]) for i in range(4)])


def pde_residual(fields: FieldSet, law: MediumLaw, q, point, h=1e-4) -> Residual:
    """Darcy, mass and entropy residuals at ``point`` = (t, x, y, z).

    Derivatives are 2nd-order central differences with step
    h * max(|coord|, 1) per coordinate.
    """
    point = np.asarray(point, dtype=float)
    steps = _steps(point, h)
    if not point[0] - steps[0] > 0:
        raise ValueError("stencil leaves the domain t > 0")
    nodes = _stencil(point, steps)
    if np.any(np.linalg.norm(nodes[:, 1:], axis=1) == 0):
        raise ValueError("stencil touches the spatial origin")
    t, x, y, z = nodes.T

    v = np.asarray(fields.v(t, x, y, z), dtype=float)
    T = np.asarray(fields.T(t, x, y, z), dtype=float)
    p = np.asarray(fields.p(t, x, y, z), dtype=float)
    s = np.asarray(fields.s(t, x, y, z), dtype=float)
    u = np.asarray(fields.u(t, x, y, z), dtype=float)

    gv, gp, gs = _gradient(v, steps), _gradient(p, steps), _gradient(s, steps)
    div_u = sum((u[i, 3 + 2 * i] - u[i, 4 + 2 * i]) / (2 * steps[i + 1]) for i in range(3))
    u0 = u[:, 0]
    mu = law(v[0], T[0])

    darcy = u0 + mu * gp[1:]
    mass = q * gv[0] + u0 @ gv[1:] - v[0] * div_u
    ent = gs[0] + u0 @ gs[1:]
    return Residual(darcy=darcy, mass=float(mass), entropy=float(ent))


def isentropic_material_derivative(fields: FieldSet, point, h=1e-4):
    """s_t + u . grad s at ``point`` by central differences."""
    point = np.asarray(point, dtype=float)
    steps = _steps(point, h)
    if not point[0] - steps[0] > 0:
        raise ValueError("stencil leaves the domain t > 0")
    nodes = _stencil(point, steps)
    t, x, y, z = nodes.T
    gs = _gradient(np.asarray(fields.s(t, x, y, z), dtype=float), steps)
    u0 = np.asarray(fields.u(*point), dtype=float).reshape(3)
    return float(gs[0] + u0 @ gs[1:])


def residual_norm(res: Residual):
    n = res.norms()
    return float(np.sqrt(n["darcy"] ** 2 + n["mass"] ** 2 + n["entropy"] ** 2))


def convergence_orders(fields, law, q, point, h=1e-4, levels=3):
    """Residual norms at h, h/2, h/4, ... and the empirical orders between them.

    Returns a dict with per-group ``norms`` (lists over levels) and
    ``orders`` (log2 ratios of consecutive levels).
    """
    hs = [h / 2**i for i in range(levels)]
    norms = {"darcy": [], "mass": [], "entropy": [], "total": []}
    for hh in hs:
        res = pde_residual(fields, law, q, point, hh)
        for key, val in res.norms().items():
            norms[key].append(val)
        norms["total"].append(residual_norm(res))
    orders = {}
    for key, vals in norms.items():
        vals = np.asarray(vals)
        with np.errstate(divide="ignore", invalid="ignore"):
            orders[key] = list(np.log2(vals[:-1] / vals[1:]))
    return {"h": hs, "norms": norms, "orders": orders}


def _independent_block(gen, lam):
    """Linear part (4x4) of the induced map on (t, x, y, z)."""
    e = np.eye(6)
    cols = generator_flow(gen, lam, e[:4]) - generator_flow(gen, lam, np.zeros(6))
    return cols[:, :4].T


def transform_fields(fields: FieldSet, gen: GeneratorDescriptor, lam) -> FieldSet:
    """Pull ``fields`` along the flow of ``gen`` by parameter ``lam``.

    The graph point (Q, v(Q), T(Q)) is carried by the flow to (P, v', T').
    p and s are recomputed from (v', T') with the declared potential; u is
    carried as a velocity dx/dt through the Jacobian of the independent
    map, u' = (M_xt + M_xx u) / (M_tt + M_tx . u).
    """
    if fields.potential is None:
        raise ValueError("transform_fields needs a FieldSet with a declared potential")
    M = _independent_block(gen, lam)

    def preimage(t, x, y, z):
        P = np.stack(np.broadcast_arrays(
            *(np.asarray(c, dtype=float) for c in (t, x, y, z))), axis=-1)
        full = np.concatenate([P, np.ones(P.shape[:-1] + (2,))], axis=-1)
        Q = generator_flow(gen, -lam, full)[..., :4]
        return Q[..., 0], Q[..., 1], Q[..., 2], Q[..., 3]

    def graph(t, x, y, z):
        Q = preimage(t, x, y, z)
        vq = np.asarray(fields.v(*Q), dtype=float)
        Tq = np.asarray(fields.T(*Q), dtype=float)
        pts = np.stack([*np.broadcast_arrays(*Q, vq, Tq)], axis=-1)
        img = generator_flow(gen, lam, pts)
        return img[..., 4], img[..., 5]

    def v(t, x, y, z):
        return graph(t, x, y, z)[0]

    def T(t, x, y, z):
        return graph(t, x, y, z)[1]

    def u(t, x, y, z):
        Q = preimage(t, x, y, z)
        uq = np.asarray(fields.u(*Q), dtype=float)
        num = M[1:, :1].reshape((3,) + (1,) * (uq.ndim - 1)) + np.tensordot(M[1:, 1:], uq, axes=1)
        den = M[0, 0] + np.tensordot(M[0, 1:], uq, axes=1)
        return num / den

    return fields_from_state(v, T, u, fields.potential, source=(fields.source, gen.name, lam))


def symmetry_orbit_check(fields, gen, lam, points, law, q, h=1e-4):
    """Largest residual norm of the transformed fields over ``points``."""
    moved = transform_fields(fields, gen, lam)
    return max(residual_norm(pde_residual(moved, law, q, P, h)) for P in points)


def symmetry_orbit_report(fields, gen, lam, points, law, q, h=1e-4, tolerance=10.0):
    """Transformed residual against the untransformed floor.

    The floor is the largest residual of the original fields over the sample
    points and their preimages under the flow, since the transformed fields
    at P are built from the original ones at the preimage. The check passes
    when the transformed residual stays within ``tolerance`` times the floor.
    """
    points = [np.asarray(P, dtype=float) for P in points]
    pre = []
    for P in points:
        full = np.concatenate([P, [1.0, 1.0]])
        pre.append(generator_flow(gen, -lam, full)[:4])
    floor = max(residual_norm(pde_residual(fields, law, q, P, h)) for P in points + pre)
    moved = symmetry_orbit_check(fields, gen, lam, points, law, q, h)
    ratio = moved / floor if floor > 0 else (0.0 if moved == 0 else np.inf)
    return {"floor": float(floor), "transformed": float(moved), "ratio": float(ratio),
            "passed": bool(moved <= tolerance * floor)}
