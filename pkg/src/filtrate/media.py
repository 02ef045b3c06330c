"""
Mobility laws mu(v, T) of a porous medium and their point symmetries.

Every medium admits translations, rotations and the parabolic scaling
(X1..X8). Ideal-gas filtration picks up one or two more generators when
mu has one of the structural forms below (``f`` is a free function):

    row  family               mu(v, T)              extra generators
    1    f_of_v_t_power       f(v) T^alpha          X9 = (1+alpha) t d_t - T d_T
    2    f_of_t_v_power       f(T) v^alpha          X9 = (1-alpha) t d_t + v d_v
    3    power_law            alpha v^beta T^gamma  X9 = t d_t - (v d_v + T d_T)/(beta+gamma)
                                                    X10 = (1+gamma) v d_v + (1-beta) T d_T
    4    ratio_power          alpha (T/v)^beta      X9 = (1+beta) t d_t + v d_v
    5    f_of_vt_v_power      f(v T) v^(3-q)        X9 = (q-1) t d_t + v d_v - T d_T

Generators are affine vector fields on (t, x, y, z, v, T) and are stored as
a coefficient matrix plus a constant shift.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

COORDS = ("t", "x", "y", "z", "v", "T")
_IDX = {c: i for i, c in enumerate(COORDS)}


class MediumFamily(str, enum.Enum):
    F_OF_V_T_POWER = "f_of_v_t_power"
    F_OF_T_V_POWER = "f_of_t_v_power"
    POWER_LAW = "power_law"
    RATIO_POWER = "ratio_power"
    F_OF_VT_V_POWER = "f_of_vt_v_power"
    GENERAL = "general"


_NEEDS_F = {
    MediumFamily.F_OF_V_T_POWER,
    MediumFamily.F_OF_T_V_POWER,
    MediumFamily.F_OF_VT_V_POWER,
    MediumFamily.GENERAL,
}


def _fd(fun, x, rel=1e-6):
    h = rel * np.maximum(np.abs(x), 1e-300)
    return (fun(x + h) - fun(x - h)) / (2 * h)


@dataclass(frozen=True)
class MediumLaw:
    """Darcy mobility mu(v, T).

    ``alpha``, ``beta``, ``gamma`` are used as the family requires; for
    the free-function rows ``alpha`` is the exponent of the power factor.
    ``f`` takes one argument, except for the general family where it is
    ``f(v, T)``. ``f_prime`` is optional; without it derivatives of ``f``
    are taken by central differences.
    """

    family: MediumFamily
    alpha: float = 1.0
    beta: float = 0.0
    gamma: float = 0.0
    f: Optional[Callable] = field(default=None, compare=False)
    f_prime: Optional[Callable] = field(default=None, compare=False)
    q_hint: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", MediumFamily(self.family))
        fam = self.family
        if fam in _NEEDS_F and self.f is None:
            raise ValueError(f"family {fam.value} requires a callable f")
        if fam in (MediumFamily.POWER_LAW, MediumFamily.RATIO_POWER) and not self.alpha > 0:
            raise ValueError(f"prefactor alpha must be positive, got {self.alpha}")
        if fam is MediumFamily.F_OF_VT_V_POWER and self.q_hint is None:
            raise ValueError("family f_of_vt_v_power requires q_hint (porosity)")

    @classmethod
    def power_law(cls, alpha, beta, gamma):
        return cls(MediumFamily.POWER_LAW, alpha=alpha, beta=beta, gamma=gamma)

    @classmethod
    def ratio_power(cls, alpha, beta):
        return cls(MediumFamily.RATIO_POWER, alpha=alpha, beta=beta)

    def __call__(self, v, T):
        return eval_mobility(self, v, T)

    def as_power_law(self):
        """Equivalent (alpha, beta, gamma) of alpha v^beta T^gamma, or None."""
        if self.family is MediumFamily.POWER_LAW:
            return self.alpha, self.beta, self.gamma
        if self.family is MediumFamily.RATIO_POWER:
            return self.alpha, -self.beta, self.beta
        return None

    def _df(self, x):
        if self.f_prime is not None:
            return self.f_prime(x)
        return _fd(self.f, x)

    def partials(self, v, T):
        """(mu, mu_v, mu_T) at (v, T)."""
        v = np.asarray(v, dtype=float)
        T = np.asarray(T, dtype=float)
        mu = eval_mobility(self, v, T)
        fam = self.family
        pl = self.as_power_law()
        if pl is not None:
            _, b, g = pl
            return mu, b * mu / v, g * mu / T
        a = self.alpha
        if fam is MediumFamily.F_OF_V_T_POWER:
            return mu, self._df(v) * T**a, a * mu / T
        if fam is MediumFamily.F_OF_T_V_POWER:
            return mu, a * mu / v, self._df(T) * v**a
        if fam is MediumFamily.F_OF_VT_V_POWER:
            e = 3.0 - self.q_hint
            df = self._df(v * T)
            return mu, df * T * v**e + e * mu / v, df * v * v**e
        mu_v = _fd(lambda vv: self.f(vv, T), v)
        mu_T = _fd(lambda TT: self.f(v, TT), T)
        return mu, mu_v, mu_T


def eval_mobility(law: MediumLaw, v, T):
    v = np.asarray(v, dtype=float)
    T = np.asarray(T, dtype=float)
    if np.any(~(v > 0)) or np.any(~(T > 0)):
        raise ValueError(f"mobility needs v > 0 and T > 0, got v={v}, T={T}")
    fam = law.family
    if fam is MediumFamily.POWER_LAW:
        return law.alpha * v**law.beta * T**law.gamma
    if fam is MediumFamily.RATIO_POWER:
        return law.alpha * (T / v) ** law.beta
    if fam is MediumFamily.F_OF_V_T_POWER:
        return law.f(v) * T**law.alpha
    if fam is MediumFamily.F_OF_T_V_POWER:
        return law.f(T) * v**law.alpha
    if fam is MediumFamily.F_OF_VT_V_POWER:
        return law.f(v * T) * v ** (3.0 - law.q_hint)
    return law.f(v, T)


@dataclass(frozen=True)
class GeneratorDescriptor:
    """Affine vector field sum_i (shift_i + sum_j matrix_ij c_j) d/dc_i.

    ``row`` is the table row the generator came from (0 for X1..X8).
    """

    name: str
    matrix: tuple
    shift: tuple
    row: int = 0
    degenerate: bool = False

    @classmethod
    def build(cls, name, linear=None, shift=None, row=0):
        M = np.zeros((6, 6))
        k = np.zeros(6)
        for (target, source), c in (linear or {}).items():
            M[_IDX[target], _IDX[source]] += c
        for target, c in (shift or {}).items():
            k[_IDX[target]] += c
        degenerate = not (np.any(M) or np.any(k))
        return cls(
            name,
            tuple(map(tuple, M)),
            tuple(k),
            row=row,
            degenerate=degenerate,
        )

    @classmethod
    def scaling(cls, name, factors, row=0):
        return cls.build(name, linear={(c, c): f for c, f in factors.items()}, row=row)

    @property
    def M(self):
        return np.array(self.matrix)

    @property
    def k(self):
        return np.array(self.shift)

    def is_diagonal(self):
        M = self.M
        return not np.any(self.k) and not np.any(M - np.diag(np.diag(M)))

    def scale_factors(self):
        """Diagonal coefficients {coord: c} of a pure scaling generator."""
        if not self.is_diagonal():
            raise ValueError(f"{self.name} is not a pure scaling")
        d = np.diag(self.M)
        return {c: float(d[i]) for i, c in enumerate(COORDS) if d[i] != 0}

    def to_dict(self):
        terms = {}
        M, k = self.M, self.k
        for i, c in enumerate(COORDS):
            lin = {COORDS[j]: float(M[i, j]) for j in range(6) if M[i, j] != 0}
            if lin or k[i] != 0:
                terms[c] = {"const": float(k[i]), "linear": lin}
        return {"name": self.name, "row": self.row, "degenerate": self.degenerate,
                "coefficients": terms}


def base_generators():
    """X1..X8: translations, so(3) rotations, and the parabolic scaling."""
    B = GeneratorDescriptor.build
    return [
        B("X1", shift={"x": 1.0}),
        B("X2", shift={"y": 1.0}),
        B("X3", shift={"z": 1.0}),
        B("X4", shift={"t": 1.0}),
        # X5 = y d_x - x d_y, etc.
        B("X5", linear={("x", "y"): 1.0, ("y", "x"): -1.0}),
        B("X6", linear={("x", "z"): 1.0, ("z", "x"): -1.0}),
        B("X7", linear={("y", "z"): 1.0, ("z", "y"): -1.0}),
        GeneratorDescriptor.scaling("X8", {"t": 2.0, "x": 1.0, "y": 1.0, "z": 1.0}),
    ]


def _row1(exponent):
    return GeneratorDescriptor.scaling("X9", {"t": 1 + exponent, "T": -1.0}, row=1)


def _row2(exponent):
    return GeneratorDescriptor.scaling("X9", {"t": 1 - exponent, "v": 1.0}, row=2)


def _row4(beta):
    return GeneratorDescriptor.scaling("X9", {"t": 1 + beta, "v": 1.0}, row=4)


def _row5(q):
    return GeneratorDescriptor.scaling("X9", {"t": q - 1, "v": 1.0, "T": -1.0}, row=5)


def classify_symmetries(law: MediumLaw, q: float):
    """X1..X8 followed by the extra generators of every matching table row.

    A pure power law alpha v^beta T^gamma matches rows 1 and 2 always, row 4
    when beta = -gamma and row 5 when beta - gamma = 3 - q. Free-function
    families match only the row they were declared with. Generators whose
    coefficients all vanish, and the row-3 X9 at beta + gamma = 0, are
    reported with ``degenerate=True``.
    """
    out = base_generators()
    fam = law.family
    pl = law.as_power_law()
    if pl is not None:
        _, beta, gamma = pl
        out.append(_row1(gamma))
        out.append(_row2(beta))
        s = beta + gamma
        if s != 0:
            out.append(GeneratorDescriptor.scaling(
                "X9", {"t": 1.0, "v": -1.0 / s, "T": -1.0 / s}, row=3))
        else:
            out.append(GeneratorDescriptor("X9", tuple(map(tuple, np.zeros((6, 6)))),
                                           tuple(np.zeros(6)), row=3, degenerate=True))
        out.append(GeneratorDescriptor.scaling("X10", {"v": 1 + gamma, "T": 1 - beta}, row=3))
        if np.isclose(beta, -gamma, rtol=0, atol=1e-14):
            out.append(_row4(gamma))
        if np.isclose(beta - gamma, 3 - q, rtol=0, atol=1e-14):
            out.append(_row5(q))
    elif fam is MediumFamily.F_OF_V_T_POWER:
        out.append(_row1(law.alpha))
    elif fam is MediumFamily.F_OF_T_V_POWER:
        out.append(_row2(law.alpha))
    elif fam is MediumFamily.F_OF_VT_V_POWER:
        if not np.isclose(law.q_hint, q, rtol=0, atol=1e-14):
            raise ValueError(f"law declared for q={law.q_hint}, classified with q={q}")
        out.append(_row5(q))
    return out


def generator_flow(gen: GeneratorDescriptor, lam, point):
    """exp(lam X) applied to ``point`` = (t, x, y, z, v, T) or an (..., 6) array.

    The affine field is exponentiated exactly through the augmented 7x7
    matrix [[M, k], [0, 0]].
    """
    P = np.asarray(point, dtype=float)
    A = np.zeros((7, 7))
    A[:6, :6] = gen.M
    A[:6, 6] = gen.k
    E = expm(lam * A)
    return P @ E[:6, :6].T + E[:6, 6]
