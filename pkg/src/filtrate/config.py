"""Run configuration: a single strict JSON document."""
from __future__ import annotations

import json
from pathlib import Path
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from . import thermo
from .media import MediumLaw
from .perturb import CorrectionSet
from .regions import RegionSpec
from .selfsim import SelfSimilarSolution


class ConfigError(ValueError):
    """Invalid configuration; ``key`` is the dotted path of the culprit."""

    def __init__(self, key, message):
        super().__init__(f"{key}: {message}")
        self.key = key
        self.message = message


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class GasConfig(_Strict):
    kind: Literal["ideal", "vdw_exact", "vdw_first_order"] = "ideal"
    n: float = Field(3.0, gt=0)
    a: float = Field(0.0, ge=0)
    b: float = Field(0.0, ge=0)
    gas_constant: float = Field(gt=0)


class MediumConfig(_Strict):
    family: Literal["power_law", "ratio_power"]
    alpha: float = Field(gt=0)
    beta: float = 0.0
    gamma: float = 0.0


class SolutionConfig(_Strict):
    q: float = Field(gt=0, lt=1)
    c1: float
    c2: float
    pressure_mode: Literal["case1", "case2", "case3", "case4", "numeric"] = "case2"
    anchor_r: Optional[float] = None
    anchor_p: Optional[float] = None


class CorrectionsConfig(_Strict):
    a: float = 0.0
    b: float = 0.0
    c3: float = 0.0
    c4: float = 0.0
    r_ref: float = Field(1.0, gt=0)
    r_floor: float = Field(1e-3, gt=0)


class RegionConfig(_Strict):
    v_min: float = Field(gt=0)
    p_min: float = Field(gt=0)
    p_max: float = Field(gt=0)
    temperature_min: float = Field(gt=0)
    temperature_max: float = Field(gt=0)
    d_max: float = Field(gt=0)
    time_max: float = Field(gt=0)
    nx: int = Field(200, ge=2)
    ny: int = Field(200, ge=2)


class NumericsConfig(_Strict):
    r_min: float = 0.05
    r_max: float = 4.0
    steps: int = Field(200, ge=1)
    fd_step: float = Field(1e-4, gt=0)
    order_fd_step: float = Field(1e-5, gt=0)
    phase_r_floor: float = Field(1e-2, gt=0)
    phase_r_ceil: float = Field(10.0, gt=0)
    check_points: List[List[float]] = [[0.5, 0.3, 0.4, 0.9], [2.0, 1.0, 1.5, -0.7]]
    order_points: List[List[float]] = [[1.0, 0.6, 0.5, 0.4], [1.5, 0.8, 0.6, 0.5]]
    symmetry_lambdas: List[float] = [0.1, 0.3]


class RunConfig(_Strict):
    gas: GasConfig
    medium: MediumConfig
    solution: SolutionConfig
    corrections: CorrectionsConfig = CorrectionsConfig()
    region: Optional[RegionConfig] = None
    numerics: NumericsConfig = NumericsConfig()

    @model_validator(mode="after")
    def _cross_checks(self):
        r = self.region
        if r is not None:
            if r.p_min >= r.p_max:
                raise ValueError("region.p_min must be below region.p_max")
            if r.temperature_min >= r.temperature_max:
                raise ValueError("region.temperature_min must be below region.temperature_max")
        for pt in self.numerics.check_points + self.numerics.order_points:
            if len(pt) != 4:
                raise ValueError("numerics point entries are (t, x, y, z)")
        return self

    def potential(self):
        g = self.gas
        return thermo.PotentialModel(thermo.PotentialKind(g.kind), n=g.n, a=g.a, b=g.b,
                                     R=g.gas_constant)

    def law(self):
        m = self.medium
        if m.family == "power_law":
            return MediumLaw.power_law(m.alpha, m.beta, m.gamma)
        return MediumLaw.ratio_power(m.alpha, m.beta)

    def solution_obj(self):
        s = self.solution
        anchor = None
        if s.anchor_r is not None or s.anchor_p is not None:
            anchor = (s.anchor_r, s.anchor_p)
        try:
            return SelfSimilarSolution(q=s.q, C1=s.c1, C2=s.c2, R=self.gas.gas_constant,
                                       law=self.law(), pressure_mode=s.pressure_mode,
                                       anchor=anchor, n=self.gas.n)
        except ValueError as exc:
            raise ConfigError("solution.pressure_mode", str(exc)) from exc

    def corrections_obj(self):
        c = self.corrections
        try:
            return CorrectionSet(self.solution_obj(), c.a, c.b, c.c3, c.c4, c.r_ref, c.r_floor)
        except ValueError as exc:
            raise ConfigError("corrections", str(exc)) from exc

    def region_spec(self):
        r = self.region
        if r is None:
            raise ConfigError("region", "missing region section")
        return RegionSpec(r.v_min, r.p_min, r.p_max, r.temperature_min, r.temperature_max,
                          r.d_max, r.time_max, r.nx, r.ny)


def parse_config(data: dict) -> RunConfig:
    try:
        return RunConfig.model_validate(data)
    except ValidationError as exc:
        err = exc.errors()[0]
        key = ".".join(str(p) for p in err["loc"]) or "<root>"
        raise ConfigError(key, err["msg"]) from None


def load_config(path) -> RunConfig:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError("<file>", str(exc)) from exc
    return parse_config(data)


# R for methane (J/(kg K)) is an implementer placeholder, as are the region
# bounds; q, alpha, C1, C2, a, b are the methane example constants.
METHANE_EXAMPLE = {
    "gas": {"kind": "vdw_exact", "n": 6.0, "a": 9e-5, "b": 3e-3, "gas_constant": 518.28},
    "medium": {"family": "ratio_power", "alpha": 5e-4, "beta": -1.0},
    "solution": {"q": 0.55, "c1": 2.7e-3, "c2": 3e5, "pressure_mode": "case2"},
    "corrections": {"a": 9e-5, "b": 3e-3, "c3": 0.0, "c4": 0.0, "r_ref": 1.0},
    "region": {
        "v_min": 0.1, "p_min": 1e3, "p_max": 3e5,
        "temperature_min": 90.7, "temperature_max": 810.0,
        "d_max": 3.0, "time_max": 4.0, "nx": 200, "ny": 200,
    },
}
