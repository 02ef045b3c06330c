"""Shared generators for randomised test parameters."""
import numpy as np

from filtrate.media import MediumLaw
from filtrate.selfsim import SelfSimilarSolution, pressure_closed_form

R_POINTS = np.linspace(0.2, 2.0, 50)


def _base_params(rng):
    return dict(q=rng.uniform(0.2, 0.8), C1=rng.uniform(0.5, 2.0), R=rng.uniform(0.5, 2.0))


def _candidate(case, rng):
    alpha = rng.uniform(0.5, 2.0)
    p = _base_params(rng)
    if case == "case1":
        law = MediumLaw.ratio_power(alpha, rng.uniform(0.2, 2.0))
        C2 = rng.uniform(5.0, 10.0)
    elif case == "case2":
        law = MediumLaw.ratio_power(alpha, -1.0)
        C2 = rng.uniform(1.0, 10.0)
    elif case == "case3":
        law = MediumLaw.power_law(alpha, rng.uniform(-1.0, 1.0), rng.uniform(-0.5, 1.0))
        C2 = rng.uniform(5.0, 20.0)
    else:
        law = MediumLaw.power_law(alpha, rng.uniform(-1.0, 1.0), -1.0)
        C2 = rng.uniform(1.0, 10.0)
    return SelfSimilarSolution(p["q"], p["C1"], C2, p["R"], law, case)


def admissible_solution(case, rng, r=R_POINTS, max_tries=200):
    """Random parameters for ``case`` whose closed-form pressure is
    positive and moderate on ``r``."""
    for _ in range(max_tries):
        try:
            sol = _candidate(case, rng)
            p = pressure_closed_form(sol, r)
        except ValueError:
            continue
        if np.all(np.isfinite(p)) and np.all((p > 1e-8) & (p < 1e8)):
            return sol
    raise RuntimeError(f"no admissible parameters for {case}")
