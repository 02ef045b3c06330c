import numpy as np
import pytest
from helpers import R_POINTS, admissible_solution

from filtrate import selfsim
from filtrate.media import MediumLaw
from filtrate.selfsim import PressureCrossing, SelfSimilarSolution

CASES = ["case1", "case2", "case3", "case4"]


def constant_mobility(alpha=0.5, anchor=(1.0, 10.0)):
    return SelfSimilarSolution(0.4, 1.0, 0.0, 1.0, MediumLaw.power_law(alpha, 0.0, 0.0),
                               "numeric", anchor=anchor)


def test_similarity_variable():
    assert selfsim.similarity_variable(4.0, 1.0, 2.0, 2.0) == pytest.approx(1.5)
    with pytest.raises(ValueError):
        selfsim.similarity_variable(0.0, 1.0, 0.0, 0.0)


def test_volume_profile_power_law(methane):
    r = np.array([0.5, 1.0, 2.0])
    expected = 518.28 * 2.7e-3 * r ** (3 / 0.45)
    assert selfsim.volume_profile(methane, r) == pytest.approx(expected, rel=1e-15)


def test_constant_mobility_hand_integration():
    # mu = alpha: dp/dr = -r/(2 alpha) integrates to p0 - (r^2 - r0^2)/(4 alpha)
    sol = constant_mobility()
    r = np.array([0.3, 0.8, 1.0, 1.7, 2.0])
    assert selfsim.pressure(sol, r) == pytest.approx(10 - (r**2 - 1) / 2.0, rel=1e-11)
    assert selfsim.pressure(sol, 2.0) == pytest.approx(8.5, rel=1e-12)


def test_pressure_crossing_reports_radius():
    sol = constant_mobility(anchor=(1.0, 1.0))
    with pytest.raises(PressureCrossing) as info:
        selfsim.pressure(sol, 3.0)
    assert info.value.r_cross == pytest.approx(np.sqrt(3.0), rel=1e-8)


@pytest.mark.parametrize("case", CASES)
def test_closed_form_matches_numeric(case, rng):
    for _ in range(3):
        sol = admissible_solution(case, rng)
        p_ref = selfsim.pressure_closed_form(sol, R_POINTS)
        r0 = 1.0
        p0 = float(selfsim.pressure_closed_form(sol, r0))
        p_num = selfsim.pressure_numeric(sol, r0, p0, R_POINTS, rtol=1e-11)
        assert np.max(np.abs(p_num / p_ref - 1)) < 1e-6


@pytest.mark.parametrize("case", CASES)
def test_flow_is_radial_x_over_2t(case, rng):
    sol = admissible_solution(case, rng)
    t, x, y, z = 1.7, 0.4, -0.3, 0.9
    u = selfsim.flow_field(sol, t, x, y, z)
    assert u == pytest.approx(np.array([x, y, z]) / (2 * t), rel=1e-12)


@pytest.mark.parametrize("case", CASES)
def test_reduced_equations_hold(case, rng):
    sol = admissible_solution(case, rng)
    res1, res2 = selfsim.reduced_ode_residual(sol, R_POINTS)
    assert np.max(res1) < 1e-10 and np.max(res2) < 1e-10


def test_reduced_equations_numeric_mode(methane):
    sol = SelfSimilarSolution(methane.q, methane.C1, methane.C2, methane.R, methane.law,
                              "numeric", anchor=(1.0, float(selfsim.pressure(methane, 1.0))),
                              n=methane.n)
    res1, res2 = selfsim.reduced_ode_residual(sol, np.linspace(0.5, 2.0, 7))
    assert np.max(res1) < 1e-8 and np.max(res2) < 1e-8


def test_mass_equation_sign(methane):
    # Flipping (2v - 3 r v') breaks the mass equation; the implemented form holds.
    r = np.linspace(0.5, 2.0, 5)
    (v, dv, d2v), (T, dT, d2T), (mu, dmu) = selfsim.profile_jets(methane, r)
    R, q = methane.R, methane.q
    D = dv * T - v * dT

    def mass(sign):
        terms = (2 * R * mu * r * v * (d2v * T - v * d2T),
                 sign * 2 * R * mu * (2 * v - 3 * r * dv) * D,
                 r * v * (2 * R * dmu * D + q * r * v * dv))
        return np.abs(sum(terms)) / sum(np.abs(t) for t in terms)

    assert np.max(mass(+1)) < 1e-12
    assert np.min(mass(-1)) > 1e-2


def test_case_restrictions():
    with pytest.raises(ValueError):
        SelfSimilarSolution(0.5, 1, 1, 1, MediumLaw.power_law(1, 0.5, 0.5), "case2")
    with pytest.raises(ValueError):
        SelfSimilarSolution(0.5, 1, 1, 1, MediumLaw.ratio_power(1, -1.0), "case1")
    with pytest.raises(ValueError):
        SelfSimilarSolution(0.5, 1, 1, 1, MediumLaw.power_law(1, 0.5, -1.0), "case3")
    with pytest.raises(ValueError):
        SelfSimilarSolution(0.5, 1, 1, 1, MediumLaw.power_law(1, 0.5, 0.5), "numeric")
    with pytest.raises(ValueError):
        SelfSimilarSolution(1.0, 1, 1, 1, MediumLaw.ratio_power(1, -1.0), "case2")


def test_methane_profile_shape(methane):
    r = np.linspace(0.5, 3.0, 2001)
    T = selfsim.temperature_profile(methane, r)
    i = int(np.argmax(T))
    assert 1.7 < r[i] < 2.0
    assert selfsim.volume_profile(methane, 1.0) == pytest.approx(518.28 * 2.7e-3)
