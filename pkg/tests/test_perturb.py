import numpy as np
import pytest
from conftest import CHECK_POINTS, ORDER_POINTS

from filtrate import perturb, verify
from filtrate.media import MediumLaw
from filtrate.perturb import CorrectionSet
from filtrate.selfsim import SelfSimilarSolution

# T1 by composite Simpson with 1e6 panels, computed independently.
T1_METHANE = [(0.5, 0.14633773256182578), (1.5, -0.007357722418227005),
              (2.5, -0.00477456609072892)]
T1_UNIT = [(0.3, 3085.5089793123743), (2.0, -24.90377972849428)]


def unit_solution():
    return SelfSimilarSolution(0.55, 1.0, 1.0, 1.0, MediumLaw.ratio_power(0.5, -1.0), "case2")


@pytest.mark.parametrize("r,ref", T1_METHANE)
def test_t1_matches_simpson_methane(methane_corrections, r, ref):
    assert perturb.t1_correction(methane_corrections, r) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("r,ref", T1_UNIT)
def test_t1_matches_simpson_unit(r, ref):
    cs = CorrectionSet(unit_solution(), 0.02, 0.0)
    assert perturb.t1_correction(cs, r) == pytest.approx(ref, rel=1e-8)


def test_t1_vanishes_at_reference_radius(methane_corrections):
    assert perturb.t1_correction(methane_corrections, 1.0) == 0.0


def test_t1_below_floor_rejected(methane_corrections):
    with pytest.raises(ValueError):
        perturb.t1_correction(methane_corrections, 1e-4)


def test_t2_negative_for_methane(methane_corrections):
    # The affine factor in r^2 has its root at r^2 < 0 when q = 0.55, so the
    # b-correction cools the gas everywhere.
    r = np.linspace(0.0, 6.0, 601)
    assert np.all(perturb.t2_correction(methane_corrections, r) < 0)
    sol = methane_corrections.base
    root = 2 * (2 * sol.q + 1) * sol.law.alpha * sol.R / (sol.q - 1)
    assert root < 0


def test_t2_closed_form_value(methane_corrections):
    sol = methane_corrections.base
    r, q, R, C2, al = 1.3, sol.q, sol.R, sol.C2, sol.law.alpha
    expected = (C2 * (q - 1) * r**2 / (2 * (2 * q + 1) * al * R**2) - C2 / R) * np.exp(
        -r**2 / (4 * al * R))
    assert perturb.t2_correction(methane_corrections, r) == pytest.approx(expected, rel=1e-14)


def test_corrected_fields_first_order_pressure(methane_corrections):
    r = np.array([0.8, 1.2])
    f = perturb.corrected_fields(methane_corrections, r)
    assert np.all(f["v"] == methane_corrections.base.v(r))
    assert f["T"] == pytest.approx(f["T0"] + 9e-5 * f["T1"] + 3e-3 * f["T2"], rel=1e-15)


def test_a_correction_is_exact_without_b():
    # With b = 0 the a-correction removes the O(a) residual entirely.
    cs = CorrectionSet(unit_solution(), 0.02, 0.0)
    with_t1 = perturb.corrected_field_set(cs)
    without = perturb.corrected_field_set(cs, include_corrections=False)
    law, q = cs.base.law, cs.base.q
    r_with = max(verify.residual_norm(verify.pde_residual(with_t1, law, q, P, 1e-5))
                 for P in CHECK_POINTS)
    r_without = max(verify.residual_norm(verify.pde_residual(without, law, q, P, 1e-5))
                    for P in CHECK_POINTS)
    assert r_with < 1e-4 * r_without
    chk = perturb.correction_order_check(cs, CHECK_POINTS, include_corrections=False)
    assert chk["ratios"] == pytest.approx([2.0, 2.0], rel=1e-3)


def test_order_check_methane(methane_corrections):
    chk = perturb.correction_order_check(methane_corrections, ORDER_POINTS)
    assert chk["passed"]
    assert all(3.2 <= x <= 4.8 for x in chk["ratios"])
    neg = perturb.correction_order_check(methane_corrections, ORDER_POINTS,
                                         include_corrections=False)
    assert not neg["passed"]
    assert neg["ratios"] == pytest.approx([2.0, 2.0], rel=0.1)


def test_corrections_require_case2(methane):
    other = SelfSimilarSolution(0.5, 1, 1, 1, MediumLaw.power_law(1, 0.5, 0.5), "case3")
    with pytest.raises(ValueError):
        CorrectionSet(other, 1e-3, 1e-3)
    with pytest.raises(ValueError):
        CorrectionSet(methane, 1e-3, 1e-3, r_ref=1e-4)
