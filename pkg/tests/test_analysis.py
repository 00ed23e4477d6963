import math

import numpy as np
import pytest

from dunkl_besov.analysis import (
    InequalityRecord,
    admissible_range,
    hardy_littlewood_ratio,
    hausdorff_young_ratio,
    integrability_report_l1,
    integrability_report_ls,
    octave_increments,
    truncation_convergence,
    young_ratio,
)
from dunkl_besov.besov import BesovParams, default_partition, discrete_norm
from dunkl_besov.dunkl_core import GridFunction
from dunkl_besov.families import FunctionSpec, build
from dunkl_besov.measure import WeightedMeasure

ALPHAS = (-0.5, 0.0, 0.7)
PART = default_partition()


def make(alpha, family="gaussian", parity="even", **params):
    return build(FunctionSpec(family, params, parity), WeightedMeasure.rank_one(alpha))


# ---------------------------------------------------------------- records


def test_record_kinds():
    assert InequalityRecord("c", "n", 1.0, 2.0, 0.5).passed
    assert not InequalityRecord("c", "n", 1.1, 2.0, 0.5).passed
    assert InequalityRecord("c", "n", 1.0, 1.0 + 1e-9, 1e-8, "equal").passed
    assert InequalityRecord("c", "n", 2.0, 1.0, 1.5, "lower").passed
    assert not InequalityRecord("c", "n", math.nan, 1.0, 1.0).passed
    with pytest.raises(ValueError):
        InequalityRecord("c", "n", 1.0, 1.0, 1.0, "sideways")


def test_record_zero_over_zero():
    r = InequalityRecord("c", "n", 0.0, 0.0, 1.0)
    assert r.passed and r.constant_estimate == 0.0
    assert InequalityRecord("c", "n", 1.0, 0.0, 1.0).constant_estimate == math.inf


# ---------------------------------------------------------------- Hardy-Littlewood


@pytest.mark.parametrize("alpha", ALPHAS)
def test_hardy_littlewood_p2_is_plancherel(alpha):
    rec = hardy_littlewood_ratio(make(alpha, scale=0.8), 2.0)
    assert rec.ratio == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("p", [1.25, 1.5, 1.9])
def test_hardy_littlewood_scale_invariance(alpha, p):
    rec = hardy_littlewood_ratio(make(alpha, "shifted_gaussian", shift=0.5), p)
    assert math.isfinite(rec.ratio) and rec.ratio > 0
    assert rec.extra["scale_defect"] < 1e-3


def test_hardy_littlewood_gaussian_alpha_zero_p15_finite():
    assert math.isfinite(hardy_littlewood_ratio(make(0.0), 1.5).ratio)


@pytest.mark.parametrize("p", [1.0, 2.5])
def test_hardy_littlewood_rejects_p(p):
    with pytest.raises(ValueError):
        hardy_littlewood_ratio(make(0.0), p)


# ---------------------------------------------------------------- Hausdorff-Young and Young


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("p", [1.0, 1.3, 1.7, 2.0])
def test_hausdorff_young(alpha, p):
    assert hausdorff_young_ratio(make(alpha, "hermite", scale=1.3), p).passed


def test_hausdorff_young_rejects_p():
    with pytest.raises(ValueError):
        hausdorff_young_ratio(make(0.0), 2.5)


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
def test_young_bound(alpha, p):
    f = make(alpha, "shifted_gaussian", shift=0.7)
    g = make(alpha, scale=0.5)
    assert young_ratio(f, g, p).ratio <= 1 + 1e-8


def test_young_with_zero():
    m = WeightedMeasure.rank_one(0.0)
    rec = young_ratio(make(0.0), GridFunction.zeros(m), 2.0)
    assert rec.lhs == 0.0 and rec.rhs == 0.0 and rec.passed


def test_young_approximate_identity():
    # a narrow normalized Gaussian brings ||f * g||_p / (||f||_p ||g||_1) close to 1
    f = make(0.0, scale=1.0)
    ratios = [young_ratio(f, make(0.0, scale=s), 2.0).ratio for s in (0.5, 0.2, 0.1)]
    assert ratios[0] < ratios[1] < ratios[2] <= 1 + 1e-8
    assert ratios[2] > 0.98


# ---------------------------------------------------------------- integrability


def test_admissible_range_example():
    lo, hi, open_lo = admissible_range(2.0, 1.0, 2.0)
    assert (lo, hi, open_lo) == (1.0, 2.0, True)


def test_admissible_range_large_beta_is_l1():
    lo, hi, open_lo = admissible_range(1.0, 3.0, 2.0)
    assert lo == 1.0 and not open_lo and hi == math.inf


def test_threshold_beta_alpha_zero():
    # H = 2 for alpha = 0; beta = H / p = 1 at p = 2
    assert WeightedMeasure.rank_one(0.0).homogeneity / 2.0 == 1.0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_l1_report_gaussian_stabilizes(alpha):
    rep = integrability_report_l1(make(alpha), 2.0, PART)
    assert rep.status == "stabilized"
    incs = rep.increments
    for k in range(2, 5):  # beyond R = 4
        if incs[k] > rep.floor:
            assert incs[k + 1] / incs[k] < 0.5


def test_l1_report_compact_spectrum_constant_beyond_support():
    rep = integrability_report_l1(make(0.0, "spectral_bump", j=1), 2.0, PART)
    # support [1, 4]: nothing beyond R = 4
    assert np.all(rep.increments[2:] == 0.0)
    assert np.all(rep.cumulative[3:] == rep.cumulative[2])


def test_ls_report_endpoint_is_admissible():
    rep = integrability_report_ls(make(0.0), 2.0, 1.0, 2.0, PART)
    assert rep.admissible and not rep.negative_control


def test_ls_report_negative_control_flagged():
    f = make(0.0, "slow_decay", a=0.55, b=0.0)
    rep = integrability_report_ls(f, 2.0, 0.5, 1.1, PART)
    assert rep.negative_control and rep.status in ("stabilized", "not-stabilized")


def test_ls_report_validation():
    f = make(0.0)
    with pytest.raises(ValueError):
        integrability_report_ls(f, 2.0, 1.0, 2.5, PART)
    with pytest.raises(ValueError):
        integrability_report_ls(f, 2.5, 1.0, 1.5, PART)
    with pytest.raises(ValueError):
        integrability_report_ls(f, 2.0, 0.0, 1.5, PART)
    with pytest.raises(ValueError):
        integrability_report_l1(f, 1.0, PART)


def test_octave_increments_sum_to_total():
    f = make(0.7)
    core, incs = octave_increments(f, 1.0)
    m = f.measure
    g = f.spectral
    total = m.surface_c * float(np.dot(g.grid.radial_weights(m.nu), np.abs(g.even_part)))
    assert core + incs.sum() == pytest.approx(total, rel=1e-10)


# ---------------------------------------------------------------- truncation


def test_truncation_exact_zero_for_compact_spectrum():
    f = make(0.0, "spectral_sum", terms=[(-3, 0, 1.0), (0, 0, 0.5), (3, 0, 2.0)])
    errs = truncation_convergence(f, BesovParams(1.0, 2.0, 2.0), PART)
    assert np.all(errs[4:] == 0.0)
    assert np.all(errs[:4] > 0)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_truncation_gaussian_monotone(alpha):
    errs = truncation_convergence(make(alpha), BesovParams(1.0, 2.0, 2.0), PART)
    assert np.all(np.diff(errs) <= 0)
    assert errs[-1] < 1e-3 * errs[0]


def test_truncation_n_zero_counts_all_outer_blocks():
    # f_0 = phi_0 * f; with spectrum on one annulus far away, f - f_0 = f
    f = make(0.0, "spectral_bump", j=3)
    params = BesovParams(1.0, 2.0, 2.0)
    errs = truncation_convergence(f, params, PART)
    assert errs[0] == pytest.approx(discrete_norm(f, params, PART), rel=1e-13)
