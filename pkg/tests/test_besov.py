import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_besov.besov import (
    BesovParams,
    DyadicNormProfile,
    RangeWarning,
    block_norms,
    continuous_norm,
    default_partition,
    discrete_norm,
    discrete_norm_n_indexed,
    embedding_check,
    interpolation_norm,
    k_functional,
    sequence_norm,
    split_norms,
)
from dunkl_besov.dunkl_core import GridFunction
from dunkl_besov.families import FunctionSpec, build
from dunkl_besov.littlewood_paley import make_bump, normalize_dyadic, to_n_indexed
from dunkl_besov.measure import WeightedMeasure

ALPHAS = (-0.5, 0.0, 0.7)
PART = default_partition()


def gauss(alpha, scale=1.0, parity="even"):
    return build(FunctionSpec("gaussian", {"scale": scale}, parity), WeightedMeasure.rank_one(alpha))


def bump(alpha, j=0, seed=0):
    return build(FunctionSpec("spectral_bump", {"j": j, "seed": seed}), WeightedMeasure.rank_one(alpha))


def zero(alpha):
    return GridFunction.zeros(WeightedMeasure.rank_one(alpha))


# ---------------------------------------------------------------- params


@pytest.mark.parametrize("beta,p,q", [(0.0, 2, 2), (-1.0, 2, 2), (1.0, 0.5, 2), (1.0, 2, 0.9)])
def test_params_validation(beta, p, q):
    with pytest.raises(ValueError):
        BesovParams(beta, p, q)


def test_params_accept_infinity():
    BesovParams(1.0, math.inf, math.inf)


def test_sequence_norm():
    assert sequence_norm([], 2) == 0.0
    assert sequence_norm([0.0, 0.0], 1) == 0.0
    assert sequence_norm([3.0, 4.0], 2) == pytest.approx(5.0, rel=1e-15)
    assert sequence_norm([3.0, 4.0], math.inf) == 4.0
    assert sequence_norm([1e-200, 1e-200], 2) == pytest.approx(math.sqrt(2) * 1e-200, rel=1e-14)


# ---------------------------------------------------------------- discrete


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("q", [1.0, 2.0, math.inf])
def test_discrete_norm_of_zero(alpha, q):
    assert discrete_norm(zero(alpha), BesovParams(1.0, 2.0, q), PART) == 0.0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_partition_profile_spectrum_only_touches_neighbours(alpha):
    m = WeightedMeasure.rank_one(alpha)
    grid = GridFunction.zeros(m).grid
    f = GridFunction("rank_one", "spectral", grid, PART(0, grid.nodes), None, m,
                     exact_spectrum=lambda s: (PART(0, s), None))
    terms = block_norms(f, PART, [2.0])[2.0]
    assert {j for j, v in terms.items() if v > 0} == {-1, 0, 1}


@pytest.mark.parametrize("alpha", ALPHAS)
@pytest.mark.parametrize("p", [1.0, 2.0])
def test_dyadic_dilation_law(alpha, p):
    # f(2^m x) shifts blocks by m: norm scales by 2^(m beta) 2^(-m H / p), m = 2
    beta = 1.0
    params = BesovParams(beta, p, 2.0)
    hom = WeightedMeasure.rank_one(alpha).homogeneity
    base = discrete_norm(gauss(alpha, 1.0), params, PART)
    dil = discrete_norm(gauss(alpha, 0.25), params, PART)
    assert dil / base == pytest.approx(2.0 ** (2 * beta) * 2.0 ** (-2 * hom / p), rel=1e-6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_discrete_norm_converged_for_gaussian(alpha):
    value, ok = discrete_norm(gauss(alpha), BesovParams(1.0, 2.0, 2.0), PART, with_flag=True)
    assert ok and math.isfinite(value) and value > 0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_squared_blocks_bracket_plancherel(alpha):
    f = gauss(alpha)
    terms = block_norms(f, PART, [2.0])[2.0]
    l2 = f.norm(2)
    total = math.sqrt(sum(v**2 for v in terms.values()))
    # sum of squared blocks lies between 1/2 and 1 of ||f||^2 (sum g_j^2 in [1/2, 1])
    assert 0.5 * l2**2 - 1e-12 <= total**2 <= l2**2 + 1e-12


@pytest.mark.parametrize("alpha", ALPHAS)
def test_n_indexed_versus_z_indexed(alpha):
    # wider Gaussians sit mostly below frequency 1, where the Z-indexed norm discounts them
    part_n = to_n_indexed(PART)
    for scale in (0.25, 0.5, 1.0):
        f = gauss(alpha, scale)
        for p in (1.0, 2.0):
            params = BesovParams(1.0, p, 2.0)
            z = discrete_norm(f, params, PART)
            n = discrete_norm_n_indexed(f, params, part_n)
            assert 1 / 3 <= n / z <= 3


def test_n_indexed_zero_and_low_pass_only():
    part_n = to_n_indexed(PART)
    assert discrete_norm_n_indexed(zero(0.0), BesovParams(1.0, 2.0, 2.0), part_n) == 0.0
    f = bump(0.0, j=-3)  # spectrum in [1/16, 1/4]
    terms = block_norms(f, part_n, [2.0])[2.0]
    assert terms[0] > 0 and all(v == 0.0 for j, v in terms.items() if j != 0)


def test_n_indexed_requires_n_partition():
    with pytest.raises(ValueError):
        discrete_norm_n_indexed(gauss(0.0), BesovParams(1.0, 2.0, 2.0), PART)


def test_partition_independence_constant_is_stable_under_refinement():
    other = normalize_dyadic(make_bump(0.5, 2.0, 1.0))
    params = BesovParams(1.0, 2.0, 2.0)
    ratios = []
    for refine in (1, 2):
        a = discrete_norm(gauss(0.7), params, PART, refine)
        b = discrete_norm(gauss(0.7), params, other, refine)
        ratios.append(a / b)
    assert abs(ratios[1] / ratios[0] - 1) < 0.05


# ---------------------------------------------------------------- profile


def test_profile_convergence_flag():
    params = BesovParams(1.0, 2.0, 2.0)
    good = DyadicNormProfile({j: 2.0 ** (-3 * abs(j)) for j in range(-6, 7)}, params)
    assert good.converged
    bad = DyadicNormProfile({j: 1.0 for j in range(-6, 7)}, params)
    assert not bad.converged
    zeros = DyadicNormProfile({j: (1.0 if j == 0 else 0.0) for j in range(-6, 7)}, params)
    assert zeros.converged


def test_profile_sup_convention_flag():
    flat = {j: 2.0 ** (-j) for j in range(-6, 7)}  # weighted terms constant for beta = 1
    assert DyadicNormProfile(flat, BesovParams(1.0, 2.0, math.inf)).converged
    assert not DyadicNormProfile(flat, BesovParams(1.0, 2.0, 2.0)).converged


def test_q_infinity_is_sup_of_weighted_terms():
    f = gauss(0.0)
    prof = DyadicNormProfile(block_norms(f, PART, [2.0])[2.0], BesovParams(1.0, 2.0, math.inf))
    assert prof.value == pytest.approx(max(prof.weighted), rel=0)
    assert discrete_norm(f, BesovParams(1.0, 2.0, math.inf), PART) == prof.value


# ---------------------------------------------------------------- embeddings


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1e3), min_size=1, max_size=12),
       st.floats(min_value=1.0, max_value=8.0), st.floats(min_value=0.0, max_value=8.0))
def test_embedding_monotone(values, q1, dq):
    prof = DyadicNormProfile(dict(enumerate(values)), BesovParams(0.5, 2.0, 1.0))
    big, small = embedding_check(prof, q1, q1 + dq)
    assert big <= small * (1 + 1e-14)
    inf_val, one_val = embedding_check(prof, 1.0, math.inf)
    assert inf_val <= one_val * (1 + 1e-14)


def test_embedding_single_term_equality():
    prof = DyadicNormProfile({3: 0.25}, BesovParams(1.0, 2.0, 1.0))
    vals = [prof.with_q(q).value for q in (1.0, 2.0, 7.0, math.inf)]
    np.testing.assert_allclose(vals, vals[0], rtol=1e-15)


def test_embedding_rejects_reversed_exponents():
    prof = DyadicNormProfile({0: 1.0}, BesovParams(1.0, 2.0, 1.0))
    with pytest.raises(ValueError):
        embedding_check(prof, 2.0, 1.0)


def test_smoothness_embedding():
    # the beta profile is dominated by the damped beta + eps profile, summably
    prof = DyadicNormProfile(block_norms(gauss(0.0), PART, [2.0])[2.0], BesovParams(1.0, 2.0, 1.0))
    eps = 0.5
    hi = prof.with_beta(1.0 + eps).weighted
    lo = prof.weighted
    js = np.array(prof.indices, dtype=float)
    np.testing.assert_allclose(lo, 2.0 ** (-js * eps) * hi, rtol=1e-13)
    assert prof.with_q(math.inf).value <= prof.with_beta(1.0 + eps).with_q(math.inf).value \
        * sum(2.0 ** (-j * eps) for j in js if j >= 0) + max(lo[js < 0], default=0.0)


# ---------------------------------------------------------------- continuous


@pytest.mark.parametrize("alpha", ALPHAS)
def test_continuous_norm_of_zero(alpha):
    assert continuous_norm(zero(alpha), None, BesovParams(1.0, 2.0, 2.0)) == 0.0


@pytest.mark.parametrize("alpha", ALPHAS)
def test_continuous_norm_invariant_under_grid_shift(alpha):
    f = gauss(alpha)
    params = BesovParams(1.0, 2.0, 2.0)
    warnings.simplefilter("ignore", RangeWarning)
    base = continuous_norm(f, None, params)
    for shift in (0.25, 0.5):
        assert continuous_norm(f, None, params, shift=shift) == pytest.approx(base, rel=1e-6)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_continuous_over_discrete_bracket(alpha):
    warnings.simplefilter("ignore", RangeWarning)
    for scale in (0.5, 1.0, 2.0):
        f = gauss(alpha, scale)
        for p, q in ((1.0, 1.0), (2.0, 2.0), (2.0, math.inf)):
            params = BesovParams(1.0, p, q)
            r = continuous_norm(f, None, params) / discrete_norm(f, params, PART)
            assert 0.1 < r < 10


def test_continuous_range_warning():
    with pytest.warns(RangeWarning):
        continuous_norm(gauss(0.0), None, BesovParams(1.0, 2.0, 2.0), octaves=2)


def test_continuous_no_warning_on_wide_range():
    with warnings.catch_warnings():
        warnings.simplefilter("error", RangeWarning)
        continuous_norm(gauss(0.7), None, BesovParams(1.0, 2.0, 2.0), octaves=20)


def test_continuous_rejects_wide_phi():
    with pytest.raises(ValueError):
        continuous_norm(gauss(0.0), make_bump(1.0, 3.0), BesovParams(1.0, 2.0, 2.0))


# ---------------------------------------------------------------- K-functional


@pytest.fixture(scope="module")
def kfun():
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    return k_functional(gauss(0.0), b0, b1, PART)


def test_k_below_trivial_bound(kfun):
    ts = 2.0 ** np.linspace(-12, 12, 97)
    assert np.all(kfun(ts) <= kfun.trivial(ts) * (1 + 1e-14))


def test_k_nondecreasing(kfun):
    vals = [kfun(t) for t in (0.25, 1.0, 4.0)]
    assert vals[0] <= vals[1] <= vals[2]
    ts = 2.0 ** np.linspace(-20, 20, 401)
    assert np.all(np.diff(kfun(ts)) >= 0)


def test_k_envelope_matches_pointwise_minimum(kfun):
    ts, lines = kfun.envelope
    assert np.all(np.diff(ts) > 0)
    mids = np.sqrt(ts[1:] * ts[:-1])
    for t, i in zip(mids, lines[1:-1]):
        assert kfun.a[i] + t * kfun.b[i] == pytest.approx(kfun(t), rel=1e-13)


def test_k_best_level_tracks_log_t():
    # single-annulus function: the optimal cut moves toward smaller l as t grows
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    k = k_functional(gauss(0.0, 0.05), b0, b1, PART)
    levels = [k.best_level(t) for t in 2.0 ** np.arange(-8.0, 9.0, 4.0)]
    numeric = [(-100 if lv is None else lv) for lv in levels]
    assert all(a >= b for a, b in zip(numeric, numeric[1:]))


def test_k_functional_rejects_mixed_p():
    with pytest.raises(ValueError):
        k_functional(gauss(0.0), BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 1.0, 2.0), PART)


# ---------------------------------------------------------------- interpolation


def test_interpolation_of_zero():
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    assert interpolation_norm(0.5, 2.0, zero(0.0), b0, b1, PART) == 0.0


@pytest.mark.parametrize("theta", [0.0, 1.0, 1.5])
def test_interpolation_rejects_theta(theta):
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    with pytest.raises(ValueError):
        interpolation_norm(theta, 2.0, gauss(0.0), b0, b1, PART)


def test_interpolation_rejects_equal_betas():
    b = BesovParams(1.0, 2.0, 2.0)
    with pytest.raises(ValueError):
        interpolation_norm(0.5, 2.0, gauss(0.0), b, b, PART)


@pytest.mark.parametrize("alpha", ALPHAS)
def test_interpolation_over_discrete_bracket(alpha):
    f = gauss(alpha)
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    sp = split_norms(f, 2.0, PART)
    k = k_functional(f, b0, b1, splits=sp)
    for theta in (0.25, 0.5, 0.75):
        beta = (1 - theta) * 2.0 + theta * 0.5
        for q in (1.0, 2.0, math.inf):
            r = interpolation_norm(theta, q, None, b0, b1, kfun=k) / discrete_norm(f, BesovParams(beta, 2.0, q), PART)
            assert 0.05 < r < 20


def test_interpolation_monotone_in_theta_toward_smoother_space():
    # for a low-frequency f the rough endpoint is cheaper, so the norm falls as theta grows
    f = gauss(0.0, 4.0)
    b0, b1 = BesovParams(2.0, 2.0, 2.0), BesovParams(0.5, 2.0, 2.0)
    k = k_functional(f, b0, b1, PART)
    vals = [interpolation_norm(th, 2.0, None, b0, b1, kfun=k) for th in (0.25, 0.5, 0.75)]
    assert vals[0] > vals[1] > vals[2] or vals[0] < vals[1] < vals[2]
