import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dunkl_besov.littlewood_paley import (
    BumpProfile,
    DyadicPartition,
    class_a_tilde_margin,
    make_bump,
    normalize_dyadic,
    to_n_indexed,
)

SEED = make_bump(0.5, 2.0)


@pytest.fixture(scope="module")
def part():
    return normalize_dyadic(SEED)


# ---------------------------------------------------------------- bumps


def test_bump_vanishes_at_endpoints_and_positive_inside():
    assert SEED(0.5) == 0.0 and SEED(2.0) == 0.0
    assert SEED(1.0) > 0.0


def test_bump_exactly_zero_outside():
    r = np.array([0.0, 0.1, 0.4999, 2.0001, 5.0, 1e6])
    assert np.all(SEED(r) == 0.0)


def test_bump_peak_is_one():
    g = make_bump(1.0, 3.0, 2.5)
    assert g(2.0) == pytest.approx(1.0, rel=1e-15)
    assert np.max(g(np.linspace(1, 3, 2001))) <= 1.0 + 1e-15


def test_bump_second_derivative_bounded_near_edge():
    h = 1e-4
    for r in (0.5 + 1e-3, 2.0 - 1e-3):
        d2 = (SEED(r + h) - 2 * SEED(r) + SEED(r - h)) / h**2
        assert abs(d2) < 1e-8


def test_bump_derivatives_vanish_at_endpoints():
    h = 1e-5
    for r in (0.5, 2.0):
        d1 = (SEED(r + h) - SEED(r - h)) / (2 * h)
        d2 = (SEED(r + h) - 2 * SEED(r) + SEED(r - h)) / h**2
        assert abs(d1) < 1e-8 and abs(d2) < 1e-8


@pytest.mark.parametrize("a,b", [(2.0, 1.0), (1.0, 1.0)])
def test_make_bump_rejects_bad_interval(a, b):
    with pytest.raises(ValueError):
        make_bump(a, b)


def test_bump_profile_validation():
    with pytest.raises(ValueError):
        BumpProfile(0.0, 1.0)
    with pytest.raises(ValueError):
        BumpProfile(0.5, 2.0, kappa=0.0)


# ---------------------------------------------------------------- partition


def test_partition_sum_at_example_point(part):
    r = 1.37 * 2.0**5
    assert abs(sum(part(j, r) for j in part.indices) - 1.0) < 1e-12


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=-10.0, max_value=10.0))
def test_partition_of_unity(log_r):
    part = normalize_dyadic(SEED)
    assert abs(part.total(2.0**log_r) - 1.0) < 1e-12


@pytest.mark.parametrize("u", [1.0, 1.3, 2.0])
def test_u_parameterized_partition_of_unity(part, u):
    r = 2.0 ** np.linspace(-10, 10, 2001)
    total = sum(part(j, u * r) for j in range(-13, 14))
    assert np.max(np.abs(total - 1.0)) < 1e-12


def test_only_neighbouring_terms_at_dyadic_points(part):
    for j in (-3, 0, 4):
        r = 2.0**j
        active = [i for i in part.indices if part(i, r) != 0.0]
        assert set(active) <= {j - 1, j, j + 1}
        assert part(j, r) == pytest.approx(1.0, abs=1e-12)


def test_profiles_disjoint_two_apart(part):
    r = 2.0 ** np.linspace(-8, 8, 4001)
    for j in range(-5, 5):
        assert np.all(part(j, r) * part(j + 2, r) == 0.0)


def test_profile_support(part):
    for j in (-4, 0, 3):
        lo, hi = part.support(j)
        assert (lo, hi) == (2.0 ** (j - 1), 2.0 ** (j + 1))
        r = np.concatenate([np.linspace(0, lo, 50), np.linspace(hi, 4 * hi, 50)])
        assert np.all(part(j, r) == 0.0)
        assert part(j, 2.0**j * 1.1) > 0


def test_profiles_are_dilates(part):
    r = np.linspace(0.4, 2.2, 301)
    for j in (-2, 3):
        np.testing.assert_allclose(part(j, 2.0**j * r), part(0, r), rtol=1e-15, atol=0)


def test_normalize_rejects_wrong_support():
    with pytest.raises(ValueError):
        normalize_dyadic(make_bump(1.0, 2.0))


def test_normalize_rejects_coverage_gap():
    # the dyadic sum underflows below 1e-12 at r = 1 for a very sharp bump
    with pytest.raises(ValueError):
        normalize_dyadic(make_bump(0.5, 2.0, kappa=60.0))


def test_partition_validation():
    with pytest.raises(ValueError):
        DyadicPartition(make_bump(1.0, 2.0))
    with pytest.raises(ValueError):
        DyadicPartition(SEED, 3, 2)
    with pytest.raises(ValueError):
        DyadicPartition(SEED, -1, 2, "N")
    with pytest.raises(ValueError):
        DyadicPartition(SEED, indexing="Q")


# ---------------------------------------------------------------- N-indexed


def test_n_indexed_low_pass(part):
    pn = to_n_indexed(part)
    assert pn.indexing == "N" and pn.j_min == 0
    r = np.linspace(0.0, 0.5, 101)
    assert np.all(pn(0, r) == 1.0)
    assert np.all(pn(0, np.linspace(2.0001, 50, 101)) == 0.0)
    assert pn.support(0) == (0.0, 2.0)


def test_n_indexed_low_pass_is_sum_of_small_scales(part):
    pn = to_n_indexed(part)
    r = np.linspace(0.3, 2.0, 401)
    low = sum(part(j, r) for j in range(-12, 1))
    np.testing.assert_allclose(pn(0, r), low, atol=1e-12)


def test_n_indexed_partition_of_unity(part):
    pn = to_n_indexed(part)
    r = np.concatenate([np.linspace(1e-6, 1.0, 200), 2.0 ** np.linspace(0, 12, 400)])
    assert np.max(np.abs(pn.total(r) - 1.0)) < 1e-12


def test_n_indexed_keeps_high_profiles(part):
    pn = to_n_indexed(part)
    r = np.linspace(1.0, 40.0, 301)
    for j in (1, 2, 4):
        np.testing.assert_array_equal(pn(j, r), part(j, r))


def test_to_n_indexed_twice_rejected(part):
    with pytest.raises(ValueError):
        to_n_indexed(to_n_indexed(part))


# ---------------------------------------------------------------- class A tilde


def test_margin_positive_for_symmetric_bump():
    assert class_a_tilde_margin(make_bump(1.0, 2.0), 0.05) > 0


def test_margin_shrinks_as_delta_goes_to_zero():
    g = make_bump(1.0, 2.0)
    margins = [class_a_tilde_margin(g, d) for d in (0.2, 0.1, 0.05, 0.02, 0.01)]
    assert all(a > b for a, b in zip(margins, margins[1:]))
    assert margins[-1] < 1e-3 * margins[0]


def test_margin_constant_profile():
    one = lambda r: np.ones_like(r)  # noqa: E731
    assert class_a_tilde_margin(one, 0.05) == pytest.approx(1.0 / 1.95**2, rel=1e-14)
    assert class_a_tilde_margin(one, 1e-9) == pytest.approx(0.25, rel=1e-8)


@pytest.mark.parametrize("delta", [0.0, 0.5, -0.1])
def test_margin_rejects_bad_delta(delta):
    with pytest.raises(ValueError):
        class_a_tilde_margin(make_bump(1.0, 2.0), delta)
