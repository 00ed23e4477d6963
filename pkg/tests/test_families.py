import numpy as np
import pytest

from dunkl_besov.families import FAMILIES, FunctionSpec, build, smooth_cutoff, spectral_bump
from dunkl_besov.measure import WeightedMeasure

M = WeightedMeasure.rank_one(0.0)


def test_label_is_sorted_and_stable():
    spec = FunctionSpec("shifted_gaussian", {"shift": 1.0, "scale": 2.0}, "mixed")
    assert spec.label() == "shifted_gaussian(scale=2.0,shift=1.0)[mixed]"


def test_spec_validation():
    with pytest.raises(ValueError):
        FunctionSpec("cauchy")
    with pytest.raises(ValueError):
        FunctionSpec("gaussian", parity="both")


@pytest.mark.parametrize("family", FAMILIES)
def test_every_family_builds(family):
    params = {"spectral_sum": {"terms": ((0, 0, 1.0),)}}.get(family, {})
    f = build(FunctionSpec(family, params), M)
    assert np.all(np.isfinite(f.even_part))


def test_zero_family():
    f = build(FunctionSpec("zero"), M)
    assert np.all(f.even_part == 0) and f.norm(2) == 0.0


def test_gaussian_parities():
    even = build(FunctionSpec("gaussian", {"scale": 1.5}, "even"), M)
    odd = build(FunctionSpec("gaussian", {"scale": 1.5}, "odd"), M)
    r = even.nodes
    np.testing.assert_allclose(even.even_part, np.exp(-r**2 / 4.5), rtol=1e-15)
    assert np.all(even.odd_part == 0) and np.all(odd.even_part == 0)
    np.testing.assert_allclose(odd.odd_part, np.exp(-r**2 / 4.5) * r / 1.5, rtol=1e-15)


def test_spectral_bump_support_and_exact_spectrum():
    f = build(FunctionSpec("spectral_bump", {"j": 2}), M)
    assert f.side == "spectral"
    r = f.nodes
    assert np.all(f.even_part[(r <= 2) | (r >= 8)] == 0)
    xs = np.array([3.0, 4.0, 9.0])
    e, _ = f.exact_spectrum(xs)
    np.testing.assert_array_equal(e, spectral_bump(2)(xs))


def test_spectral_bump_seed_changes_shape_deterministically():
    a, b = spectral_bump(0, 3), spectral_bump(0, 3)
    c = spectral_bump(0, 0)
    r = np.linspace(0.6, 1.9, 50)
    np.testing.assert_array_equal(a(r), b(r))
    assert not np.allclose(a(r), c(r))


def test_smooth_cutoff():
    r = np.linspace(0, 10, 1001)
    c = smooth_cutoff(r, 4.0, 8.0)
    assert np.all(c[r <= 4] == 1.0) and np.all(c[r >= 8] == 0.0)
    assert np.all(np.diff(c) <= 0)


def test_slow_decay_tapered_to_zero_at_edge():
    f = build(FunctionSpec("slow_decay", {"a": 0.8, "b": 1.0}), M)
    r = f.nodes
    assert np.all(f.even_part[r >= 0.999 * r[-1]] < 1e-12)
    assert np.all(f.even_part[r < 30] > 0)


def test_shifted_gaussian_not_radial():
    with pytest.raises(ValueError):
        build(FunctionSpec("shifted_gaussian", {"shift": 1.0}), WeightedMeasure(0.0, 3))


def test_radial_mode_for_higher_dimension():
    f = build(FunctionSpec("gaussian"), WeightedMeasure(0.5, 2))
    assert f.mode == "radial" and f.odd_part is None
