import math

import numpy as np
import pytest
from scipy import stats

from helpers import FAMILY_SPECS, EXAMPLE_RUNTIME
from wfsynth.rng import make_rng
from wfsynth.stats.distributions import (
    FAMILIES,
    FAMILY_NAMES,
    DistributionSpec,
    InvalidDistribution,
    dist_cdf,
    dist_pdf,
    dist_quantile,
    dist_sample,
    support,
)

SPECS = {name: DistributionSpec(name, p) for name, p in FAMILY_SPECS.items()}
SPECS["skewnorm-example"] = DistributionSpec.from_dict(EXAMPLE_RUNTIME["distribution"])
IDS = list(SPECS)


def test_eighteen_families_in_enum_order():
    assert len(FAMILY_NAMES) == 18
    assert FAMILY_NAMES[0] == "alpha" and FAMILY_NAMES[-1] == "wald"
    assert set(FAMILY_SPECS) == set(FAMILY_NAMES)


def test_spec_validation():
    with pytest.raises(InvalidDistribution):
        DistributionSpec("gamma", (1.0, 0.0))
    with pytest.raises(InvalidDistribution):
        DistributionSpec("gamma", (1.0, 0.0, 0.0))
    with pytest.raises(InvalidDistribution):
        DistributionSpec("gamma", (-1.0, 0.0, 1.0))
    with pytest.raises(InvalidDistribution):
        DistributionSpec("trapz", (0.8, 0.2, 0.0, 1.0))
    with pytest.raises(InvalidDistribution):
        DistributionSpec("normal", (0.0, 1.0))
    with pytest.raises(InvalidDistribution):
        DistributionSpec("uniform", (math.inf, 1.0))


def test_hand_values():
    assert dist_cdf(DistributionSpec("uniform", (0, 1)), 0.25) == pytest.approx(0.25, abs=1e-15)
    assert dist_cdf(DistributionSpec("gamma", (1, 0, 1)), 1.0) == pytest.approx(1 - math.exp(-1), abs=1e-12)
    assert dist_quantile(DistributionSpec("uniform", (0, 1)), 0.5) == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("name", IDS)
def test_zero_far_below_support(name):
    spec = SPECS[name]
    lo, _ = support(spec)
    if math.isfinite(lo):
        assert dist_cdf(spec, spec.loc - 10 * spec.scale) == 0.0


@pytest.mark.parametrize("name", FAMILY_NAMES)
def test_closed_form_cdf_matches_scipy(name):
    spec = SPECS[name]
    ref = spec.frozen
    x = np.linspace(ref.ppf(1e-6), ref.ppf(1 - 1e-6), 2001)
    assert np.max(np.abs(dist_cdf(spec, x) - ref.cdf(x))) < 1e-10


def _grid(spec, n=1000, lo=1e-4, hi=1 - 1e-4):
    return np.linspace(dist_quantile(spec, lo), dist_quantile(spec, hi), n)


@pytest.mark.parametrize("name", IDS)
def test_cdf_monotone_with_limits(name):
    spec = SPECS[name]
    x = _grid(spec)
    wide = np.linspace(spec.loc - 50 * spec.scale, spec.loc + 50 * spec.scale, 1000)
    for grid in (x, wide):
        F = dist_cdf(spec, grid)
        assert np.all(np.diff(F) >= 0) and F.min() >= 0 and F.max() <= 1
    assert dist_cdf(spec, -1e300) == pytest.approx(0.0, abs=1e-12)
    assert dist_cdf(spec, 1e300) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", IDS)
def test_pdf_matches_cdf_derivative(name):
    spec = SPECS[name]
    x = _grid(spec, lo=0.01, hi=0.99)
    h = 1e-5 * spec.scale
    numeric = (dist_cdf(spec, x + h) - dist_cdf(spec, x - h)) / (2 * h)
    pdf = dist_pdf(spec, x)
    assert np.all(pdf >= 0)
    assert np.max(np.abs(numeric - pdf)) < 1e-4


@pytest.mark.parametrize("name", IDS)
def test_quantile_inverts_cdf(name):
    spec = SPECS[name]
    p = np.arange(1, 1000) / 1000
    assert np.max(np.abs(dist_cdf(spec, dist_quantile(spec, p)) - p)) <= 1e-8


def test_quantile_rejects_out_of_range():
    spec = SPECS["gamma"]
    for p in (0.0, 1.0, -0.1, 1.5):
        with pytest.raises(ValueError):
            dist_quantile(spec, p)


@pytest.mark.parametrize("name", IDS)
def test_sampling_passes_ks(name):
    spec = SPECS[name]
    n = 10_000
    draws = dist_sample(spec, make_rng(20240, name), n)
    d = stats.kstest(draws, lambda x: dist_cdf(spec, x)).statistic
    assert d < stats.kstwo.ppf(0.99, n)


def test_sampling_is_deterministic():
    spec = SPECS["fisk"]
    a = dist_sample(spec, make_rng(5), 50)
    b = dist_sample(spec, make_rng(5), 50)
    assert np.array_equal(a, b)
    assert not np.array_equal(a, dist_sample(spec, make_rng(6), 50))


def test_dict_round_trip():
    spec = DistributionSpec.from_dict(EXAMPLE_RUNTIME["distribution"])
    assert spec.family == "skewnorm" and len(spec.params) == 3
    assert DistributionSpec.from_dict(spec.to_dict()) == spec


def test_family_shape_counts():
    assert {n: len(f.shapes) for n, f in FAMILIES.items()} == {
        n: len(p) - 2 for n, p in FAMILY_SPECS.items()}
