import numpy as np
import pytest

from conftest import within_sigma
from onb_uniformity.core.errors import DomainError, MeasureUnavailableError
from onb_uniformity.models.field import FieldTag, RngStream
from onb_uniformity.models.regions import (
    Band,
    ComplexCap,
    Complement,
    Custom,
    Halfspace,
    Partition,
    RealCap,
    complex_cap_measure,
    real_cap_measure,
)
from onb_uniformity.services.rng_geometry import haar_random_rotation, sample_uniform_sphere
from onb_uniformity.services.statistics import (
    Estimate,
    covariance_estimate,
    mean_estimate,
    two_proportion_agree,
    wilson_interval,
)
from onb_uniformity.services.uniformity_harness import estimate_region_measure

SAMPLES = 40_000


class TestCapMeasures:

    def test_closed_forms(self):
        assert real_cap_measure(0.2, 3) == pytest.approx(0.4)
        assert real_cap_measure(0.0, 17) == pytest.approx(0.5)
        assert real_cap_measure(-0.2, 3) == pytest.approx(0.6)
        assert complex_cap_measure(0.5, 3) == pytest.approx(0.25)

    def test_saturation(self):
        assert real_cap_measure(1.0, 5) == 0.0
        assert real_cap_measure(-1.0, 5) == 1.0
        assert complex_cap_measure(0.0, 4) == 1.0
        assert complex_cap_measure(1.0, 4) == 0.0

    def test_height_out_of_range(self):
        with pytest.raises(DomainError):
            RealCap(3, 1.5)
        with pytest.raises(DomainError):
            ComplexCap(3, -0.1)


@pytest.mark.parametrize("region", [
    RealCap(5, 0.3),
    ComplexCap(4, 0.2),
    Band(6, -0.2, 0.1),
    Band(3, 0.1, 0.6, FieldTag.COMPLEX),
    Halfspace(7),
    Halfspace(3, FieldTag.COMPLEX),
    Complement(RealCap(4, -0.4)),
], ids=lambda region: type(region).__name__)
def test_measure_matches_monte_carlo(region):
    estimate = estimate_region_measure(region, SAMPLES, RngStream(11))
    assert within_sigma(estimate.value, region.measure(), estimate.stderr)


def test_band_with_infinite_bounds_covers_sphere():
    band = Band(5, -np.inf, np.inf)
    assert band.measure() == pytest.approx(1.0)
    points = sample_uniform_sphere(5, FieldTag.REAL, RngStream(1), size=100)
    assert band.contains(points).all()


def test_band_bounds_out_of_order():
    with pytest.raises(DomainError):
        Band(4, 0.3, 0.1)


@pytest.mark.parametrize("field", [FieldTag.REAL, FieldTag.COMPLEX])
def test_rotated_region_contains_rotated_points(field):
    d = 5
    stream = RngStream(3)
    region = RealCap(d, 0.1) if field is FieldTag.REAL else ComplexCap(d, 0.15)
    rotation = haar_random_rotation(d, field, stream.substream(1))
    points = sample_uniform_sphere(d, field, stream, size=500)
    moved = points @ rotation.T
    np.testing.assert_array_equal(region.rotated(rotation).contains(moved), region.contains(points))


def test_custom_region_rotation():
    d = 4
    region = Custom(d, lambda pts: pts[..., 0] > 0.2, known_measure=real_cap_measure(0.2, d))
    rotation = haar_random_rotation(d, FieldTag.REAL, RngStream(9))
    points = sample_uniform_sphere(d, FieldTag.REAL, RngStream(10), size=500)
    np.testing.assert_array_equal(region.rotated(rotation).contains(points @ rotation.T), region.contains(points))
    assert region.measure() == pytest.approx(real_cap_measure(0.2, d))


def test_custom_region_without_measure():
    with pytest.raises(MeasureUnavailableError):
        Custom(3, lambda pts: pts[..., 0] > 0).measure()


class TestPartition:

    def test_valid_partition(self):
        cap = RealCap(6, 0.25)
        parts = Partition([cap, Complement(cap)])
        parts.check()
        assert len(parts) == 2
        assert sum(parts.measures()) == pytest.approx(1.0)

    def test_measures_must_sum_to_one(self):
        with pytest.raises(DomainError):
            Partition([RealCap(6, 0.25), RealCap(6, 0.5)]).check()


class TestStatistics:

    def test_estimate_band(self):
        assert Estimate(1.02, 0.01).within(1.0, sigma=4)
        assert not Estimate(1.05, 0.01).within(1.0, sigma=4)
        assert Estimate(1.05, 0.0).within(1.0, slack=0.1)

    def test_single_value_has_infinite_stderr(self):
        assert mean_estimate(np.array([3.0])).stderr == float("inf")

    def test_covariance_of_independent_samples(self, stream):
        generator = stream.generator()
        a = generator.standard_normal(20_000)
        b = generator.standard_normal(20_000)
        estimate = covariance_estimate(a, b)
        assert within_sigma(estimate.value, 0.0, estimate.stderr)
        assert covariance_estimate(a, a).value == pytest.approx(np.var(a, ddof=1))

    def test_wilson_interval(self):
        low, high = wilson_interval(0, 200)
        assert low == pytest.approx(0.0, abs=1e-12)
        assert 0.0 < high < 0.025
        assert wilson_interval(0, 0) == (0.0, 1.0)
        low, high = wilson_interval(50, 100)
        assert low < 0.5 < high

    def test_two_proportion_agreement(self):
        assert two_proportion_agree(20, 200, 25, 200)
        assert not two_proportion_agree(10, 1000, 200, 1000)
