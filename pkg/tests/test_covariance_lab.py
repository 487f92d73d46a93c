from fractions import Fraction

import pytest

from conftest import within_sigma
from onb_uniformity.core.errors import (
    DecompositionUnsupportedError,
    DimensionMismatchError,
    DomainError,
    InvalidDimensionError,
)
from onb_uniformity.models.field import FieldTag, RngStream
from onb_uniformity.models.polynomial import SpherePolynomial
from onb_uniformity.models.regions import RealCap
from onb_uniformity.services.covariance_lab import (
    basis_average_mc,
    cov_exact,
    cov_exact_harmonic,
    cov_pair_mc,
    standard_test_functions,
    variance_of_basis_sum,
    variance_u,
)
from onb_uniformity.services.uniformity_harness import cap_height_for_measure

N_BASES = 100_000

DIMS = [4, 6, 10, pytest.param(20, marks=pytest.mark.slow)]


def centered_x1_squared(d: int) -> SpherePolynomial:
    return standard_test_functions(d)["x1^2-1/d"]


class TestExactCovariance:

    def test_reference_values_in_dimension_ten(self):
        phi = centered_x1_squared(10)
        assert variance_u(phi) == Fraction(3, 200)
        assert cov_exact(phi) == Fraction(-1, 600)
        assert cov_exact_harmonic(phi) == Fraction(-1, 600)

    def test_complex_degree_one_one(self):
        d = 5
        phi = standard_test_functions(d, FieldTag.COMPLEX)["|z1|^2-1/d"]
        variance = variance_u(phi)
        assert variance == Fraction(1, d * (d + 1)) * 2 - Fraction(1, d * d)
        assert cov_exact(phi) == -variance / (d - 1)

    @pytest.mark.parametrize("field", [FieldTag.REAL, FieldTag.COMPLEX])
    @pytest.mark.parametrize("d", DIMS)
    def test_library_respects_bound(self, d, field):
        for name, phi in standard_test_functions(d, field).items():
            covariance = float(cov_exact(phi))
            bound = float(variance_u(phi)) / (d - 1)
            assert abs(covariance) <= bound * (1 + 1e-12) + 1e-15, name

    @pytest.mark.parametrize("field", [FieldTag.REAL, FieldTag.COMPLEX])
    @pytest.mark.parametrize("d", DIMS)
    def test_library_respects_bound_by_sampling(self, d, field):
        for k, (name, phi) in enumerate(standard_test_functions(d, field).items()):
            report = cov_pair_mc(phi, d, field, 20_000, RngStream(700 + d, k))
            assert report.bound == pytest.approx(float(variance_u(phi)) / (d - 1))
            assert abs(report.covariance) <= report.bound + 4 * report.std_error + 1e-15, name
            assert report.bound_holds(), name

    def test_odd_degree_has_zero_covariance(self):
        library = standard_test_functions(6)
        assert cov_exact(library["x1"]) == 0
        assert cov_exact(library["x1^3"]) == 0
        assert cov_exact(library["x1*x2*x3"]) == 0

    def test_mixed_eigenspaces_need_full_decomposition(self):
        phi = standard_test_functions(6)["x1+x2^2"]
        with pytest.raises(DecompositionUnsupportedError):
            cov_exact_harmonic(phi)
        assert cov_exact(phi) == Fraction(-1, 5) * variance_u(standard_test_functions(6)["x1^2"])

    def test_degree_five_is_unsupported(self):
        with pytest.raises(DecompositionUnsupportedError):
            cov_exact(SpherePolynomial.coordinate_power(0, 5, 6))


class TestBasisSum:

    @pytest.mark.parametrize("name", ["x1^2-1/d", "x1^2-x2^2", "x1*x2"])
    def test_degree_two_harmonics_average_exactly(self, name):
        result = variance_of_basis_sum(standard_test_functions(8)[name])
        assert result.value == 0
        assert result.covariance == -result.variance / 7

    def test_complex_degree_one_one(self):
        result = variance_of_basis_sum(standard_test_functions(5, FieldTag.COMPLEX)["|z1|^2-|z2|^2"])
        assert result.value == 0

    @pytest.mark.parametrize("field", [FieldTag.REAL, FieldTag.COMPLEX])
    def test_library_below_ceiling(self, field):
        for name, phi in standard_test_functions(6, field).items():
            result = variance_of_basis_sum(phi)
            assert result.value <= result.bound + 1e-15, name

    def test_wrong_sphere(self):
        with pytest.raises(DimensionMismatchError):
            variance_of_basis_sum(centered_x1_squared(6), d=7)

    def test_monte_carlo_average(self, stream):
        d = 6
        phi = SpherePolynomial.coordinate_power(0, 4, d)
        exact = variance_of_basis_sum(phi)
        average = basis_average_mc(phi, d, FieldTag.REAL, 20_000, stream)
        assert within_sigma(average.mean.value, 3 / (d * (d + 2)), average.mean.stderr)
        assert within_sigma(average.variance.value, float(exact.value), average.variance.stderr)


class TestCovarianceMonteCarlo:

    def test_degree_two_attains_bound(self):
        d = 10
        report = cov_pair_mc(centered_x1_squared(d), d, FieldTag.REAL, N_BASES, RngStream(600))
        assert within_sigma(report.covariance, -1 / 600, report.std_error)
        assert report.exact_covariance == pytest.approx(-1 / 600)
        assert report.bound == pytest.approx(1 / 600)
        assert report.bound_holds()
        assert report.sharpness_ratio == pytest.approx(1.0, abs=4 * report.std_error * (d - 1) / report.exact_variance)

    def test_other_column_pair(self):
        d = 10
        report = cov_pair_mc(centered_x1_squared(d), d, FieldTag.REAL, N_BASES, RngStream(601), columns=(2, 5))
        assert report.columns == (2, 5)
        assert within_sigma(report.covariance, -1 / 600, report.std_error)

    def test_complex_field(self):
        d = 5
        phi = standard_test_functions(d, FieldTag.COMPLEX)["|z1|^2-1/d"]
        report = cov_pair_mc(phi, d, FieldTag.COMPLEX, N_BASES, RngStream(602))
        assert within_sigma(report.covariance, float(cov_exact(phi)), report.std_error)

    def test_region_indicator(self):
        d = 8
        cap = RealCap(d, cap_height_for_measure(0.3, d))
        report = cov_pair_mc(cap, d, FieldTag.REAL, 20_000, RngStream(603))
        assert report.exact_variance == pytest.approx(0.21)
        assert report.exact_covariance is None
        assert report.bound_holds()

    def test_constant_function_is_degenerate(self, stream):
        report = cov_pair_mc(SpherePolynomial.constant(2, 4), 4, FieldTag.REAL, 1000, stream)
        assert report.covariance == 0.0
        assert report.degenerate
        assert report.sharpness_ratio is None

    def test_too_few_bases(self, stream):
        with pytest.raises(DomainError):
            cov_pair_mc(centered_x1_squared(6), 6, FieldTag.REAL, 999, stream)

    @pytest.mark.parametrize("columns", [(1, 1), (0, 6), (-1, 2)])
    def test_invalid_columns(self, stream, columns):
        with pytest.raises(DomainError):
            cov_pair_mc(centered_x1_squared(6), 6, FieldTag.REAL, 1000, stream, columns=columns)

    def test_dimension_mismatch(self, stream):
        with pytest.raises(DimensionMismatchError):
            cov_pair_mc(centered_x1_squared(6), 7, FieldTag.REAL, 1000, stream)


class TestLibrary:

    def test_sizes(self):
        assert len(standard_test_functions(4)) == 22
        assert len(standard_test_functions(4, FieldTag.COMPLEX)) == 13

    def test_library_is_real_valued(self):
        for phi in standard_test_functions(4, FieldTag.COMPLEX).values():
            assert phi == phi.conjugate()

    def test_needs_four_dimensions(self):
        with pytest.raises(InvalidDimensionError):
            standard_test_functions(3)
