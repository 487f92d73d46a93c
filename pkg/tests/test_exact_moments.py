import itertools
import math
from collections import Counter
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import homogeneous_real_polynomials, within_sigma
from onb_uniformity.core import config
from onb_uniformity.core.errors import DomainError, InvalidDimensionError, ResourceLimitError
from onb_uniformity.models.field import FieldTag
from onb_uniformity.models.polynomial import SpherePolynomial
from onb_uniformity.models.tensors import SymmetricTensor
from onb_uniformity.services.exact_moments import (
    alpha,
    alpha_auto,
    alpha_float,
    alpha_via_spherical_coordinates,
    beta,
    beta_auto,
    beta_float,
    beta_via_double_factorials,
    beta_via_real_sphere,
    complex_monomial_moment,
    double_factorial,
    empirical_moment_tensor,
    gaussianization_moment_oracle,
    log_double_factorial,
    polynomial_mean,
    polynomial_sphere_average,
    real_monomial_moment,
    sin_cos_integral,
    sphere_surface_area,
    sphere_surface_area_gamma,
    symmetrized_delta_tensor,
    verify_hypergeometric_identity,
)


def exponent_vectors(d: int, max_degree: int):
    for degree in range(max_degree + 1):
        for indices in itertools.combinations_with_replacement(range(d), degree):
            counts = Counter(indices)
            yield tuple(counts.get(j, 0) for j in range(d))


class TestDoubleFactorial:

    @pytest.mark.parametrize("n, expected", [(-1, 1), (0, 1), (1, 1), (5, 15), (6, 48), (9, 945)])
    def test_values(self, n, expected):
        assert double_factorial(n) == expected

    def test_below_minus_one(self):
        with pytest.raises(DomainError):
            double_factorial(-2)

    @pytest.mark.parametrize("n", range(-1, 80))
    def test_log_space(self, n):
        assert math.isclose(log_double_factorial(n), math.log(double_factorial(n)), rel_tol=1e-12, abs_tol=1e-12)


class TestAlphaBeta:

    def test_reference_values(self):
        assert alpha(4, 4) == Fraction(1, 8)
        assert alpha(2, 10) == Fraction(1, 10)
        assert alpha(0, 7) == 1
        assert beta(2, 3) == Fraction(1, 6)
        assert beta(0, 5) == 1

    @given(st.integers(2, 400))
    def test_second_moments_are_one_over_d(self, d):
        assert alpha(2, d) == Fraction(1, d)
        assert beta(1, d) == Fraction(1, d)

    @given(ell=st.integers(0, 30).map(lambda k: 2 * k), d=st.integers(2, 200))
    def test_alpha_recursion(self, ell, d):
        assert alpha(ell + 2, d) / alpha(ell, d) == Fraction(ell + 1, ell + d)

    @given(ell=st.integers(0, 60), d=st.integers(1, 200))
    def test_beta_recursion(self, ell, d):
        assert beta(ell + 1, d) / beta(ell, d) == Fraction(ell + 1, ell + d)

    @given(ell=st.integers(1, 20).map(lambda k: 2 * k), d=st.integers(2, 200))
    def test_alpha_decreases_with_dimension(self, ell, d):
        assert alpha(ell, d + 1) < alpha(ell, d)

    @given(ell=st.integers(1, 40), d=st.integers(1, 200))
    def test_beta_decreases_with_dimension(self, ell, d):
        assert beta(ell, d + 1) < beta(ell, d)

    @given(st.integers(2, 300))
    def test_second_moment_is_the_largest(self, d):
        alphas = [alpha(ell, d) for ell in range(2, 41, 2)]
        betas = [beta(ell, d) for ell in range(1, 41)]
        assert max(alphas) == alphas[0] == Fraction(1, d)
        assert max(betas) == betas[0] == Fraction(1, d)

    def test_odd_degree_is_rejected(self):
        with pytest.raises(DomainError):
            alpha(3, 5)

    def test_dimension_one_is_rejected(self):
        with pytest.raises(InvalidDimensionError):
            alpha(2, 1)

    @given(ell=st.integers(0, 20).map(lambda k: 2 * k), d=st.integers(2, 300))
    def test_float_path_matches_exact(self, ell, d):
        assert math.isclose(alpha_float(ell, d), float(alpha(ell, d)), rel_tol=1e-10)
        assert math.isclose(beta_float(ell // 2, d), float(beta(ell // 2, d)), rel_tol=1e-10)

    def test_float_path_in_huge_dimension(self):
        assert math.isclose(alpha_float(2, 10**7), 1e-7, rel_tol=1e-6)
        assert math.isclose(beta_float(1, 10**7), 1e-7, rel_tol=1e-6)

    def test_auto_switches_above_fast_path_dim(self, monkeypatch):
        monkeypatch.setattr(config, "FAST_PATH_DIM", 5)
        assert isinstance(alpha_auto(2, 10), float)
        assert isinstance(beta_auto(2, 10), float)
        assert alpha_auto(2, 4) == Fraction(1, 4)

    def test_beta_routes_agree(self):
        for ell in range(51):
            for d in range(1, 51):
                expected = beta(ell, d)
                assert beta_via_double_factorials(ell, d) == expected
                assert beta_via_real_sphere(ell, d) == expected

    @pytest.mark.parametrize("ell", range(21))
    def test_hypergeometric_identity(self, ell):
        assert verify_hypergeometric_identity(ell)

    def test_spherical_coordinates_route(self):
        for ell in range(0, 21, 2):
            for d in range(3, 31):
                assert alpha_via_spherical_coordinates(ell, d) == alpha(ell, d)


class TestMonomialMoments:

    def test_reference_values(self):
        assert real_monomial_moment((2, 2, 0, 0)) == Fraction(1, 24)
        assert real_monomial_moment((4, 0, 0, 0, 0)) == Fraction(3, 35)
        assert real_monomial_moment((1, 1, 0)) == 0
        assert complex_monomial_moment((1, 1, 0)) == Fraction(1, 12)
        assert complex_monomial_moment((1, 0), (0, 1)) == 0

    def test_real_moments_match_gaussianization(self):
        cases = 0
        for d in range(1, 11):
            for exponents in exponent_vectors(d, 8):
                assert real_monomial_moment(exponents) == gaussianization_moment_oracle(exponents), exponents
                cases += 1
        assert cases > 1000

    def test_complex_moments_match_gaussianization(self):
        for d in range(1, 7):
            for exponents in exponent_vectors(d, 6):
                assert complex_monomial_moment(exponents) == gaussianization_moment_oracle(
                    exponents, FieldTag.COMPLEX), exponents

    def test_negative_exponent(self):
        with pytest.raises(DomainError):
            real_monomial_moment((2, -2))

    @pytest.mark.parametrize("field", [FieldTag.REAL, FieldTag.COMPLEX])
    def test_delta_tensor_reproduces_moments(self, field):
        d = 4
        ell = 4 if field is FieldTag.REAL else 2
        tensor = symmetrized_delta_tensor(ell, d, field)
        for indices in itertools.combinations_with_replacement(range(d), ell):
            counts = tuple(Counter(indices).get(j, 0) for j in range(d))
            if field is FieldTag.REAL:
                assert alpha(ell, d) * tensor[indices] == real_monomial_moment(counts)
            else:
                assert beta(ell, d) * tensor[(indices, indices)] == complex_monomial_moment(counts)

    def test_odd_rank_delta_tensor_is_zero(self):
        assert symmetrized_delta_tensor(3, 4).coeffs == {}

    @given(homogeneous_real_polynomials())
    def test_trace_contraction_equals_monomial_sum(self, poly):
        if not poly.terms:
            return
        tensor = SymmetricTensor.from_polynomial(poly)
        assert polynomial_sphere_average(tensor) == polynomial_mean(poly)

    def test_polynomial_mean_of_norm(self):
        assert polynomial_mean(SpherePolynomial.norm_squared(6) ** 2) == 1
        assert polynomial_mean(SpherePolynomial.norm_squared(3, FieldTag.COMPLEX)) == 1


class TestSurfaceArea:

    def test_low_dimensions(self):
        circle, sphere, three_sphere = (sphere_surface_area(n).exact for n in (2, 3, 4))
        assert (circle.coefficient, circle.pi_power) == (2, 1)
        assert (sphere.coefficient, sphere.pi_power) == (4, 1)
        assert (three_sphere.coefficient, three_sphere.pi_power) == (2, 2)

    @pytest.mark.parametrize("n", range(2, 61))
    def test_matches_gamma_formula(self, n):
        reference = sphere_surface_area_gamma(n)
        assert abs(sphere_surface_area(n).value - reference) <= 1e-12 * reference

    def test_dimension_below_two(self):
        with pytest.raises(InvalidDimensionError):
            sphere_surface_area(1)

    def test_trigonometric_integrals(self):
        assert sin_cos_integral(1, 2).coefficient == Fraction(2, 3)
        whole = sin_cos_integral(0, 0)
        assert (whole.coefficient, whole.pi_power) == (1, 1)
        assert sin_cos_integral(0, 1, half_range=True).coefficient == 1
        assert sin_cos_integral(2, 3).coefficient == 0
        with pytest.raises(DomainError):
            sin_cos_integral(1, 2, half_range=True)


class TestEmpiricalMomentTensor:

    def test_real_second_moments(self, stream):
        d = 4
        tensor = empirical_moment_tensor(2, d, FieldTag.REAL, 50_000, stream)
        for i, j in itertools.combinations_with_replacement(range(d), 2):
            expected = 1 / d if i == j else 0.0
            assert within_sigma(tensor[(i, j)], expected, tensor.stderr[(i, j)])

    def test_complex_second_moments(self, stream):
        d = 3
        tensor = empirical_moment_tensor(1, d, FieldTag.COMPLEX, 50_000, stream)
        for i in range(d):
            for j in range(d):
                expected = 1 / d if i == j else 0.0
                assert within_sigma(abs(tensor[((i,), (j,))] - expected), 0.0, tensor.stderr[((i,), (j,))])

    def test_odd_rank_vanishes(self, stream):
        d = 5
        tensor = empirical_moment_tensor(1, d, FieldTag.REAL, 50_000, stream)
        for i in range(d):
            assert within_sigma(tensor[(i,)], 0.0, tensor.stderr[(i,)])

    def test_fourth_rank_mixed_entry(self, stream):
        d = 4
        tensor = empirical_moment_tensor(4, d, FieldTag.REAL, 100_000, stream)
        expected = alpha(4, d) * symmetrized_delta_tensor(4, d)[(0, 0, 1, 1)]
        assert expected == Fraction(1, 24)
        assert within_sigma(tensor[(0, 0, 1, 1)], 1 / 24, tensor.stderr[(0, 0, 1, 1)])
        assert within_sigma(tensor[(0, 0, 0, 0)], 1 / 8, tensor.stderr[(0, 0, 0, 0)])

    def test_rank_limit(self, stream):
        with pytest.raises(ResourceLimitError):
            empirical_moment_tensor(5, 3, FieldTag.REAL, 100, stream)
