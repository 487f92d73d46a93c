from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given

from conftest import bihomogeneous_complex_polynomials, homogeneous_real_polynomials
from onb_uniformity.core.errors import DimensionMismatchError, DomainError, ResourceLimitError
from onb_uniformity.models.field import FieldTag, RngStream
from onb_uniformity.models.polynomial import SpherePolynomial
from onb_uniformity.models.tensors import BiSymmetricTensor, SymmetricTensor
from onb_uniformity.services.radon_spectrum import (
    harmonic_components,
    harmonic_projection,
    is_traceless,
    laplacian_check,
    make_traceless,
)
from onb_uniformity.services.rng_geometry import sample_uniform_sphere


def x(i: int, d: int, power: int = 1) -> SpherePolynomial:
    return SpherePolynomial.coordinate_power(i, power, d)


class TestSpherePolynomial:

    def test_arithmetic_and_evaluation(self):
        d = 3
        poly = (x(0, d) + x(1, d)) ** 2 - Fraction(1, 2)
        assert poly.terms[(1, 1, 0)] == 2
        points = np.array([[0.6, 0.8, 0.0], [0.0, 0.0, 1.0]])
        np.testing.assert_allclose(poly.evaluate(points), [(0.6 + 0.8) ** 2 - 0.5, -0.5])

    def test_cancellation_drops_terms(self):
        assert not (x(0, 4, 2) - x(0, 4, 2)).terms

    def test_laplacian(self):
        d = 4
        assert (x(0, d, 2) - x(1, d, 2)).laplacian().terms == {}
        assert x(0, d, 4).laplacian() == 12 * x(0, d, 2)
        assert SpherePolynomial.norm_squared(d).laplacian() == SpherePolynomial.constant(2 * d, d)

    def test_complex_laplacian(self):
        abs_z1 = SpherePolynomial.coordinate_power(0, 1, 3, FieldTag.COMPLEX)
        assert abs_z1.mixed_laplacian() == SpherePolynomial.constant(1, 3, FieldTag.COMPLEX)
        assert abs_z1.laplacian() == SpherePolynomial.constant(4, 3, FieldTag.COMPLEX)

    def test_mixed_laplacian_needs_complex_field(self):
        with pytest.raises(DomainError):
            x(0, 3, 2).mixed_laplacian()

    def test_incompatible_dimensions(self):
        with pytest.raises(DimensionMismatchError):
            x(0, 3) + x(0, 4)
        with pytest.raises(DimensionMismatchError):
            x(0, 3).evaluate(np.ones(4))

    def test_exponent_vector_length_must_match(self):
        with pytest.raises(DimensionMismatchError):
            SpherePolynomial(3, FieldTag.REAL, {(1, 1): 1})

    @pytest.mark.parametrize("field, key", [
        (FieldTag.REAL, (2, -1, 0)),
        (FieldTag.COMPLEX, ((1, 0, 0), (0, -1, 0))),
    ])
    def test_negative_exponents(self, field, key):
        with pytest.raises(DomainError):
            SpherePolynomial(3, field, {key: 1})

    def test_complex_evaluation_uses_conjugates(self):
        z1 = SpherePolynomial.monomial((1, 0), field=FieldTag.COMPLEX)
        poly = z1 * z1.conjugate()
        point = np.array([0.6j, 0.8])
        assert np.real(poly.evaluate(point)) == pytest.approx(0.36)

    def test_real_part_is_real_valued(self, stream):
        z = SpherePolynomial.monomial((1, 1, 0), conj_exponents=(0, 0, 1))
        points = sample_uniform_sphere(3, FieldTag.COMPLEX, stream, size=100)
        assert np.max(np.abs(np.imag(z.real_part().evaluate(points)))) < 1e-14

    def test_homogeneous_parts(self):
        poly = x(0, 3) + x(1, 3, 2) + 1
        assert sorted(poly.homogeneous_parts()) == [0, 1, 2]
        with pytest.raises(DomainError):
            poly.homogeneous_degree()

    def test_drop_variable(self):
        poly = x(0, 3, 2) + x(1, 3, 2) + x(0, 3) * x(2, 3)
        assert poly.drop_variable(0) == SpherePolynomial.coordinate_power(0, 2, 2)


class TestTensors:

    @given(homogeneous_real_polynomials())
    def test_real_tensor_represents_polynomial(self, poly):
        if not poly.terms:
            return
        assert SymmetricTensor.from_polynomial(poly).to_polynomial() == poly

    @given(bihomogeneous_complex_polynomials())
    def test_complex_tensor_represents_polynomial(self, poly):
        if not poly.terms:
            return
        assert BiSymmetricTensor.from_polynomial(poly).to_polynomial() == poly

    def test_trace_of_square(self):
        d = 5
        tensor = SymmetricTensor.from_polynomial(SpherePolynomial.norm_squared(d))
        assert tensor.trace()[()] == d
        assert tensor.full_contraction() == d

    def test_permutation_invariant_access(self):
        tensor = SymmetricTensor(3, 3, {(2, 0, 1): Fraction(1, 3)})
        assert tensor[(1, 2, 0)] == tensor[(0, 1, 2)] == Fraction(1, 3)

    def test_index_out_of_range(self):
        with pytest.raises(DomainError):
            SymmetricTensor(2, 2, {(0, 3): 1})


class TestHarmonicProjection:

    def test_traceless_part_of_x1_squared(self):
        d = 6
        tensor = make_traceless(SymmetricTensor(d, 2, {(0, 0): 1}))
        assert is_traceless(tensor)
        assert tensor.to_polynomial() == x(0, d, 2) - SpherePolynomial.norm_squared(d) * Fraction(1, d)

    def test_traceless_part_of_abs_z1_squared(self):
        d = 4
        tensor = make_traceless(BiSymmetricTensor(d, (1, 1), {((0,), (0,)): 1}))
        expected = (SpherePolynomial.coordinate_power(0, 1, d, FieldTag.COMPLEX)
                    - SpherePolynomial.norm_squared(d, FieldTag.COMPLEX) * Fraction(1, d))
        assert is_traceless(tensor)
        assert tensor.to_polynomial() == expected

    def test_rank_limits(self):
        with pytest.raises(ResourceLimitError):
            make_traceless(SymmetricTensor(3, 5, {(0,) * 5: 1}))
        with pytest.raises(ResourceLimitError):
            make_traceless(BiSymmetricTensor(3, (3, 0), {((0, 0, 0), ()): 1}))

    @given(homogeneous_real_polynomials())
    def test_projection_is_harmonic(self, poly):
        assert laplacian_check(harmonic_projection(poly)) == 0

    @given(bihomogeneous_complex_polynomials())
    def test_complex_projection_is_harmonic(self, poly):
        assert not harmonic_projection(poly).mixed_laplacian().terms

    def test_laplacian_check_needs_homogeneous_input(self):
        with pytest.raises(DomainError):
            laplacian_check(x(0, 3) + 1)

    @given(homogeneous_real_polynomials())
    def test_components_rebuild_polynomial_on_sphere(self, poly):
        components = harmonic_components(poly)
        for part in components.values():
            for piece in part.homogeneous_parts().values():
                assert laplacian_check(piece) == 0
        points = sample_uniform_sphere(poly.dim, FieldTag.REAL, RngStream(5), size=50)
        total = sum((part.evaluate(points) for part in components.values()), np.zeros(50))
        np.testing.assert_allclose(total, poly.evaluate(points), atol=1e-10)

    @given(bihomogeneous_complex_polynomials())
    def test_complex_components_rebuild_polynomial_on_sphere(self, poly):
        components = harmonic_components(poly)
        points = sample_uniform_sphere(poly.dim, FieldTag.COMPLEX, RngStream(5), size=50)
        total = sum((part.evaluate(points) for part in components.values()), np.zeros(50, dtype=complex))
        np.testing.assert_allclose(total, poly.evaluate(points), atol=1e-10)
