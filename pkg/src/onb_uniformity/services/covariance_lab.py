"""
Covariance of a test function evaluated at two vectors of one Haar basis.

For b_1, b_2 from the same random basis, Cov(phi(b_1), phi(b_2)) = <phi, T phi> - (int phi)^2,
so the covariance is bounded by Var_u(phi)/(d-1) and the bound is attained by
eigenfunctions of T with eigenvalue -1/(d-1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from ..core import config
from ..core.errors import DecompositionUnsupportedError, DimensionMismatchError, DomainError, MeasureUnavailableError
from ..core.logger import get_logger
from ..models.experiments import CovarianceReport
from ..models.field import FieldTag, RngStream, check_dimension
from ..models.polynomial import Scalar, SpherePolynomial
from ..models.regions import TestRegion
from ..tracer import trace_operation
from .exact_moments import polynomial_mean
from .radon_spectrum import harmonic_components, inner_product_exact, radon_eigenvalue
from .rng_geometry import haar_random_onb_columns
from .statistics import Estimate, covariance_estimate, mean_estimate, variance_estimate

logger = get_logger(__name__)

TestFunction = Union[SpherePolynomial, TestRegion]
MIN_BASES = 1000


def _real_scalar(value: Scalar) -> Fraction | float:
    if isinstance(value, complex):
        return value.real
    return value


def function_values(phi: TestFunction, points: np.ndarray) -> np.ndarray:
    """phi at points (..., d); regions act through their indicator."""
    if isinstance(phi, TestRegion):
        return phi.contains(points).astype(float)
    return phi.evaluate_real(points)


def _is_constant(phi: TestFunction) -> bool:
    return isinstance(phi, SpherePolynomial) and phi.is_constant()


def variance_u(phi: TestFunction) -> Fraction | float:
    """Var_u(phi): exact for polynomials, u(A)(1 - u(A)) for region indicators."""
    if isinstance(phi, TestRegion):
        measure = phi.measure()
        return measure * (1.0 - measure)
    mean = _real_scalar(polynomial_mean(phi))
    second = _real_scalar(polynomial_mean(phi.abs_squared()))
    return second - mean * mean


def _check_supported_degree(phi: SpherePolynomial):
    if phi.field is FieldTag.REAL:
        if phi.degree > config.MAX_REAL_RANK:
            raise DecompositionUnsupportedError(f"exact covariance supports degree <= {config.MAX_REAL_RANK}")
        return
    for p, q in phi.homogeneous_parts():
        if max(p, q) > config.MAX_COMPLEX_RANK:
            raise DecompositionUnsupportedError(
                f"exact covariance supports bidegree <= ({config.MAX_COMPLEX_RANK}, {config.MAX_COMPLEX_RANK})")


def _nonconstant_components(phi: SpherePolynomial) -> dict:
    _check_supported_degree(phi)
    return {label: part for label, part in harmonic_components(phi).items() if label not in (0, (0, 0))}


def cov_exact(phi: SpherePolynomial) -> Fraction | float:
    """sum over nonconstant harmonic components H_k of tau_k ||H_k||^2."""
    total: Fraction | float = Fraction(0)
    for label, part in _nonconstant_components(phi).items():
        tau = radon_eigenvalue(label, phi.dim, phi.field)
        if tau:
            total += tau * _real_scalar(inner_product_exact(part, part))
    return total


def cov_exact_harmonic(phi: SpherePolynomial) -> Fraction | float:
    """tau * Var_u(phi) when phi minus its mean lies in a single eigenspace of T."""
    components = _nonconstant_components(phi)
    if not components:
        return Fraction(0)
    eigenvalues = {radon_eigenvalue(label, phi.dim, phi.field) for label in components}
    if len(eigenvalues) > 1:
        raise DecompositionUnsupportedError(
            f"phi spans eigenspaces with eigenvalues {sorted(eigenvalues)}; use cov_exact or cov_pair_mc")
    return eigenvalues.pop() * variance_u(phi)


@dataclass(frozen=True)
class BasisSumVariance:
    value: Fraction | float
    bound: Fraction | float
    variance: Fraction | float
    covariance: Fraction | float


def variance_of_basis_sum(phi: SpherePolynomial, d: int | None = None,
                          field: FieldTag | None = None) -> BasisSumVariance:
    """Var(d^-1 sum_j phi(b_j)) = Var/d + (d-1)/d Cov, with the 2 Var/d ceiling."""
    if (d is not None and d != phi.dim) or (field is not None and FieldTag(field) is not phi.field):
        raise DimensionMismatchError("phi does not live on the requested sphere")
    d = phi.dim
    variance = variance_u(phi)
    covariance = cov_exact(phi)
    value = variance / d + Fraction(d - 1, d) * covariance
    bound = 2 * variance / d
    if d >= 4 and value > bound + 1e-15:
        raise ArithmeticError(f"Var of the basis average {value} exceeds 2 Var/d = {bound}")
    return BasisSumVariance(value, bound, variance, covariance)


@dataclass(frozen=True)
class BasisAverage:
    mean: Estimate
    variance: Estimate


@trace_operation("basis_average_mc")
def basis_average_mc(phi: TestFunction, d: int, field: FieldTag, n_bases: int, rng: RngStream) -> BasisAverage:
    """Mean and variance of d^-1 sum_j phi(b_j) over independent Haar bases."""
    d = check_dimension(d)
    if phi.dim != d:
        raise DimensionMismatchError(f"test function on dimension {phi.dim}, bases in dimension {d}")
    columns = haar_random_onb_columns(d, field, rng, n_bases, n_columns=d)
    averages = function_values(phi, np.swapaxes(columns, 1, 2)).mean(axis=1)
    return BasisAverage(mean_estimate(averages), variance_estimate(averages))


@trace_operation("cov_pair_mc")
def cov_pair_mc(phi: TestFunction, d: int, field: FieldTag, n_bases: int, rng: RngStream,
                columns: tuple[int, int] = (0, 1)) -> CovarianceReport:
    """Sample covariance of (phi(b_i), phi(b_j)) over n_bases independent Haar bases."""
    d = check_dimension(d, minimum=2)
    field = FieldTag(field)
    if phi.dim != d:
        raise DimensionMismatchError(f"test function on dimension {phi.dim}, bases in dimension {d}")
    if n_bases < MIN_BASES:
        raise DomainError(f"cov_pair_mc needs at least {MIN_BASES} bases, got {n_bases}")
    i, j = columns
    if i == j or not (0 <= i < d and 0 <= j < d):
        raise DomainError(f"columns must be two distinct indices below {d}, got {columns}")

    try:
        exact_variance = float(variance_u(phi))
    except MeasureUnavailableError:
        exact_variance = None

    vectors = haar_random_onb_columns(d, field, rng, n_bases, n_columns=max(i, j) + 1)
    first = function_values(phi, vectors[:, :, i])
    second = function_values(phi, vectors[:, :, j])
    marginal = variance_estimate(first)
    if exact_variance is None:
        exact_variance = marginal.value

    if _is_constant(phi):
        covariance = Estimate(0.0, 0.0)
    else:
        covariance = covariance_estimate(first, second)

    exact_covariance = None
    if isinstance(phi, SpherePolynomial):
        try:
            exact_covariance = float(cov_exact(phi))
        except DecompositionUnsupportedError:
            logger.debug("no exact covariance for %r", phi)

    degenerate = exact_variance <= 0
    if degenerate:
        logger.warning("test function has zero variance; the sharpness ratio is undefined")
    bound = exact_variance / (d - 1)
    return CovarianceReport(
        dim=d,
        field=field,
        n_bases=n_bases,
        columns=(i, j),
        exact_variance=exact_variance,
        covariance=covariance.value,
        std_error=covariance.stderr,
        bound=bound,
        sharpness_ratio=None if degenerate else abs(covariance.value) * (d - 1) / exact_variance,
        degenerate=degenerate,
        marginal_variance=marginal.value,
        marginal_variance_stderr=marginal.stderr,
        exact_covariance=exact_covariance,
    )


def standard_test_functions(d: int, field: FieldTag = FieldTag.REAL) -> dict[str, SpherePolynomial]:
    """Library of real-valued polynomial test functions of degree <= 4 (bidegree <= (2, 2))."""
    d = check_dimension(d, minimum=4)
    field = FieldTag(field)
    one = SpherePolynomial.constant(1, d, field)

    if field is FieldTag.REAL:
        def x(i: int, power: int = 1) -> SpherePolynomial:
            return SpherePolynomial.coordinate_power(i, power, d)

        return {
            "x1": x(0),
            "x1^2": x(0, 2),
            "x1^2-1/d": x(0, 2) - Fraction(1, d),
            "x1^3": x(0, 3),
            "x1^4": x(0, 4),
            "x1*x2": x(0) * x(1),
            "x1*x2*x3": x(0) * x(1) * x(2),
            "x1*x2*x3*x4": x(0) * x(1) * x(2) * x(3),
            "x1^2*x2^2": x(0, 2) * x(1, 2),
            "x1^2-x2^2": x(0, 2) - x(1, 2),
            "x1^4-x2^4": x(0, 4) - x(1, 4),
            "x1^2*x2": x(0, 2) * x(1),
            "x1^3*x2": x(0, 3) * x(1),
            "x1^2*x2*x3": x(0, 2) * x(1) * x(2),
            "x1+x2^2": x(0) + x(1, 2),
            "x1+x1^2+x1^3+x1^4": x(0) + x(0, 2) + x(0, 3) + x(0, 4),
            "x1*x2+x3*x4": x(0) * x(1) + x(2) * x(3),
            "(x1+x2)^2": (x(0) + x(1)) ** 2,
            "x1-2*x2+x3^3": x(0) - 2 * x(1) + x(2, 3),
            "x1^2+2*x2^2-x3^2": x(0, 2) + 2 * x(1, 2) - x(2, 2),
            "3*x1^2+x1*x2-x3^4": 3 * x(0, 2) + x(0) * x(1) - x(2, 4),
            "x1^2-3*x1^4/2+1": x(0, 2) - Fraction(3, 2) * x(0, 4) + one,
        }

    def z(i: int) -> SpherePolynomial:
        return SpherePolynomial.monomial(tuple(int(j == i) for j in range(d)), field=FieldTag.COMPLEX)

    def abs2(i: int, power: int = 1) -> SpherePolynomial:
        return SpherePolynomial.coordinate_power(i, power, d, FieldTag.COMPLEX)

    def re(poly: SpherePolynomial) -> SpherePolynomial:
        return poly.real_part()

    def im(poly: SpherePolynomial) -> SpherePolynomial:
        return (poly - poly.conjugate()) * complex(0, -0.5)

    z1, z2, z3 = z(0), z(1), z(2)
    return {
        "|z1|^2": abs2(0),
        "|z1|^2-1/d": abs2(0) - Fraction(1, d),
        "|z1|^4": abs2(0, 2),
        "|z1|^2*|z2|^2": abs2(0) * abs2(1),
        "|z1|^2-|z2|^2": abs2(0) - abs2(1),
        "Re(z1*conj(z2))": re(z1 * z2.conjugate()),
        "Im(z1*conj(z2))": im(z1 * z2.conjugate()),
        "Re(z1)": re(z1),
        "Re(z1^2)": re(z1 * z1),
        "Re(z1^2*conj(z2)^2)": re(z1 * z1 * (z2 * z2).conjugate()),
        "Re(z1*z2*conj(z3))": re(z1 * z2 * z3.conjugate()),
        "|z1|^4-|z2|^4+|z3|^2": abs2(0, 2) - abs2(1, 2) + abs2(2),
        "Re(z1*conj(z2))+|z3|^4": re(z1 * z2.conjugate()) + abs2(2, 2),
    }
