"""
Spectrum of the spherical Radon operator

    (T psi)(x) = average of psi over the unit sphere of x^perp

in the real and complex settings, explicit harmonic polynomials, exact
equator averages and Monte Carlo application of T.

T is rotation invariant, so it acts as a multiple tau of the identity on
each space of harmonic polynomials:

    real:    tau_l = (-1)^(l/2) alpha_{l,d-1} for even l, 0 for odd l
    complex: tau_{l,l} = (-1)^l beta_{l,d-1}, 0 off the diagonal l != l'
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Protocol, Union

import numpy as np

from ..core import config
from ..core.errors import (
    ConvergenceError,
    DimensionMismatchError,
    DomainError,
    InvalidDimensionError,
    ResourceLimitError,
)
from ..core.logger import get_logger
from ..models.field import FieldTag, RngStream, check_dimension
from ..models.polynomial import Scalar, SpherePolynomial
from ..models.tensors import BiSymmetricTensor, SymmetricTensor
from ..tracer import trace_operation
from .exact_moments import alpha, beta, polynomial_mean
from .rng_geometry import sample_uniform_on_orthocomplement, sample_uniform_sphere
from .statistics import Estimate, mean_estimate

logger = get_logger(__name__)

DegreeLabel = Union[int, tuple[int, int]]
TRACELESS_TOL = 1e-12
MIN_RADON_SAMPLES = 100
SPECTRUM_SCAN_DEGREE = 100


def _warn_small_dimension(d: int):
    if d < 4:
        logger.warning("Radon eigenvalues are only established for d >= 4; evaluating the formula at d = %d", d)


def radon_eigenvalue_real(ell: int, d: int) -> Fraction:
    if ell < 0:
        raise DomainError(f"degree must be non-negative, got {ell}")
    d = check_dimension(d, minimum=3)
    _warn_small_dimension(d)
    if ell == 0:
        return Fraction(1)
    if ell % 2:
        return Fraction(0)
    sign = -1 if (ell // 2) % 2 else 1
    return sign * alpha(ell, d - 1)


def radon_eigenvalue_complex(ell: int, ell_conj: int, d: int) -> Fraction:
    if ell < 0 or ell_conj < 0:
        raise DomainError(f"bidegree must be non-negative, got ({ell}, {ell_conj})")
    d = check_dimension(d, minimum=2)
    _warn_small_dimension(d)
    if ell != ell_conj:
        return Fraction(0)
    return (-1) ** ell * beta(ell, d - 1)


def radon_eigenvalue(label: DegreeLabel, d: int, field: FieldTag) -> Fraction:
    if FieldTag(field) is FieldTag.REAL:
        return radon_eigenvalue_real(int(label), d)
    p, q = label
    return radon_eigenvalue_complex(p, q, d)


@dataclass
class EigenvalueTable:
    field: FieldTag
    dim: int
    values: dict[DegreeLabel, Fraction] = dataclass_field(default_factory=dict)

    def __getitem__(self, label: DegreeLabel) -> Fraction:
        return self.values[label]

    def nonconstant(self) -> dict[DegreeLabel, Fraction]:
        return {k: v for k, v in self.values.items() if k not in (0, (0, 0))}

    def largest_nonconstant(self) -> Fraction:
        return max((abs(v) for v in self.nonconstant().values()), default=Fraction(0))


@trace_operation("eigenvalue_table")
def eigenvalue_table(d: int, field: FieldTag, max_degree: int) -> EigenvalueTable:
    field = FieldTag(field)
    if max_degree < 0:
        raise DomainError("max_degree must be non-negative")
    table = EigenvalueTable(field, d)
    if field is FieldTag.REAL:
        for ell in range(max_degree + 1):
            table.values[ell] = radon_eigenvalue_real(ell, d)
    else:
        for p in range(max_degree + 1):
            for q in range(max_degree + 1):
                table.values[(p, q)] = radon_eigenvalue_complex(p, q, d)
    return table


@trace_operation("spectral_gap")
def spectral_gap(d: int, field: FieldTag) -> Fraction:
    """1/(d-1), checked against the largest |tau| over nonconstant degrees up to 100."""
    d = check_dimension(d, minimum=3)
    gap = Fraction(1, d - 1)
    if FieldTag(field) is FieldTag.REAL:
        scanned = [abs(radon_eigenvalue_real(ell, d)) for ell in range(1, SPECTRUM_SCAN_DEGREE + 1)]
    else:
        scanned = [abs(radon_eigenvalue_complex(ell, ell, d)) for ell in range(1, SPECTRUM_SCAN_DEGREE + 1)]
    if max(scanned) != gap:
        raise ArithmeticError(f"largest nonconstant eigenvalue {max(scanned)} differs from 1/(d-1) = {gap}")
    return gap


# harmonic polynomials


def _norm_squared_power(dim: int, field: FieldTag, k: int) -> SpherePolynomial:
    return SpherePolynomial.norm_squared(dim, field) ** k


def _projection_terms(poly: SpherePolynomial) -> list[tuple[int, Fraction, SpherePolynomial]]:
    """
    (k, c_k, D^k P) with H = sum_k c_k |x|^(2k) D^k P harmonic.

    Real: D is the Laplacian and c_k = (-1)^k / (2^k k! prod_{j<=k} (n + 2l - 2 - 2j)).
    Complex: D = sum_j d/dz_j d/dconj(z_j) and c_k = (-1)^k / (k! prod_{j<=k} (n + p + q - 1 - j)).
    """
    degree = poly.homogeneous_degree()
    n = poly.dim
    terms = []
    coef = Fraction(1)
    current = poly
    k = 0
    while current.terms:
        terms.append((k, coef, current))
        k += 1
        if poly.field is FieldTag.REAL:
            current = current.laplacian()
            factor = 2 * k * (n + 2 * degree - 2 - 2 * k)
        else:
            p, q = degree
            current = current.mixed_laplacian()
            factor = k * (n + p + q - 1 - k)
        if current.terms:
            coef = coef * Fraction(-1, factor)
    return terms


def harmonic_projection(poly: SpherePolynomial) -> SpherePolynomial:
    """Harmonic part of a homogeneous (bi-homogeneous) polynomial."""
    if not poly.is_homogeneous():
        raise DomainError("harmonic projection needs a homogeneous polynomial")
    result = SpherePolynomial(poly.dim, poly.field)
    for k, coef, derivative in _projection_terms(poly):
        result = result + _norm_squared_power(poly.dim, poly.field, k) * derivative * coef
    return result


def harmonic_components(poly: SpherePolynomial) -> dict[DegreeLabel, SpherePolynomial]:
    """
    Harmonic polynomials H_k, keyed by degree, whose sum equals P on the unit sphere.

    On the sphere |x| = 1, so P = H + sum_{k>=1} (-c_k) D^k P and the lower-degree
    remainders are decomposed recursively.
    """
    components: dict[DegreeLabel, SpherePolynomial] = {}

    def accumulate(part: SpherePolynomial):
        if not part.terms:
            return
        degree = part.homogeneous_degree()
        harmonic = SpherePolynomial(part.dim, part.field)
        remainders = []
        for k, coef, derivative in _projection_terms(part):
            harmonic = harmonic + _norm_squared_power(part.dim, part.field, k) * derivative * coef
            if k:
                remainders.append(derivative * (-coef))
        if harmonic.terms:
            components[degree] = components.get(degree, SpherePolynomial(part.dim, part.field)) + harmonic
        for remainder in remainders:
            accumulate(remainder)

    for part in poly.homogeneous_parts().values():
        accumulate(part)
    return {k: v for k, v in sorted(components.items()) if v.terms}


def _check_rank(tensor: SymmetricTensor | BiSymmetricTensor):
    if isinstance(tensor, BiSymmetricTensor):
        if max(tensor.rank) > config.MAX_COMPLEX_RANK:
            raise ResourceLimitError(f"bi-rank {tensor.rank} exceeds the supported ({config.MAX_COMPLEX_RANK}, "
                                     f"{config.MAX_COMPLEX_RANK})")
    elif tensor.rank > config.MAX_REAL_RANK:
        raise ResourceLimitError(f"rank {tensor.rank} exceeds the supported {config.MAX_REAL_RANK}")


def make_traceless(tensor: SymmetricTensor | BiSymmetricTensor) -> SymmetricTensor | BiSymmetricTensor:
    """Remove every trace part; the result differs from C by delta-tensor multiples only."""
    _check_rank(tensor)
    projected = harmonic_projection(tensor.to_polynomial())
    kind = type(tensor)
    if not projected.terms:
        return kind(tensor.dim, tensor.rank)
    return kind(tensor.dim, tensor.rank, kind.from_polynomial(projected).coeffs)


def is_traceless(tensor: SymmetricTensor | BiSymmetricTensor, tol: float = TRACELESS_TOL) -> bool:
    if isinstance(tensor, BiSymmetricTensor):
        if min(tensor.rank) < 1:
            return True
    elif tensor.rank < 2:
        return True
    return tensor.trace().max_abs() <= tol


def laplacian_check(poly: SpherePolynomial) -> float:
    """Largest coefficient of the Laplacian of P; zero iff P is harmonic."""
    if not poly.is_homogeneous():
        raise DomainError("laplacian_check needs a homogeneous polynomial")
    return poly.laplacian().max_abs_coefficient()


def equator_average_exact(poly: SpherePolynomial, axis: int) -> Scalar:
    """Average of P over the great sphere {x_axis = 0}, by monomial moments in d - 1 variables."""
    if poly.dim < 2:
        raise InvalidDimensionError("the equator of S^0 is empty")
    return polynomial_mean(poly.drop_variable(axis))


# applying T


class SphereFunction(Protocol):
    dim: int

    def evaluate(self, points: np.ndarray) -> np.ndarray: ...


@dataclass(frozen=True)
class RotatedPolynomial:
    """x -> P(R^* x), the polynomial P moved by the rotation R."""
    poly: SpherePolynomial
    rotation: np.ndarray

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def field(self) -> FieldTag:
        return self.poly.field

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        return self.poly.evaluate(np.asarray(points) @ np.conj(self.rotation))

    __call__ = evaluate


def _real_values(function: SphereFunction, points: np.ndarray) -> np.ndarray:
    return np.real(function.evaluate(points))


def apply_radon_mc(function: SphereFunction, x: np.ndarray, samples: int, rng: RngStream) -> Estimate:
    """Unbiased Monte Carlo estimate of (T P)(x) with its standard error."""
    x = np.asarray(x)
    if x.shape != (function.dim,):
        raise DimensionMismatchError(f"point of shape {x.shape} for a function on dimension {function.dim}")
    if samples < MIN_RADON_SAMPLES:
        raise DomainError(f"apply_radon_mc needs at least {MIN_RADON_SAMPLES} samples, got {samples}")
    if isinstance(function, SpherePolynomial) and function.is_constant():
        return Estimate(float(np.real(complex(function.constant_term()))), 0.0)
    ys = sample_uniform_on_orthocomplement(x, rng, size=samples)
    return mean_estimate(_real_values(function, ys))


def apply_radon_exact(poly: SpherePolynomial, x: np.ndarray) -> float | complex:
    """(T P)(x) = sum_k tau_k H_k(x) over the harmonic components of P."""
    x = np.asarray(x)
    if x.shape != (poly.dim,):
        raise DimensionMismatchError(f"point of shape {x.shape} for a polynomial on dimension {poly.dim}")
    total = 0
    for label, harmonic in harmonic_components(poly).items():
        tau = radon_eigenvalue(label, poly.dim, poly.field)
        if tau:
            total = total + float(tau) * harmonic.evaluate(x)
    value = complex(total)
    return value.real if poly.field is FieldTag.REAL else value


def inner_product_exact(first: SpherePolynomial, second: SpherePolynomial) -> Scalar:
    """<P, Q> = integral of conj(P) Q over the sphere."""
    return polynomial_mean(first.conjugate() * second)


def l2_norm_squared(poly: SpherePolynomial) -> float:
    return float(np.real(complex(inner_product_exact(poly, poly))))


# eigenvalue verification


@dataclass
class EigenvalueVerification:
    label: DegreeLabel
    dim: int
    field: FieldTag
    expected: Fraction
    ratios: list[Estimate]
    closed_form_ok: bool
    consistent: bool

    @property
    def passed(self) -> bool:
        return self.closed_form_ok and self.consistent

    @property
    def pooled_ratio(self) -> Estimate:
        weights = np.array([1.0 / max(r.stderr, 1e-300) ** 2 for r in self.ratios])
        values = np.array([r.value for r in self.ratios])
        return Estimate(float(np.sum(weights * values) / np.sum(weights)), float(1.0 / np.sqrt(np.sum(weights))))


def harmonic_representative(label: DegreeLabel, d: int, field: FieldTag) -> SpherePolynomial:
    """Real-valued harmonic polynomial of the given degree, built as the traceless part of x_1^l."""
    field = FieldTag(field)
    if field is FieldTag.REAL:
        tensor = SymmetricTensor(d, int(label), {(0,) * int(label): 1})
        return make_traceless(tensor).to_polynomial()
    p, q = label
    tensor = BiSymmetricTensor(d, (p, q), {((0,) * p, (0,) * q): 1})
    return make_traceless(tensor).to_polynomial().real_part()


def _sup_norm(function: SphereFunction, field: FieldTag, rng: RngStream, samples: int = 4096) -> float:
    points = sample_uniform_sphere(function.dim, field, rng, size=samples)
    return float(np.max(np.abs(_real_values(function, points))))


@trace_operation("verify_eigenvalue")
def verify_eigenvalue(label: DegreeLabel, d: int, field: FieldTag, samples: int, rng: RngStream,
                      n_points: int = 3, rotation: np.ndarray | None = None,
                      max_attempts: int = 100) -> EigenvalueVerification:
    """
    Monte Carlo check that (T P)(x) / P(x) equals the closed-form tau at several points x.

    Points where |P(x)| < 0.1 sup|P| are redrawn; the ratios must agree with tau
    and with one another within the sigma band.
    """
    field = FieldTag(field)
    poly = harmonic_representative(label, d, field)
    function: SphereFunction = poly if rotation is None else RotatedPolynomial(poly, rotation)
    expected = radon_eigenvalue(label, d, field)
    threshold = 0.1 * _sup_norm(function, field, rng.substream(0))

    ratios = []
    for i in range(n_points):
        point_rng = rng.substream(1 + i)
        for attempt in range(max_attempts):
            x = sample_uniform_sphere(d, field, point_rng.substream(2 * attempt))
            value = float(_real_values(function, x))
            if abs(value) >= threshold:
                break
            logger.debug("resampling evaluation point %d (|P(x)| = %.3g)", i, abs(value))
        else:
            raise ConvergenceError(f"no evaluation point with |P(x)| >= {threshold:.3g} in {max_attempts} draws")
        estimate = apply_radon_mc(function, x, samples, point_rng.substream(2 * attempt + 1))
        ratios.append(Estimate(estimate.value / value, estimate.stderr / abs(value)))

    band = config.SIGMA_BAND
    closed_form_ok = all(r.within(float(expected), slack=1e-12) for r in ratios)
    consistent = all(
        abs(a.value - b.value) <= band * math.hypot(a.stderr, b.stderr) + 1e-12
        for i, a in enumerate(ratios) for b in ratios[i + 1:]
    )
    if not (closed_form_ok and consistent):
        logger.warning("eigenvalue check for %s in dimension %d failed: ratios %s, expected %s",
                       label, d, [round(r.value, 6) for r in ratios], expected)
    return EigenvalueVerification(label, d, field, expected, ratios, closed_form_ok, consistent)


# properties of T


@dataclass(frozen=True)
class SelfAdjointnessWitness:
    left: Estimate
    right: Estimate
    difference: Estimate


def _uniform_pairs(dim: int, field: FieldTag, samples: int, rng: RngStream) -> tuple[np.ndarray, np.ndarray]:
    xs = sample_uniform_sphere(dim, field, rng.substream(0), size=samples)
    ys = sample_uniform_on_orthocomplement(xs, rng.substream(1))
    return xs, ys


def self_adjointness_witness(first: SphereFunction, second: SphereFunction, samples: int, rng: RngStream,
                             field: FieldTag = FieldTag.REAL) -> SelfAdjointnessWitness:
    """Estimates of <P, TQ> = E P(x) Q(y) and <TP, Q> = E P(y) Q(x) from the same (x, y) pairs."""
    if first.dim != second.dim:
        raise DimensionMismatchError("both functions must live on the same sphere")
    xs, ys = _uniform_pairs(first.dim, field, samples, rng)
    left = _real_values(first, xs) * _real_values(second, ys)
    right = _real_values(first, ys) * _real_values(second, xs)
    return SelfAdjointnessWitness(mean_estimate(left), mean_estimate(right), mean_estimate(left - right))


def radon_norm_mc(function: SphereFunction, samples: int, rng: RngStream,
                  field: FieldTag = FieldTag.REAL) -> Estimate:
    """Unbiased estimate of ||T P||^2 = E P(y) P(y') with y, y' independent on S(x^perp)."""
    xs, ys = _uniform_pairs(function.dim, field, samples, rng)
    ys_other = sample_uniform_on_orthocomplement(xs, rng.substream(2))
    return mean_estimate(_real_values(function, ys) * _real_values(function, ys_other))


@dataclass(frozen=True)
class BilinearBound:
    lhs: float
    rhs: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + 1e-12


def bilinear_bound_check(chi: SpherePolynomial, phi: SpherePolynomial) -> BilinearBound:
    """
    |<chi, T phi> - (int chi)(int phi)| <= ||chi - int chi|| ||phi - int phi|| / (d - 1),
    evaluated through the exact harmonic decompositions of both polynomials.
    """
    if chi.dim != phi.dim or chi.field is not phi.field:
        raise DimensionMismatchError("chi and phi must live on the same sphere")
    d = phi.dim
    chi_parts, phi_parts = harmonic_components(chi), harmonic_components(phi)
    pairing: Scalar = 0
    for label, phi_part in phi_parts.items():
        if label in (0, (0, 0)) or label not in chi_parts:
            continue
        tau = radon_eigenvalue(label, d, phi.field)
        if tau:
            pairing += tau * inner_product_exact(chi_parts[label], phi_part)
    lhs = abs(complex(pairing))
    chi_centered = chi - polynomial_mean(chi)
    phi_centered = phi - polynomial_mean(phi)
    rhs = math.sqrt(l2_norm_squared(chi_centered) * l2_norm_squared(phi_centered)) / (d - 1)
    return BilinearBound(lhs, rhs)
