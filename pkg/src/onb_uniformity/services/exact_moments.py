"""
Exact sphere integrals: double factorials, the averages alpha_{l,d} and
beta_{l,d}, monomial moments on S(R^d) and S(C^d), and tensor contractions.

Every closed form is evaluated in exact rational arithmetic.  Each quantity
has at least two independent derivations (direct formula, Gaussianization,
spherical coordinates, the real-sphere embedding of C^d) so that the routes
can serve as mutual oracles.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np
from scipy.special import gammaln

from ..core import config
from ..core.errors import DomainError, InvalidDimensionError, ResourceLimitError
from ..models.field import FieldTag, RngStream, check_dimension
from ..models.polynomial import Scalar, SpherePolynomial
from ..models.tensors import BiSymmetricTensor, SymmetricTensor
from .rng_geometry import sample_uniform_sphere

MAX_EMPIRICAL_RANK = 4
MAX_EMPIRICAL_DIM = 12


@lru_cache(maxsize=4096)
def double_factorial(n: int) -> int:
    """n!! with 0!! = (-1)!! = 1."""
    if n < -1:
        raise DomainError(f"double factorial undefined for n = {n}")
    if n <= 0:
        return 1
    return math.prod(range(n, 0, -2))


def log_double_factorial(n: int) -> float:
    if n < -1:
        raise DomainError(f"double factorial undefined for n = {n}")
    if n % 2 == 0:
        k = n // 2
        return k * math.log(2.0) + float(gammaln(k + 1))
    k = (n + 1) // 2
    return float(gammaln(2 * k + 1)) - k * math.log(2.0) - float(gammaln(k + 1))


def _check_even_degree(ell: int):
    if ell < 0 or ell % 2:
        raise DomainError(f"alpha is defined for even l >= 0 (odd averages vanish), got l = {ell}")


def alpha(ell: int, d: int) -> Fraction:
    """Average of x_1^l over S(R^d): (l-1)!!(d-2)!!/(l+d-2)!!."""
    _check_even_degree(ell)
    d = check_dimension(d, minimum=2)
    return Fraction(double_factorial(ell - 1) * double_factorial(d - 2), double_factorial(ell + d - 2))


def alpha_float(ell: int, d: int) -> float:
    """Log-space evaluation of alpha for very large d."""
    _check_even_degree(ell)
    d = check_dimension(d, minimum=2)
    return math.exp(log_double_factorial(ell - 1) + log_double_factorial(d - 2)
                    - log_double_factorial(ell + d - 2))


def beta(ell: int, d: int) -> Fraction:
    """Average of |z_1|^(2l) over S(C^d): binom(l+d-1, l)^-1."""
    if ell < 0:
        raise DomainError(f"beta needs l >= 0, got {ell}")
    d = check_dimension(d)
    return Fraction(1, math.comb(ell + d - 1, ell))


def beta_float(ell: int, d: int) -> float:
    if ell < 0:
        raise DomainError(f"beta needs l >= 0, got {ell}")
    d = check_dimension(d)
    return math.exp(float(gammaln(ell + 1) + gammaln(d) - gammaln(ell + d)))


def alpha_auto(ell: int, d: int) -> Fraction | float:
    return alpha_float(ell, d) if d > config.FAST_PATH_DIM else alpha(ell, d)


def beta_auto(ell: int, d: int) -> Fraction | float:
    return beta_float(ell, d) if d > config.FAST_PATH_DIM else beta(ell, d)


def beta_via_double_factorials(ell: int, d: int) -> Fraction:
    """(2l)!!(2d-2)!!/(2d+2l-2)!!, the polar-coordinate route."""
    return Fraction(double_factorial(2 * ell) * double_factorial(2 * d - 2), double_factorial(2 * d + 2 * ell - 2))


def hypergeometric_sum(ell: int) -> Fraction:
    """sum_k binom(l,k)^2 / binom(2l,2k)."""
    return sum((Fraction(math.comb(ell, k) ** 2, math.comb(2 * ell, 2 * k)) for k in range(ell + 1)), Fraction(0))


def verify_hypergeometric_identity(ell: int) -> bool:
    """sum_k binom(l,k)^2 binom(2l,2k)^-1 == 4^l binom(2l,l)^-1, exactly."""
    if ell < 0:
        raise DomainError(f"identity is stated for l >= 0, got {ell}")
    return hypergeometric_sum(ell) == Fraction(4 ** ell, math.comb(2 * ell, ell))


def beta_via_real_sphere(ell: int, d: int) -> Fraction:
    """|z_1|^2 = x_1^2 + x_2^2 on S(R^2d): alpha_{2l,2d} times the hypergeometric sum."""
    return alpha(2 * ell, 2 * d) * hypergeometric_sum(ell)


def real_monomial_moment(exponents: Sequence[int]) -> Fraction:
    """Average of x_1^n_1 ... x_d^n_d over S(R^d)."""
    exponents = tuple(int(n) for n in exponents)
    d = check_dimension(len(exponents))
    if min(exponents) < 0:
        raise DomainError("exponents must be non-negative")
    if any(n % 2 for n in exponents):
        return Fraction(0)
    ell = sum(exponents)
    numerator = double_factorial(d - 2) * math.prod(double_factorial(n - 1) for n in exponents)
    return Fraction(numerator, double_factorial(d + ell - 2))


def complex_monomial_moment(exponents: Sequence[int], conj_exponents: Sequence[int] | None = None) -> Fraction:
    """
    Average of prod_j z_j^a_j conj(z_j)^b_j over S(C^d).

    Zero unless a == b; for a == b = n it is (d-1)! prod n_j! / (l+d-1)!.
    """
    exponents = tuple(int(n) for n in exponents)
    d = check_dimension(len(exponents))
    if conj_exponents is not None and tuple(int(n) for n in conj_exponents) != exponents:
        return Fraction(0)
    if min(exponents) < 0:
        raise DomainError("exponents must be non-negative")
    ell = sum(exponents)
    numerator = math.factorial(d - 1) * math.prod(math.factorial(n) for n in exponents)
    return Fraction(numerator, math.factorial(ell + d - 1))


def gaussianization_moment_oracle(exponents: Sequence[int], field: FieldTag = FieldTag.REAL) -> Fraction:
    """
    Sphere moment as E[prod Y_j^n_j] / E[Z^l] with Y standard Gaussian and Z = |Y|.

    Real: E Y^n = (n-1)!! for even n and E Z^l = (d+l-2)!!/(d-2)!! (chi-square moment).
    Complex: each |W_j|^2 = (X^2 + Y^2)/2 is expanded binomially in real Gaussian
    moments, and |W|^2 = chi^2(2d)/2.
    """
    exponents = tuple(int(n) for n in exponents)
    d = check_dimension(len(exponents))
    ell = sum(exponents)
    if FieldTag(field) is FieldTag.REAL:
        if any(n % 2 for n in exponents):
            return Fraction(0)
        gaussian_part = math.prod(double_factorial(n - 1) for n in exponents)
        radial = Fraction(double_factorial(d + ell - 2), double_factorial(d - 2))
        return Fraction(gaussian_part) / radial

    def abs_power_moment(n: int) -> Fraction:
        # E ((X^2 + Y^2)/2)^n for independent standard normals X, Y
        total = sum(math.comb(n, k) * double_factorial(2 * k - 1) * double_factorial(2 * n - 2 * k - 1)
                    for k in range(n + 1))
        return Fraction(total, 2 ** n)

    gaussian_part = math.prod((abs_power_moment(n) for n in exponents), start=Fraction(1))
    radial = Fraction(double_factorial(2 * d + 2 * ell - 2), double_factorial(2 * d - 2) * 2 ** ell)
    return gaussian_part / radial


def symmetrized_delta_tensor(ell: int, d: int, field: FieldTag = FieldTag.REAL) -> SymmetricTensor | BiSymmetricTensor:
    """
    The invariant tensor A~ by multiplicity counting.

    Real (even l): prod_j (c_j - 1)!! / (l - 1)!! on keys whose index counts c_j are all even.
    Complex (bi-rank (l, l)): prod_j c_j! / l! on keys with equal primed and unprimed multisets.
    """
    d = check_dimension(d)
    if FieldTag(field) is FieldTag.REAL:
        coeffs = {}
        if ell % 2 == 0:
            for key in itertools.combinations_with_replacement(range(d), ell):
                counts = Counter(key).values()
                if all(c % 2 == 0 for c in counts):
                    coeffs[key] = Fraction(math.prod(double_factorial(c - 1) for c in counts),
                                           double_factorial(ell - 1))
        return SymmetricTensor(d, ell, coeffs)
    coeffs = {}
    for key in itertools.combinations_with_replacement(range(d), ell):
        counts = Counter(key).values()
        coeffs[(key, key)] = Fraction(math.prod(math.factorial(c) for c in counts), math.factorial(ell))
    return BiSymmetricTensor(d, (ell, ell), coeffs)


def polynomial_sphere_average(tensor: SymmetricTensor | BiSymmetricTensor) -> Scalar:
    """Average over the sphere of the polynomial with coefficient tensor C (trace contraction)."""
    if isinstance(tensor, BiSymmetricTensor):
        p, q = tensor.rank
        if p != q:
            return 0
        return beta(p, tensor.dim) * tensor.full_contraction()
    if tensor.rank % 2:
        return 0
    if tensor.rank == 0:
        return tensor[()]
    return alpha(tensor.rank, tensor.dim) * tensor.full_contraction()


def polynomial_mean(poly: SpherePolynomial) -> Scalar:
    """Exact mean of P over the uniform measure, summed monomial by monomial."""
    total: Scalar = 0
    for key, coef in poly.terms.items():
        if poly.field is FieldTag.REAL:
            moment = real_monomial_moment(key)
        else:
            moment = complex_monomial_moment(key[0], key[1])
        if moment:
            total += coef * moment
    return total


# surface areas and trigonometric integrals


@dataclass(frozen=True)
class PiMultiple:
    """coefficient * pi**pi_power with a rational coefficient."""
    coefficient: Fraction
    pi_power: int

    @property
    def value(self) -> float:
        return float(self.coefficient) * math.pi ** self.pi_power

    def __mul__(self, other: PiMultiple) -> PiMultiple:
        return PiMultiple(self.coefficient * other.coefficient, self.pi_power + other.pi_power)

    def __truediv__(self, other: PiMultiple) -> PiMultiple:
        return PiMultiple(self.coefficient / other.coefficient, self.pi_power - other.pi_power)


def _c(n: int) -> PiMultiple:
    return PiMultiple(Fraction(2), 0) if n % 2 else PiMultiple(Fraction(1), 1)


def _g(n: int) -> PiMultiple:
    """prod_{k=1..n} c(k): 2^((n+1)/2) pi^((n-1)/2) for odd n, (2 pi)^(n/2) for even n."""
    if n % 2:
        return PiMultiple(Fraction(2 ** ((n + 1) // 2)), (n - 1) // 2)
    return PiMultiple(Fraction(2 ** (n // 2)), n // 2)


@dataclass(frozen=True)
class SurfaceArea:
    """|S(R^n)| = g(n) / (n-2)!!."""
    n: int
    g: PiMultiple
    denominator: int

    @property
    def exact(self) -> PiMultiple:
        return PiMultiple(self.g.coefficient / self.denominator, self.g.pi_power)

    @property
    def value(self) -> float:
        return self.exact.value


def sphere_surface_area(n: int) -> SurfaceArea:
    if n < 2:
        raise InvalidDimensionError(f"surface area formula needs n >= 2, got {n}")
    return SurfaceArea(n, _g(n), double_factorial(n - 2))


def sphere_surface_area_gamma(n: int) -> float:
    return n * math.pi ** (n / 2) / math.gamma(n / 2 + 1)


def sin_cos_integral(p: int, q: int, half_range: bool = False) -> PiMultiple:
    """
    Integral of sin^p cos^q over [0, pi] (q even) or [0, pi/2] (q odd).

    Full range: c(p) (q-1)!!(p-1)!!/(p+q)!!; half range: (q-1)!!(p-1)!!/(p+q)!!.
    """
    if p < 0 or q < 0:
        raise DomainError("exponents must be non-negative")
    ratio = Fraction(double_factorial(q - 1) * double_factorial(p - 1), double_factorial(p + q))
    if half_range:
        if q % 2 == 0:
            raise DomainError("the half-range formula holds for odd q")
        return PiMultiple(ratio, 0)
    if q % 2:
        return PiMultiple(Fraction(0), 0)
    return _c(p) * PiMultiple(ratio, 0)


def alpha_via_spherical_coordinates(ell: int, d: int) -> Fraction:
    """|S(R^(d-1))| / |S(R^d)| times the integral of cos^l sin^(d-2) over [0, pi]."""
    _check_even_degree(ell)
    d = check_dimension(d, minimum=3)
    value = sphere_surface_area(d - 1).exact / sphere_surface_area(d).exact * sin_cos_integral(d - 2, ell)
    if value.pi_power != 0:
        raise ArithmeticError(f"powers of pi failed to cancel (pi^{value.pi_power})")
    return value.coefficient


# Monte Carlo estimate of the moment tensor


def empirical_moment_tensor(ell: int, d: int, field: FieldTag, samples: int,
                            rng: RngStream) -> SymmetricTensor | BiSymmetricTensor:
    """
    Monte Carlo estimate of A_{i_1..i_l} = E x_{i_1} ... x_{i_l}, with per-entry standard errors.

    For the complex field the estimate is of E z_{i_1}..z_{i_l} conj(z_{i'_1}..z_{i'_l}).
    """
    field = FieldTag(field)
    d = check_dimension(d)
    max_rank = MAX_EMPIRICAL_RANK if field is FieldTag.REAL else config.MAX_COMPLEX_RANK
    if ell < 0 or ell > max_rank or d > MAX_EMPIRICAL_DIM:
        raise ResourceLimitError(f"empirical moment tensor supports l <= {max_rank}, d <= {MAX_EMPIRICAL_DIM}")
    points = sample_uniform_sphere(d, field, rng, size=samples)
    keys = list(itertools.combinations_with_replacement(range(d), ell))

    def product(key) -> np.ndarray:
        out = np.ones(samples, dtype=points.dtype)
        for i in key:
            out = out * points[:, i]
        return out

    if field is FieldTag.REAL:
        coeffs, stderr = {}, {}
        for key in keys:
            values = product(key)
            coeffs[key] = float(values.mean())
            stderr[key] = float(values.std(ddof=1) / np.sqrt(samples))
        return SymmetricTensor(d, ell, coeffs, stderr)

    conj_products = {key: np.conj(product(key)) for key in keys}
    coeffs, stderr = {}, {}
    for a in keys:
        holo = product(a)
        for b in keys:
            values = holo * conj_products[b]
            coeffs[(a, b)] = complex(values.mean())
            spread = np.sqrt(values.real.var(ddof=1) + values.imag.var(ddof=1))
            stderr[(a, b)] = float(spread / np.sqrt(samples))
    return BiSymmetricTensor(d, (ell, ell), coeffs, stderr)
