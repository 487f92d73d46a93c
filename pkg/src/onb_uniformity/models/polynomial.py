"""
Finite monomial expansions used as test functions on the unit sphere.

Real polynomials are keyed by an exponent tuple (n_1, ..., n_d).  Complex
polynomials are polynomials in z and conj(z), keyed by a pair of exponent
tuples (holomorphic, antiholomorphic).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

from ..core.errors import DimensionMismatchError, DomainError
from .field import FieldTag, check_dimension

Exponents = tuple[int, ...]
Key = Union[Exponents, tuple[Exponents, Exponents]]
Scalar = Union[int, Fraction, float, complex]


def _is_zero(value: Scalar) -> bool:
    return value == 0


def _to_number(value: Scalar) -> float | complex:
    if isinstance(value, complex):
        return value
    return float(value)


def _add_exponents(a: Exponents, b: Exponents) -> Exponents:
    return tuple(x + y for x, y in zip(a, b))


class SpherePolynomial:
    """Polynomial in d real variables, or in z and conj(z) for the complex field."""

    def __init__(self, dim: int, field: FieldTag, terms: dict[Key, Scalar] | None = None):
        self.dim = check_dimension(dim)
        self.field = FieldTag(field)
        self.terms: dict[Key, Scalar] = {}
        for key, coef in (terms or {}).items():
            key = self._normalize_key(key)
            total = self.terms.get(key, 0) + coef
            if _is_zero(total):
                self.terms.pop(key, None)
            else:
                self.terms[key] = total

    def _normalize_key(self, key) -> Key:
        if self.field is FieldTag.REAL:
            key = tuple(int(n) for n in key)
            if len(key) != self.dim:
                raise DimensionMismatchError(f"exponent vector {key} does not fit dimension {self.dim}")
            if min(key, default=0) < 0:
                raise DomainError("exponents must be non-negative")
            return key
        holo, anti = key
        holo = tuple(int(n) for n in holo)
        anti = tuple(int(n) for n in anti)
        if len(holo) != self.dim or len(anti) != self.dim:
            raise DimensionMismatchError(f"exponent pair {key} does not fit dimension {self.dim}")
        if min(holo + anti, default=0) < 0:
            raise DomainError("exponents must be non-negative")
        return holo, anti

    # construction helpers

    @classmethod
    def constant(cls, value: Scalar, dim: int, field: FieldTag = FieldTag.REAL) -> SpherePolynomial:
        zero = (0,) * dim
        key = zero if FieldTag(field) is FieldTag.REAL else (zero, zero)
        return cls(dim, field, {key: value})

    @classmethod
    def monomial(cls, exponents: Iterable[int], coef: Scalar = 1,
                 conj_exponents: Iterable[int] | None = None,
                 field: FieldTag | None = None) -> SpherePolynomial:
        exponents = tuple(exponents)
        if conj_exponents is None and field in (None, FieldTag.REAL):
            return cls(len(exponents), FieldTag.REAL, {exponents: coef})
        anti = tuple(conj_exponents) if conj_exponents is not None else (0,) * len(exponents)
        return cls(len(exponents), FieldTag.COMPLEX, {(exponents, anti): coef})

    @classmethod
    def coordinate_power(cls, index: int, power: int, dim: int,
                         field: FieldTag = FieldTag.REAL, coef: Scalar = 1) -> SpherePolynomial:
        """x_i^power (real) or |z_i|^(2 power) (complex)."""
        exps = tuple(power if j == index else 0 for j in range(dim))
        if FieldTag(field) is FieldTag.REAL:
            return cls(dim, field, {exps: coef})
        return cls(dim, field, {(exps, exps): coef})

    @classmethod
    def norm_squared(cls, dim: int, field: FieldTag = FieldTag.REAL) -> SpherePolynomial:
        total = cls(dim, field)
        for i in range(dim):
            total = total + cls.coordinate_power(i, 2 if FieldTag(field) is FieldTag.REAL else 1, dim, field)
        return total

    # structure

    def _degrees(self, key: Key) -> int | tuple[int, int]:
        if self.field is FieldTag.REAL:
            return sum(key)
        return sum(key[0]), sum(key[1])

    @property
    def degree(self) -> int:
        """Total degree (sum of holomorphic and antiholomorphic degrees in the complex case)."""
        degrees = [self._degrees(k) for k in self.terms]
        if not degrees:
            return 0
        if self.field is FieldTag.REAL:
            return max(degrees)
        return max(p + q for p, q in degrees)

    def homogeneous_parts(self) -> dict[int | tuple[int, int], SpherePolynomial]:
        parts: dict = {}
        for key, coef in self.terms.items():
            parts.setdefault(self._degrees(key), {})[key] = coef
        return {deg: SpherePolynomial(self.dim, self.field, terms) for deg, terms in sorted(parts.items())}

    def is_homogeneous(self) -> bool:
        return len({self._degrees(k) for k in self.terms}) <= 1

    def homogeneous_degree(self) -> int | tuple[int, int]:
        degrees = {self._degrees(k) for k in self.terms}
        if len(degrees) > 1:
            raise DomainError("polynomial is not homogeneous")
        if not degrees:
            return 0 if self.field is FieldTag.REAL else (0, 0)
        return degrees.pop()

    def is_constant(self) -> bool:
        return all(self._degrees(k) in (0, (0, 0)) for k in self.terms)

    def constant_term(self) -> Scalar:
        zero = (0,) * self.dim
        key = zero if self.field is FieldTag.REAL else (zero, zero)
        return self.terms.get(key, 0)

    def max_abs_coefficient(self) -> float:
        return max((abs(_to_number(c)) for c in self.terms.values()), default=0.0)

    # arithmetic

    def _check_compatible(self, other: SpherePolynomial):
        if other.dim != self.dim or other.field is not self.field:
            raise DimensionMismatchError(
                f"cannot combine polynomials on {self.field.value}^{self.dim} and {other.field.value}^{other.dim}")

    def __add__(self, other) -> SpherePolynomial:
        if not isinstance(other, SpherePolynomial):
            other = SpherePolynomial.constant(other, self.dim, self.field)
        self._check_compatible(other)
        terms = dict(self.terms)
        for key, coef in other.terms.items():
            terms[key] = terms.get(key, 0) + coef
        return SpherePolynomial(self.dim, self.field, terms)

    __radd__ = __add__

    def __neg__(self) -> SpherePolynomial:
        return SpherePolynomial(self.dim, self.field, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other) -> SpherePolynomial:
        return self + (-other)

    def __rsub__(self, other) -> SpherePolynomial:
        return (-self) + other

    def __mul__(self, other) -> SpherePolynomial:
        if not isinstance(other, SpherePolynomial):
            return SpherePolynomial(self.dim, self.field, {k: c * other for k, c in self.terms.items()})
        self._check_compatible(other)
        terms: dict[Key, Scalar] = {}
        for ka, ca in self.terms.items():
            for kb, cb in other.terms.items():
                if self.field is FieldTag.REAL:
                    key = _add_exponents(ka, kb)
                else:
                    key = (_add_exponents(ka[0], kb[0]), _add_exponents(ka[1], kb[1]))
                terms[key] = terms.get(key, 0) + ca * cb
        return SpherePolynomial(self.dim, self.field, terms)

    __rmul__ = __mul__

    def __pow__(self, power: int) -> SpherePolynomial:
        result = SpherePolynomial.constant(1, self.dim, self.field)
        for _ in range(power):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpherePolynomial):
            return NotImplemented
        return self.dim == other.dim and self.field is other.field and self.terms == other.terms

    def conjugate(self) -> SpherePolynomial:
        if self.field is FieldTag.REAL:
            return SpherePolynomial(self.dim, self.field, {k: _conj(c) for k, c in self.terms.items()})
        return SpherePolynomial(self.dim, self.field,
                                {(anti, holo): _conj(c) for (holo, anti), c in self.terms.items()})

    def real_part(self) -> SpherePolynomial:
        return (self + self.conjugate()) * Fraction(1, 2)

    def abs_squared(self) -> SpherePolynomial:
        return self * self.conjugate()

    # calculus

    def laplacian(self) -> SpherePolynomial:
        """Euclidean Laplacian; for C^d this is 4 * sum_j d/dz_j d/dconj(z_j)."""
        if self.field is FieldTag.REAL:
            terms: dict[Key, Scalar] = {}
            for key, coef in self.terms.items():
                for j, n in enumerate(key):
                    if n >= 2:
                        lowered = key[:j] + (n - 2,) + key[j + 1:]
                        terms[lowered] = terms.get(lowered, 0) + coef * n * (n - 1)
            return SpherePolynomial(self.dim, self.field, terms)
        return self.mixed_laplacian() * 4

    def mixed_laplacian(self) -> SpherePolynomial:
        """sum_j d/dz_j d/dconj(z_j) (complex field only)."""
        if self.field is FieldTag.REAL:
            raise DomainError("mixed Laplacian is defined for complex polynomials only")
        terms: dict[Key, Scalar] = {}
        for (holo, anti), coef in self.terms.items():
            for j in range(self.dim):
                a, b = holo[j], anti[j]
                if a and b:
                    key = (holo[:j] + (a - 1,) + holo[j + 1:], anti[:j] + (b - 1,) + anti[j + 1:])
                    terms[key] = terms.get(key, 0) + coef * a * b
        return SpherePolynomial(self.dim, self.field, terms)

    # restriction

    def drop_variable(self, axis: int) -> SpherePolynomial:
        """Restriction to the hyperplane {x_axis = 0}, as a polynomial in d - 1 variables."""
        if not 0 <= axis < self.dim:
            raise DimensionMismatchError(f"axis {axis} out of range for dimension {self.dim}")
        terms: dict[Key, Scalar] = {}
        for key, coef in self.terms.items():
            if self.field is FieldTag.REAL:
                if key[axis]:
                    continue
                terms[key[:axis] + key[axis + 1:]] = coef
            else:
                holo, anti = key
                if holo[axis] or anti[axis]:
                    continue
                terms[(holo[:axis] + holo[axis + 1:], anti[:axis] + anti[axis + 1:])] = coef
        return SpherePolynomial(self.dim - 1, self.field, terms)

    # evaluation

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        """Evaluate at points of shape (..., d); complex polynomials return complex values."""
        points = np.asarray(points)
        if points.shape[-1] != self.dim:
            raise DimensionMismatchError(f"points have dimension {points.shape[-1]}, polynomial {self.dim}")
        dtype = np.complex128 if (self.field.is_complex or np.iscomplexobj(points)) else np.float64
        out = np.zeros(points.shape[:-1], dtype=dtype)
        conj_points = np.conj(points) if self.field.is_complex else None
        for key, coef in self.terms.items():
            value = np.full(points.shape[:-1], _to_number(coef), dtype=dtype)
            if self.field is FieldTag.REAL:
                for j, n in enumerate(key):
                    if n:
                        value = value * points[..., j] ** n
            else:
                holo, anti = key
                for j in range(self.dim):
                    if holo[j]:
                        value = value * points[..., j] ** holo[j]
                    if anti[j]:
                        value = value * conj_points[..., j] ** anti[j]
            out = out + value
        return out

    def evaluate_real(self, points: np.ndarray) -> np.ndarray:
        """Real part of the values; test functions are real-valued by construction."""
        return np.real(self.evaluate(points))

    __call__ = evaluate

    def __repr__(self) -> str:
        if not self.terms:
            return f"SpherePolynomial({self.field.value}^{self.dim}: 0)"
        shown = " + ".join(f"{c}*{_format_key(k, self.field)}" for k, c in list(self.terms.items())[:6])
        more = " + ..." if len(self.terms) > 6 else ""
        return f"SpherePolynomial({self.field.value}^{self.dim}: {shown}{more})"


def _conj(value: Scalar) -> Scalar:
    return value.conjugate() if isinstance(value, complex) else value


def _format_key(key: Key, field: FieldTag) -> str:
    if field is FieldTag.REAL:
        parts = [f"x{j + 1}^{n}" if n > 1 else f"x{j + 1}" for j, n in enumerate(key) if n]
        return "*".join(parts) or "1"
    holo, anti = key
    parts = [f"z{j + 1}^{n}" if n > 1 else f"z{j + 1}" for j, n in enumerate(holo) if n]
    parts += [f"zb{j + 1}^{n}" if n > 1 else f"zb{j + 1}" for j, n in enumerate(anti) if n]
    return "*".join(parts) or "1"


def multinomial(counts: Iterable[int]) -> int:
    counts = list(counts)
    result = math.factorial(sum(counts))
    for c in counts:
        result //= math.factorial(c)
    return result
