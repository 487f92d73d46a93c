"""
Coefficient tensors of homogeneous (real) and bi-homogeneous (complex) polynomials.

Components are stored sparsely under sorted index tuples, so every access is
permutation invariant.  A polynomial corresponds to the full index sum

    P(x) = sum_{i_1..i_l} C_{i_1..i_l} x_{i_1} ... x_{i_l}

so the coefficient of a monomial equals C times the number of index tuples
that sort to its key.
"""
from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction

from ..core.errors import DomainError
from .field import FieldTag
from .polynomial import Scalar, SpherePolynomial, multinomial

IndexKey = tuple[int, ...]


def _counts_to_key(exponents: tuple[int, ...]) -> IndexKey:
    return tuple(j for j, n in enumerate(exponents) for _ in range(n))


def _key_to_counts(key: IndexKey, dim: int) -> tuple[int, ...]:
    counter = Counter(key)
    return tuple(counter.get(j, 0) for j in range(dim))


def _scale(coef: Scalar, multiplicity: int) -> Scalar:
    if isinstance(coef, (int, Fraction)):
        return Fraction(coef, multiplicity) if isinstance(coef, int) else coef / multiplicity
    return coef / multiplicity


@dataclass
class SymmetricTensor:
    dim: int
    rank: int
    coeffs: dict[IndexKey, Scalar] = field(default_factory=dict)
    stderr: dict[IndexKey, float] | None = None

    def __post_init__(self):
        self.coeffs = {tuple(sorted(k)): v for k, v in self.coeffs.items() if v != 0}
        for key in self.coeffs:
            if len(key) != self.rank or (key and not 0 <= min(key) <= max(key) < self.dim):
                raise DomainError(f"index {key} incompatible with rank {self.rank}, dimension {self.dim}")

    def __getitem__(self, indices) -> Scalar:
        return self.coeffs.get(tuple(sorted(indices)), 0)

    @classmethod
    def from_polynomial(cls, poly: SpherePolynomial) -> SymmetricTensor:
        if poly.field is not FieldTag.REAL:
            raise DomainError("SymmetricTensor represents real polynomials; use BiSymmetricTensor")
        rank = poly.homogeneous_degree()
        coeffs = {_counts_to_key(exps): _scale(coef, multinomial(exps)) for exps, coef in poly.terms.items()}
        return cls(poly.dim, rank, coeffs)

    def to_polynomial(self) -> SpherePolynomial:
        terms = {}
        for key, value in self.coeffs.items():
            counts = _key_to_counts(key, self.dim)
            terms[counts] = value * multinomial(counts)
        if not terms:
            return SpherePolynomial(self.dim, FieldTag.REAL)
        return SpherePolynomial(self.dim, FieldTag.REAL, terms)

    def trace(self) -> SymmetricTensor:
        """Contraction of one pair of slots: sum_i C_{i i i_3 .. i_l}."""
        if self.rank < 2:
            raise DomainError("trace needs rank >= 2")
        result: dict[IndexKey, Scalar] = {}
        for rest in itertools.combinations_with_replacement(range(self.dim), self.rank - 2):
            total = sum(self[(i, i) + rest] for i in range(self.dim))
            if total != 0:
                result[rest] = total
        return SymmetricTensor(self.dim, self.rank - 2, result)

    def full_contraction(self) -> Scalar:
        """sum over i_1..i_{l/2} of C_{i_1 i_1 i_2 i_2 ...} (0 for odd rank)."""
        if self.rank % 2:
            return 0
        total: Scalar = 0
        for pairs in itertools.product(range(self.dim), repeat=self.rank // 2):
            total += self[tuple(i for i in pairs for _ in range(2))]
        return total

    def max_abs(self) -> float:
        return max((abs(complex(v)) for v in self.coeffs.values()), default=0.0)


@dataclass
class BiSymmetricTensor:
    """Tensor symmetric within its unprimed and within its primed index group."""
    dim: int
    rank: tuple[int, int]
    coeffs: dict[tuple[IndexKey, IndexKey], Scalar] = field(default_factory=dict)
    stderr: dict[tuple[IndexKey, IndexKey], float] | None = None

    def __post_init__(self):
        self.rank = tuple(self.rank)
        self.coeffs = {(tuple(sorted(a)), tuple(sorted(b))): v for (a, b), v in self.coeffs.items() if v != 0}
        for a, b in self.coeffs:
            if (len(a), len(b)) != self.rank:
                raise DomainError(f"index pair {(a, b)} incompatible with bi-rank {self.rank}")

    def __getitem__(self, indices) -> Scalar:
        unprimed, primed = indices
        return self.coeffs.get((tuple(sorted(unprimed)), tuple(sorted(primed))), 0)

    @classmethod
    def from_polynomial(cls, poly: SpherePolynomial) -> BiSymmetricTensor:
        if poly.field is not FieldTag.COMPLEX:
            raise DomainError("BiSymmetricTensor represents complex polynomials")
        rank = poly.homogeneous_degree()
        coeffs = {}
        for (holo, anti), coef in poly.terms.items():
            key = (_counts_to_key(holo), _counts_to_key(anti))
            coeffs[key] = _scale(coef, multinomial(holo) * multinomial(anti))
        return cls(poly.dim, rank, coeffs)

    def to_polynomial(self) -> SpherePolynomial:
        terms = {}
        for (a, b), value in self.coeffs.items():
            holo, anti = _key_to_counts(a, self.dim), _key_to_counts(b, self.dim)
            terms[(holo, anti)] = value * multinomial(holo) * multinomial(anti)
        return SpherePolynomial(self.dim, FieldTag.COMPLEX, terms)

    def trace(self) -> BiSymmetricTensor:
        """sum_i C_{i i_2..i_l, i i'_2..i'_l'}."""
        p, q = self.rank
        if p < 1 or q < 1:
            raise DomainError("trace needs bi-rank components >= 1")
        result = {}
        for rest_a in itertools.combinations_with_replacement(range(self.dim), p - 1):
            for rest_b in itertools.combinations_with_replacement(range(self.dim), q - 1):
                total = sum(self[((i,) + rest_a, (i,) + rest_b)] for i in range(self.dim))
                if total != 0:
                    result[(rest_a, rest_b)] = total
        return BiSymmetricTensor(self.dim, (p - 1, q - 1), result)

    def full_contraction(self) -> Scalar:
        """sum_{i_1..i_l} C_{i_1..i_l, i_1..i_l} (0 unless l = l')."""
        p, q = self.rank
        if p != q:
            return 0
        total: Scalar = 0
        for indices in itertools.product(range(self.dim), repeat=p):
            total += self[(indices, indices)]
        return total

    def max_abs(self) -> float:
        return max((abs(complex(v)) for v in self.coeffs.values()), default=0.0)
