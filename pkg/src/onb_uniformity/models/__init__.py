from .experiments import CellStats, CovarianceReport, ModeComparison, TrialConfig, TrialMode, TrialReport
from .field import FieldTag, OrthonormalBasis, RngStream, UnitVector, inner, is_orthonormal, is_unit_vector
from .polynomial import SpherePolynomial
from .regions import Band, ComplexCap, Complement, Custom, Halfspace, Partition, RealCap, TestRegion
from .tensors import BiSymmetricTensor, SymmetricTensor

__all__ = [
    "Band",
    "BiSymmetricTensor",
    "CellStats",
    "ComplexCap",
    "Complement",
    "CovarianceReport",
    "Custom",
    "FieldTag",
    "Halfspace",
    "ModeComparison",
    "OrthonormalBasis",
    "Partition",
    "RealCap",
    "RngStream",
    "SpherePolynomial",
    "SymmetricTensor",
    "TestRegion",
    "TrialConfig",
    "TrialMode",
    "TrialReport",
    "UnitVector",
    "inner",
    "is_orthonormal",
    "is_unit_vector",
]
