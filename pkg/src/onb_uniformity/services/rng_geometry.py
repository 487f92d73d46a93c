"""
Seeded sampling of uniform points on spheres, Haar rotations and Haar-random
orthonormal bases in R^d and C^d.

Haar matrices come from the QR decomposition of an i.i.d. Gaussian matrix with
the phase of each R-diagonal entry absorbed into Q; without that correction
the QR factor is not Haar distributed.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..core import config
from ..core.errors import DomainError, EmptyOrthocomplementError
from ..models.field import FieldTag, OrthonormalBasis, RngStream, check_dimension, inner, is_unit_vector
from .statistics import Estimate, mean_estimate, two_sample_agree


class OnbMethod(str, Enum):
    QR_GAUSSIAN = "qr-gaussian"
    SEQUENTIAL = "sequential"


def gaussian(gen: np.random.Generator, shape, field: FieldTag) -> np.ndarray:
    """Standard Gaussian entries; complex entries have independent real/imaginary parts."""
    if FieldTag(field) is FieldTag.REAL:
        return gen.standard_normal(shape)
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / np.sqrt(2.0)


def _normalize_rows(points: np.ndarray) -> np.ndarray:
    return points / np.linalg.norm(points, axis=-1, keepdims=True)


def sample_uniform_sphere(d: int, field: FieldTag, rng: RngStream, size: int | None = None) -> np.ndarray:
    """
    Uniform point(s) on S(R^d) or S(C^d).

    Returns shape (d,) for size=None, otherwise (size, d).
    """
    d = check_dimension(d)
    gen = rng.generator()
    shape = (d,) if size is None else (size, d)
    return _normalize_rows(gaussian(gen, shape, field))


def _project_out(points: np.ndarray, x: np.ndarray) -> np.ndarray:
    return points - np.asarray(inner(x, points))[..., np.newaxis] * x


def sample_uniform_on_orthocomplement(x: np.ndarray, rng: RngStream, size: int | None = None) -> np.ndarray:
    """
    Uniform point(s) on the unit sphere of x^perp.

    A stack of vectors x of shape (n, d) yields one point per row.
    """
    x = np.asarray(x)
    d = check_dimension(x.shape[-1])
    if d == 1:
        raise EmptyOrthocomplementError("x^perp is {0} in dimension 1")
    if not is_unit_vector(x):
        raise DomainError("orthocomplement sampling needs unit vectors x")
    field = FieldTag.COMPLEX if np.iscomplexobj(x) else FieldTag.REAL
    gen = rng.generator()
    if x.ndim == 2:
        shape = x.shape
    else:
        shape = (d,) if size is None else (size, d)
    y = _normalize_rows(_project_out(gaussian(gen, shape, field), x))
    # second pass removes the rounding residue of the first projection
    return _normalize_rows(_project_out(y, x))


def _phase_corrected_qr(matrices: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(matrices)
    diag = np.diagonal(r, axis1=-2, axis2=-1)
    phase = diag / np.abs(diag)
    return q * phase[..., np.newaxis, :]


def haar_random_rotation(d: int, field: FieldTag, rng: RngStream) -> np.ndarray:
    """Haar-distributed element of O(d) (both orientations) or U(d)."""
    d = check_dimension(d)
    return _phase_corrected_qr(gaussian(rng.generator(), (d, d), field))


def _sequential_columns(d: int, field: FieldTag, gen: np.random.Generator, count: int,
                        n_columns: int) -> np.ndarray:
    """b_1 uniform, then each b_j uniform on the sphere of span(b_1..b_{j-1})^perp; shape (count, d, k)."""
    basis = np.zeros((count, d, n_columns), dtype=FieldTag(field).dtype)
    for j in range(n_columns):
        g = gaussian(gen, (count, d), field)
        previous = basis[:, :, :j]
        for _ in range(2):
            coefficients = np.einsum("nij,ni->nj", previous.conj(), g)
            g = g - np.einsum("nij,nj->ni", previous, coefficients)
        basis[:, :, j] = _normalize_rows(g)
    return basis


def haar_random_onb(d: int, field: FieldTag, rng: RngStream,
                    method: OnbMethod = OnbMethod.QR_GAUSSIAN) -> OrthonormalBasis:
    d = check_dimension(d)
    field = FieldTag(field)
    if OnbMethod(method) is OnbMethod.SEQUENTIAL:
        matrix = _sequential_columns(d, field, rng.generator(), 1, d)[0]
    else:
        matrix = haar_random_rotation(d, field, rng)
    return OrthonormalBasis(matrix, field)


def haar_random_onb_columns(d: int, field: FieldTag, rng: RngStream, n_draws: int,
                            n_columns: int = 2, block_size: int | None = None,
                            method: OnbMethod = OnbMethod.QR_GAUSSIAN) -> np.ndarray:
    """
    First n_columns vectors of n_draws independent Haar bases, shape (n_draws, d, k).

    Block j of the draws uses rng.substream(j), so the output does not depend on
    how callers split the work.
    """
    d = check_dimension(d)
    if not 1 <= n_columns <= d:
        raise ValueError(f"n_columns must lie in [1, {d}], got {n_columns}")
    sequential = OnbMethod(method) is OnbMethod.SEQUENTIAL
    block_size = block_size or config.BLOCK_SIZE
    blocks = []
    for j, start in enumerate(range(0, n_draws, block_size)):
        count = min(block_size, n_draws - start)
        gen = rng.substream(j).generator()
        if sequential:
            blocks.append(_sequential_columns(d, field, gen, count, n_columns))
        else:
            blocks.append(_phase_corrected_qr(gaussian(gen, (count, d, n_columns), field)))
    if not blocks:
        return np.zeros((0, d, n_columns), dtype=FieldTag(field).dtype)
    return np.concatenate(blocks, axis=0)


def onb_moment_statistics(columns: np.ndarray) -> dict[str, np.ndarray]:
    """
    Per-draw monomials of degree <= 4 for columns of shape (n, d, 2).

    x = b_1 and y = b_2; x1, x2, y1 are their first coordinates.
    """
    x1, x2, y1 = columns[:, 0, 0], columns[:, 1, 0], columns[:, 0, 1]
    return {
        "re(x1)": np.real(x1),
        "|x1|^2": np.abs(x1) ** 2,
        "re(x1)^3": np.real(x1) ** 3,
        "re(x1 x2)": np.real(x1 * x2),
        "|x1|^4": np.abs(x1) ** 4,
        "|x1|^2 |y1|^2": np.abs(x1) ** 2 * np.abs(y1) ** 2,
    }


@dataclass(frozen=True)
class SamplerComparison:
    qr: dict[str, Estimate]
    sequential: dict[str, Estimate]
    agree: dict[str, bool]

    @property
    def all_agree(self) -> bool:
        return all(self.agree.values())


def compare_onb_samplers(d: int, field: FieldTag, n_draws: int, rng: RngStream,
                         sigma: float | None = None) -> SamplerComparison:
    """Two-sample comparison of the QR and the sequential sampler on low-degree moments of b_1, b_2."""
    d = check_dimension(d, minimum=2)
    samples = {
        method: onb_moment_statistics(haar_random_onb_columns(d, field, rng.substream(index), n_draws,
                                                              n_columns=2, method=method))
        for index, method in enumerate(OnbMethod)
    }
    qr = {name: mean_estimate(values) for name, values in samples[OnbMethod.QR_GAUSSIAN].items()}
    sequential = {name: mean_estimate(values) for name, values in samples[OnbMethod.SEQUENTIAL].items()}
    agree = {name: two_sample_agree(qr[name], sequential[name], sigma) for name in qr}
    return SamplerComparison(qr, sequential, agree)


@dataclass(frozen=True)
class InnerProductMoments:
    mean: Estimate
    mean_imag: Estimate | None
    second_moment: Estimate


def inner_product_moments(d: int, field: FieldTag, n_pairs: int, rng: RngStream) -> InnerProductMoments:
    """<x, y> and |<x, y>|^2 for independent uniform pairs; expected 0 and 1/d."""
    x = sample_uniform_sphere(d, field, rng.substream(0), size=n_pairs)
    y = sample_uniform_sphere(d, field, rng.substream(1), size=n_pairs)
    products = inner(x, y)
    mean_imag = mean_estimate(np.imag(products)) if FieldTag(field).is_complex else None
    return InnerProductMoments(
        mean=mean_estimate(np.real(products)),
        mean_imag=mean_imag,
        second_moment=mean_estimate(np.abs(products) ** 2),
    )
