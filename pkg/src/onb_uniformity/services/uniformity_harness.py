"""
Monte Carlo experiments on epsilon-delta uniformity of Haar random bases.

A basis B is checked against a region A through the fraction #(B n A)/d.  A
trial fails when that fraction deviates from u(A) by more than delta; the
harness counts failures over independent trials and reports the failure rate
with a Wilson interval next to epsilon and the Chebyshev bound 2/(delta^2 d).

Trial k always draws from stream index k, so thread scheduling never changes
a report.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence, TypeVar

import numpy as np
from scipy.optimize import bisect

from ..core.errors import ConvergenceError, DomainError, InvalidDimensionError
from ..core.logger import get_logger
from ..models.experiments import CellStats, ModeComparison, TrialConfig, TrialMode, TrialReport
from ..models.field import FieldTag, OrthonormalBasis, RngStream, check_dimension
from ..models.polynomial import SpherePolynomial
from ..models.regions import (
    Band,
    ComplexCap,
    Complement,
    Halfspace,
    Partition,
    RealCap,
    TestRegion,
    real_cap_measure,
)
from ..tracer import trace_operation
from .covariance_lab import function_values, variance_u
from .exact_moments import polynomial_mean
from .rng_geometry import haar_random_onb, haar_random_rotation, sample_uniform_sphere
from .statistics import Estimate, mean_estimate, two_proportion_agree, wilson_interval

logger = get_logger(__name__)

T = TypeVar("T")
BAND_MEASURE_TOL = 1e-9


def region_measure(region: TestRegion) -> float:
    return region.measure()


def estimate_region_measure(region: TestRegion, samples: int, rng: RngStream) -> Estimate:
    """Membership frequency of uniform points."""
    points = sample_uniform_sphere(region.dim, region.field, rng, size=samples)
    return mean_estimate(region.contains(points).astype(float))


def empirical_fraction(basis: OrthonormalBasis, region: TestRegion) -> Fraction:
    """#(B n A) / d."""
    count = int(np.count_nonzero(region.contains(basis.vectors)))
    return Fraction(count, basis.dim)


def chebyshev_failure_bound(delta: float, d: int, variance_ratio: float = 1.0) -> float:
    """min(1, 2 variance_ratio / (delta^2 d))."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    d = check_dimension(d, minimum=2)
    return min(1.0, 2.0 * variance_ratio / (delta * delta * d))


def cap_height_for_measure(measure: float, d: int, field: FieldTag = FieldTag.REAL) -> float:
    """Threshold t (real: x_1 > t, complex: |z_1|^2 > t) of the cap with the given measure."""
    if not 0.0 <= measure <= 1.0:
        raise DomainError(f"measure must lie in [0, 1], got {measure}")
    d = check_dimension(d, minimum=2)
    if FieldTag(field) is FieldTag.COMPLEX:
        return 1.0 - measure ** (1.0 / (d - 1))
    if measure <= 0.0:
        return 1.0
    if measure >= 1.0:
        return -1.0
    return float(bisect(lambda t: real_cap_measure(t, d) - measure, -1.0, 1.0, xtol=1e-15, rtol=1e-15,
                        maxiter=200))


def parse_region(text: str, d: int, field: FieldTag = FieldTag.REAL) -> TestRegion:
    """
    Build a region from its command-line form:

        cap:measure=0.3   cap:height=0.2   ccap:level=0.5
        band:low=-0.1,high=0.2   halfspace   not:<region>
    """
    field = FieldTag(field)
    text = text.strip()
    kind, _, rest = text.partition(":")
    if kind == "not":
        return Complement(parse_region(rest, d, field))
    if kind == "halfspace":
        return Halfspace(d, field)
    try:
        params = {key.strip(): float(value) for key, value in
                  (item.split("=", 1) for item in rest.split(",") if item.strip())}
    except ValueError as exc:
        raise DomainError(f"cannot parse region parameters in {text!r}") from exc

    if kind == "cap" and "measure" in params:
        threshold = cap_height_for_measure(params["measure"], d, field)
        return RealCap(d, threshold) if field is FieldTag.REAL else ComplexCap(d, threshold)
    if kind == "cap" and "height" in params:
        if field is not FieldTag.REAL:
            raise DomainError("cap:height is a real-field region; use ccap:level for C^d")
        return RealCap(d, params["height"])
    if kind == "ccap" and "level" in params:
        return ComplexCap(d, params["level"])
    if kind == "band" and {"low", "high"} <= params.keys():
        return Band(d, params["low"], params["high"], field)
    raise DomainError(f"unknown region {text!r}")


def describe_region(region: TestRegion) -> str:
    if isinstance(region, RealCap):
        return f"cap:height={region.height:.12g}"
    if isinstance(region, ComplexCap):
        return f"ccap:level={region.level:.12g}"
    if isinstance(region, Band):
        return f"band:low={region.low:.12g},high={region.high:.12g}"
    if isinstance(region, Halfspace):
        return "halfspace"
    if isinstance(region, Complement):
        return f"not:{describe_region(region.inner)}"
    return type(region).__name__.lower()


# trial execution


def _run_trials(n_trials: int, worker: Callable[[int], T], threads: int) -> list[T]:
    if threads <= 1:
        return [worker(k) for k in range(n_trials)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, range(n_trials)))


def _trial_stream(cfg: TrialConfig, k: int) -> RngStream:
    stream = RngStream(cfg.seed, k)
    # rotation mode reads its own substream, independent of random-basis mode
    if cfg.mode is TrialMode.FIXED_BASIS_RANDOM_ROTATION:
        return stream.substream(1)
    return stream


def _trial_vectors(cfg: TrialConfig, k: int) -> np.ndarray:
    """Rows are the vectors b_j of trial k in random-basis mode."""
    return haar_random_onb(cfg.dim, cfg.field, _trial_stream(cfg, k)).vectors


def _fractions_for(cfg: TrialConfig, regions: Sequence[TestRegion], k: int) -> np.ndarray:
    if cfg.mode is TrialMode.FIXED_BASIS_RANDOM_ROTATION:
        rotation = haar_random_rotation(cfg.dim, cfg.field, _trial_stream(cfg, k))
        standard = np.eye(cfg.dim, dtype=cfg.field.dtype)
        counts = [np.count_nonzero(region.rotated(rotation).contains(standard)) for region in regions]
    else:
        vectors = _trial_vectors(cfg, k)
        counts = [np.count_nonzero(region.contains(vectors)) for region in regions]
    return np.asarray(counts, dtype=float) / cfg.dim


def _warn_hypothesis(cfg: TrialConfig, factor: float):
    if not cfg.hypothesis_holds(factor):
        logger.warning("d = %d is outside the hypothesis d >= 4, d >= %g/(delta^2 epsilon); "
                       "the epsilon guarantee does not apply", cfg.dim, factor)


def _summarize(cfg: TrialConfig, region: str, measure: float, deviations: np.ndarray, statistics: np.ndarray,
               threshold: float, chebyshev: float, factor: float) -> TrialReport:
    failures = int(np.count_nonzero(deviations > threshold))
    mean = mean_estimate(statistics)
    return TrialReport(
        dim=cfg.dim,
        field=cfg.field,
        mode=cfg.mode,
        region=region,
        measure=measure,
        delta=cfg.delta,
        epsilon=cfg.epsilon,
        failure_count=failures,
        n_trials=cfg.n_trials,
        failure_rate=failures / cfg.n_trials,
        wilson_95_interval=wilson_interval(failures, cfg.n_trials),
        chebyshev_bound=chebyshev,
        hypothesis_met=cfg.hypothesis_holds(factor),
        mean_statistic=mean.value,
        mean_statistic_stderr=mean.stderr if math.isfinite(mean.stderr) else 0.0,
        threshold=threshold,
    )


@trace_operation("run_uniformity_trial")
def run_uniformity_trial(cfg: TrialConfig, region: TestRegion) -> TrialReport:
    """Failure iff |#(B n A)/d - u(A)| > delta, counted over cfg.n_trials bases."""
    if region.dim != cfg.dim:
        raise InvalidDimensionError(f"region in dimension {region.dim}, trial in dimension {cfg.dim}")
    _warn_hypothesis(cfg, 1.0)
    measure = region.measure()
    fractions = np.array(_run_trials(cfg.n_trials, lambda k: _fractions_for(cfg, [region], k)[0], cfg.threads))
    chebyshev = chebyshev_failure_bound(cfg.delta, cfg.dim, measure * (1.0 - measure))
    report = _summarize(cfg, describe_region(region), measure, np.abs(fractions - measure), fractions,
                        cfg.delta, chebyshev, 1.0)
    logger.info("uniformity d=%d mode=%s: %d/%d failures", cfg.dim, cfg.mode.value, report.failure_count,
                cfg.n_trials)
    return report


@trace_operation("run_mode_comparison")
def run_mode_comparison(cfg: TrialConfig, region: TestRegion) -> ModeComparison:
    """Random basis against fixed A versus standard basis against R(A); the failure rates must agree."""
    first = run_uniformity_trial(cfg.model_copy(update={"mode": TrialMode.RANDOM_BASIS_FIXED_REGION}), region)
    second = run_uniformity_trial(cfg.model_copy(update={"mode": TrialMode.FIXED_BASIS_RANDOM_ROTATION}), region)
    agree = two_proportion_agree(first.failure_count, first.n_trials, second.failure_count, second.n_trials)
    return ModeComparison(random_basis=first, random_rotation=second, agree=agree)


@trace_operation("run_partition_trial")
def run_partition_trial(cfg: TrialConfig, parts: Partition) -> TrialReport:
    """Failure iff some cell of the partition deviates from its measure by more than delta."""
    parts.check()
    m = len(parts)
    _warn_hypothesis(cfg, float(m))
    measures = np.asarray(parts.measures())
    fractions = np.array(_run_trials(cfg.n_trials, lambda k: _fractions_for(cfg, parts.regions, k), cfg.threads))
    cell_deviations = np.abs(fractions - measures)
    cell_failures = cell_deviations > cfg.delta

    cells = []
    for index, region in enumerate(parts.regions):
        mean = mean_estimate(fractions[:, index])
        cells.append(CellStats(
            index=index,
            region=describe_region(region),
            measure=float(measures[index]),
            failure_count=int(cell_failures[:, index].sum()),
            failure_rate=float(cell_failures[:, index].mean()),
            mean_fraction=mean.value,
            mean_fraction_stderr=mean.stderr if math.isfinite(mean.stderr) else 0.0,
        ))
    chebyshev = min(1.0, sum(chebyshev_failure_bound(cfg.delta, cfg.dim, u * (1.0 - u)) for u in measures))
    worst = cell_deviations.max(axis=1)
    report = _summarize(cfg, f"partition:m={m}", 1.0, worst, worst,
                        cfg.delta, chebyshev, float(m))
    return report.model_copy(update={
        "cells": cells,
        "union_bound": min(1.0, sum(cell.failure_rate for cell in cells)),
    })


@trace_operation("run_test_function_trial")
def run_test_function_trial(cfg: TrialConfig, phi: SpherePolynomial) -> TrialReport:
    """Failure iff |d^-1 sum_j phi(b_j) - E_u phi| > delta sqrt(Var_u phi)."""
    if phi.dim != cfg.dim or phi.field is not cfg.field:
        raise InvalidDimensionError("test function and trial configuration disagree on the sphere")
    variance = float(variance_u(phi))
    if variance <= 0:
        raise DomainError("test function has zero variance; the deviation threshold delta*sqrt(Var) is zero")
    _warn_hypothesis(cfg, 2.0)
    mean = float(np.real(complex(polynomial_mean(phi))))

    def average(k: int) -> float:
        if cfg.mode is TrialMode.FIXED_BASIS_RANDOM_ROTATION:
            # phi(R e_j) is phi at the j-th column of R
            vectors = haar_random_rotation(cfg.dim, cfg.field, _trial_stream(cfg, k)).T
        else:
            vectors = _trial_vectors(cfg, k)
        return float(function_values(phi, vectors).mean())

    averages = np.array(_run_trials(cfg.n_trials, average, cfg.threads))
    threshold = cfg.delta * math.sqrt(variance)
    return _summarize(cfg, repr(phi), mean, np.abs(averages - mean), averages, threshold,
                      chebyshev_failure_bound(cfg.delta, cfg.dim), 2.0)


@trace_operation("equal_measure_bands")
def equal_measure_bands(m: int, d: int, field: FieldTag = FieldTag.REAL) -> Partition:
    """m latitude bands around e_1, each of measure 1/m."""
    if m < 1:
        raise DomainError(f"a partition needs m >= 1 cells, got {m}")
    field = FieldTag(field)
    d = check_dimension(d)
    if m > 1 and d < 2:
        raise ConvergenceError("S^0 has no latitude bands")
    thresholds = [-math.inf]
    for k in range(1, m):
        thresholds.append(cap_height_for_measure(1.0 - k / m, d, field))
    thresholds.append(math.inf)
    if any(b <= a for a, b in zip(thresholds, thresholds[1:])):
        raise ConvergenceError(f"{m} bands cannot be resolved in dimension {d}")

    partition = Partition([Band(d, low, high, field) for low, high in zip(thresholds, thresholds[1:])])
    for band, measure in zip(partition.regions, partition.measures()):
        if abs(measure - 1.0 / m) > BAND_MEASURE_TOL:
            raise ConvergenceError(f"band ({band.low:.6g}, {band.high:.6g}] has measure {measure}, not 1/{m}")
    return partition
