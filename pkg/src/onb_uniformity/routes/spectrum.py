import argparse

from pydantic import BaseModel, Field

from onb_uniformity.core import config
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.base import (
    Route,
    add_field_argument,
    add_seed_argument,
    load_params,
    parse_degree,
    parse_pair,
    seed_stream,
)
from onb_uniformity.routes.dto import EigenvalueCheck, ExperimentSpec, RunManifest, rational_string
from onb_uniformity.services.radon_spectrum import eigenvalue_table, spectral_gap, verify_eigenvalue


class SpectrumParams(BaseModel):
    field: FieldTag = FieldTag.REAL
    dim: int = Field(ge=3)
    max_degree: int = Field(default=8, ge=0, le=100)


class RadonVerifyParams(BaseModel):
    field: FieldTag = FieldTag.REAL
    dim: int = Field(ge=3)
    degree: str = "2"
    samples: int = Field(default=100_000, ge=100)
    points: int = Field(default=3, ge=1)


def _label_key(label) -> str:
    return f"tau[{label[0]},{label[1]}]" if isinstance(label, tuple) else f"tau[{label}]"


def add_spectrum_arguments(parser: argparse.ArgumentParser):
    add_field_argument(parser)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--max-degree", dest="max_degree", type=int)


def execute_spectrum(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(SpectrumParams, spec)
    table = eigenvalue_table(params.dim, params.field, params.max_degree)
    for label, tau in table.values.items():
        manifest.results.add_exact(_label_key(label), tau)

    gap = spectral_gap(params.dim, params.field)
    manifest.results.add_exact("spectral_gap", gap)
    largest = table.largest_nonconstant()
    manifest.add_check("largest nonconstant |tau|", "1/(d-1)", float(largest), float(gap),
                       passed=largest <= gap)
    second_label = 2 if params.field is FieldTag.REAL else (1, 1)
    if second_label in table.values:
        second = table[second_label]
        manifest.add_check("second eigenvalue", "-1/(d-1)", float(second), float(-gap), passed=second == -gap)


def add_radon_arguments(parser: argparse.ArgumentParser):
    add_field_argument(parser)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--degree", help="l for the real field, 'l,l2' for the complex field")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--points", type=int)
    add_seed_argument(parser)


def execute_radon(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(RadonVerifyParams, spec)
    label = parse_degree(params.degree) if params.field is FieldTag.REAL else parse_pair(params.degree)
    report = verify_eigenvalue(label, params.dim, params.field, params.samples, seed_stream(spec),
                               n_points=params.points)
    key = _label_key(label)
    manifest.results.add_exact(key, report.expected)
    pooled = report.pooled_ratio
    manifest.results.add_estimate(f"{key} ratio", pooled.value, pooled.stderr)
    for i, ratio in enumerate(report.ratios):
        manifest.results.add_estimate(f"{key} ratio[{i}]", ratio.value, ratio.stderr)
    worst = max(abs(r.value - float(report.expected)) / max(r.stderr, 1e-300) for r in report.ratios)
    manifest.add_check(f"radon eigenvalue {key}", "closed-form tau (sigma units)", worst, config.SIGMA_BAND,
                       passed=report.passed)
    manifest.records.append(EigenvalueCheck(
        label=str(label),
        dim=params.dim,
        field=params.field,
        expected=rational_string(report.expected),
        expected_float=float(report.expected),
        ratios=[r.value for r in report.ratios],
        stderrs=[r.stderr for r in report.ratios],
        passed=report.passed,
    ).model_dump(mode="json"))


SPECTRUM_ROUTE = Route("spectrum", "closed-form eigenvalues of the Radon operator", add_spectrum_arguments,
                       execute_spectrum)
RADON_ROUTE = Route("radon-verify", "Monte Carlo check of one Radon eigenvalue", add_radon_arguments,
                    execute_radon, stochastic=True)
