import argparse
from typing import Optional

from pydantic import BaseModel, Field, model_validator

from onb_uniformity.core import config
from onb_uniformity.core.errors import DomainError
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.base import (
    Route,
    add_field_argument,
    add_seed_argument,
    load_params,
    parse_pair,
    seed_stream,
)
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest
from onb_uniformity.services.covariance_lab import cov_pair_mc, standard_test_functions
from onb_uniformity.services.uniformity_harness import parse_region


class CovarianceParams(BaseModel):
    field: FieldTag = FieldTag.REAL
    dim: int = Field(ge=4)
    function: Optional[str] = None
    region: Optional[str] = None
    bases: int = Field(default=100_000, ge=1000)
    columns: str = "0,1"

    @model_validator(mode="after")
    def one_test_function(self):
        if self.function and self.region:
            raise ValueError("give either function or region, not both")
        return self


def default_function(field: FieldTag) -> str:
    return "x1^2-1/d" if field is FieldTag.REAL else "|z1|^2-1/d"


def resolve_test_function(name: str, dim: int, field: FieldTag):
    library = standard_test_functions(dim, field)
    if name not in library:
        raise DomainError(f"unknown test function {name!r}; choose one of {', '.join(library)}")
    return library[name]


def add_arguments(parser: argparse.ArgumentParser):
    add_field_argument(parser)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--function", help="name from the standard test-function library")
    parser.add_argument("--region", help="region indicator instead of a polynomial, e.g. cap:measure=0.3")
    parser.add_argument("--bases", type=int, help="number of independent Haar bases")
    parser.add_argument("--columns", help="pair of basis indices, default 0,1")
    add_seed_argument(parser)


def execute(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(CovarianceParams, spec)
    if params.region:
        phi = parse_region(params.region, params.dim, params.field)
        name = params.region
    else:
        name = params.function or default_function(params.field)
        phi = resolve_test_function(name, params.dim, params.field)

    report = cov_pair_mc(phi, params.dim, params.field, params.bases, seed_stream(spec),
                         columns=parse_pair(params.columns))
    results = manifest.results
    results.float_values[f"Var_u[{name}]"] = report.exact_variance
    results.add_estimate(f"Cov[{name}]", report.covariance, report.std_error)
    results.add_estimate(f"marginal Var[{name}]", report.marginal_variance, report.marginal_variance_stderr)
    if report.exact_covariance is not None:
        results.float_values[f"exact Cov[{name}]"] = report.exact_covariance
    if report.sharpness_ratio is not None:
        results.float_values[f"sharpness[{name}]"] = report.sharpness_ratio

    band = config.SIGMA_BAND
    manifest.add_check(f"|Cov| {name}", "Var/(d-1)", abs(report.covariance),
                       report.bound + band * report.std_error)
    manifest.add_check(f"marginal variance {name}", "Var_u(phi)",
                       abs(report.marginal_variance - report.exact_variance), band * report.marginal_variance_stderr)
    if report.exact_covariance is not None:
        manifest.add_check(f"Cov {name} against exact", "exact covariance",
                           abs(report.covariance - report.exact_covariance), band * report.std_error + 1e-15)
    manifest.records.append(report.model_dump(mode="json"))


ROUTE = Route("covariance", "covariance of a test function at two vectors of one Haar basis", add_arguments,
              execute, stochastic=True)
