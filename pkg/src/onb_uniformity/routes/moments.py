import argparse
from typing import List, Optional

from pydantic import BaseModel, Field

from onb_uniformity.core import config
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.base import Route, add_field_argument, load_params
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest
from onb_uniformity.services.exact_moments import (
    alpha,
    alpha_float,
    alpha_via_spherical_coordinates,
    beta,
    beta_float,
    beta_via_double_factorials,
    beta_via_real_sphere,
    complex_monomial_moment,
    double_factorial,
    gaussianization_moment_oracle,
    real_monomial_moment,
    sphere_surface_area,
    sphere_surface_area_gamma,
    verify_hypergeometric_identity,
)
from onb_uniformity.tracer import trace_operation


class MomentsParams(BaseModel):
    alpha: Optional[List[int]] = Field(default=None, min_length=2, max_length=2)
    beta: Optional[List[int]] = Field(default=None, min_length=2, max_length=2)
    monomial: Optional[List[int]] = None
    field: FieldTag = FieldTag.REAL
    double_factorial: Optional[int] = None
    surface_area: Optional[int] = None
    hypergeometric: Optional[int] = Field(default=None, ge=0)


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--alpha", type=int, nargs=2, metavar=("L", "D"), help="alpha_{L,D}")
    parser.add_argument("--beta", type=int, nargs=2, metavar=("L", "D"), help="beta_{L,D}")
    parser.add_argument("--monomial", type=int, nargs="+", metavar="N", help="sphere moment of a monomial")
    add_field_argument(parser)
    parser.add_argument("--double-factorial", dest="double_factorial", type=int, metavar="N")
    parser.add_argument("--surface-area", dest="surface_area", type=int, metavar="N")
    parser.add_argument("--hypergeometric", type=int, metavar="L", help="check the binomial sum identity")


@trace_operation("moments")
def execute(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(MomentsParams, spec)
    results = manifest.results

    if params.alpha:
        ell, d = params.alpha
        key = f"alpha[{ell},{d}]"
        if d > config.FAST_PATH_DIM:
            results.float_values[key] = alpha_float(ell, d)
        else:
            value = alpha(ell, d)
            results.add_exact(key, value)
            if d >= 3:
                oracle = alpha_via_spherical_coordinates(ell, d)
                manifest.add_check(f"{key} spherical coordinates", "alpha closed form",
                                   float(abs(value - oracle)), 0.0, passed=value == oracle)

    if params.beta:
        ell, d = params.beta
        key = f"beta[{ell},{d}]"
        if d > config.FAST_PATH_DIM:
            results.float_values[key] = beta_float(ell, d)
        else:
            value = beta(ell, d)
            results.add_exact(key, value)
            for route, oracle in (("double factorials", beta_via_double_factorials(ell, d)),
                                  ("real sphere", beta_via_real_sphere(ell, d))):
                manifest.add_check(f"{key} {route}", "beta closed form", float(abs(value - oracle)), 0.0,
                                   passed=value == oracle)

    if params.monomial:
        exponents = tuple(params.monomial)
        key = f"moment[{params.field.value}:{','.join(map(str, exponents))}]"
        if params.field is FieldTag.REAL:
            value = real_monomial_moment(exponents)
        else:
            value = complex_monomial_moment(exponents)
        oracle = gaussianization_moment_oracle(exponents, params.field)
        results.add_exact(key, value)
        manifest.add_check(f"{key} gaussianization", "monomial moment formula", float(abs(value - oracle)), 0.0,
                           passed=value == oracle)

    if params.double_factorial is not None:
        results.add_exact(f"double_factorial[{params.double_factorial}]", double_factorial(params.double_factorial))

    if params.surface_area is not None:
        n = params.surface_area
        area = sphere_surface_area(n)
        key = f"surface_area[{n}]"
        results.add_exact(f"{key}/pi^{area.exact.pi_power}", area.exact.coefficient)
        results.float_values[key] = area.value
        reference = sphere_surface_area_gamma(n)
        manifest.add_check(f"{key} gamma formula", "relative error 1e-12", abs(area.value - reference) / reference,
                           1e-12)

    if params.hypergeometric is not None:
        holds = verify_hypergeometric_identity(params.hypergeometric)
        manifest.add_check(f"hypergeometric[{params.hypergeometric}]", "4^l / binom(2l, l)",
                           0.0 if holds else 1.0, 0.0, passed=holds)


ROUTE = Route("moments", "exact sphere moments, alpha, beta and identities", add_arguments, execute)
