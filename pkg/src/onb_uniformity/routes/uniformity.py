import argparse
from typing import Literal, Optional

from pydantic import BaseModel, Field

from onb_uniformity.core import config
from onb_uniformity.models.experiments import ModeComparison, TrialConfig, TrialMode, TrialReport
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.base import (
    Route,
    add_field_argument,
    add_seed_argument,
    bound_slack,
    load_params,
    seed_stream,
    thread_count,
)
from onb_uniformity.routes.covariance import default_function, resolve_test_function
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest
from onb_uniformity.services.uniformity_harness import (
    equal_measure_bands,
    parse_region,
    run_mode_comparison,
    run_partition_trial,
    run_test_function_trial,
    run_uniformity_trial,
)


class TrialParams(BaseModel):
    field: FieldTag = FieldTag.REAL
    dim: int = Field(ge=2)
    delta: float = Field(gt=0)
    epsilon: float = Field(gt=0)
    trials: int = Field(default=200, ge=1)
    mode: Literal["random-basis", "random-rotation", "both"] = "random-basis"


class UniformityParams(TrialParams):
    region: str = "cap:measure=0.3"


class PartitionParams(TrialParams):
    cells: int = Field(default=4, ge=1)


class TestFunctionParams(TrialParams):
    __test__ = False

    function: Optional[str] = None


def _trial_config(params: TrialParams, spec: ExperimentSpec, mode: str) -> TrialConfig:
    return TrialConfig(
        dim=params.dim,
        field=params.field,
        delta=params.delta,
        epsilon=params.epsilon,
        n_trials=params.trials,
        mode=TrialMode(mode),
        seed=seed_stream(spec).seed,
        threads=thread_count(spec),
    )


def record_trial(manifest: RunManifest, name: str, report: TrialReport, gate_on_epsilon: bool = True):
    """Failure rate against epsilon (only inside the hypothesis) and against the Chebyshev bound."""
    results = manifest.results
    results.add_estimate(f"{name} failure_rate", report.failure_rate,
                         (report.failure_rate * (1 - report.failure_rate) / report.n_trials) ** 0.5)
    results.float_values[f"{name} wilson_upper"] = report.wilson_95_interval[1]
    results.float_values[f"{name} chebyshev_bound"] = report.chebyshev_bound
    results.add_estimate(f"{name} mean_statistic", report.mean_statistic, report.mean_statistic_stderr)
    if report.hypothesis_met and gate_on_epsilon:
        manifest.add_check(f"{name} wilson upper", "epsilon", report.wilson_95_interval[1], report.epsilon)
    manifest.add_check(f"{name} failure rate", "Chebyshev 2Var/(delta^2 d)", report.failure_rate,
                       report.chebyshev_bound + bound_slack(report.chebyshev_bound, report.n_trials))
    manifest.records.append(report.model_dump(mode="json"))


def record_comparison(manifest: RunManifest, name: str, comparison: ModeComparison):
    record_trial(manifest, f"{name} random-basis", comparison.random_basis)
    record_trial(manifest, f"{name} random-rotation", comparison.random_rotation)
    manifest.add_check(f"{name} mode agreement", "pooled two-proportion band", comparison.rate_difference,
                       comparison.agreement_band, passed=comparison.agree)


def add_trial_arguments(parser: argparse.ArgumentParser):
    add_field_argument(parser)
    parser.add_argument("--dim", type=int)
    parser.add_argument("--delta", type=float)
    parser.add_argument("--epsilon", type=float)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--mode", choices=["random-basis", "random-rotation", "both"])
    add_seed_argument(parser)


def add_uniformity_arguments(parser: argparse.ArgumentParser):
    add_trial_arguments(parser)
    parser.add_argument("--region", help="cap:measure=0.3, cap:height=0.2, ccap:level=0.5, band:low=..,high=.., "
                                         "halfspace or not:<region>")


def execute_uniformity(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(UniformityParams, spec)
    region = parse_region(params.region, params.dim, params.field)
    manifest.results.float_values["u(A)"] = region.measure()
    if params.mode == "both":
        comparison = run_mode_comparison(_trial_config(params, spec, "random-basis"), region)
        record_comparison(manifest, params.mode, comparison)
        return
    report = run_uniformity_trial(_trial_config(params, spec, params.mode), region)
    record_trial(manifest, params.mode, report)


def add_partition_arguments(parser: argparse.ArgumentParser):
    add_trial_arguments(parser)
    parser.add_argument("--cells", type=int, help="number m of equal-measure latitude bands")


def execute_partition(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(PartitionParams, spec)
    parts = equal_measure_bands(params.cells, params.dim, params.field)
    mode = "random-basis" if params.mode == "both" else params.mode
    report = run_partition_trial(_trial_config(params, spec, mode), parts)
    record_trial(manifest, f"partition[m={params.cells}]", report)
    manifest.add_check("union bound", "sum of cell failure rates", report.failure_rate, report.union_bound)


def add_testfn_arguments(parser: argparse.ArgumentParser):
    add_trial_arguments(parser)
    parser.add_argument("--function", help="name from the standard test-function library")


def execute_testfn(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(TestFunctionParams, spec)
    name = params.function or default_function(params.field)
    phi = resolve_test_function(name, params.dim, params.field)
    mode = "random-basis" if params.mode == "both" else params.mode
    report = run_test_function_trial(_trial_config(params, spec, mode), phi)
    record_trial(manifest, f"testfn[{name}]", report)
    manifest.add_check(f"testfn[{name}] mean", "E_u(phi)", abs(report.mean_statistic - report.measure),
                       config.SIGMA_BAND * report.mean_statistic_stderr + 1e-12)


UNIFORMITY_ROUTE = Route("uniformity", "failure rate of Haar bases against one region", add_uniformity_arguments,
                         execute_uniformity, stochastic=True)
PARTITION_ROUTE = Route("partition", "failure rate against m equal-measure bands", add_partition_arguments,
                        execute_partition, stochastic=True)
TESTFN_ROUTE = Route("testfn", "failure rate of basis averages of a test function", add_testfn_arguments,
                     execute_testfn, stochastic=True)
