import argparse
import itertools
import json
from pathlib import Path
from typing import List, Optional

from pydantic import BaseModel, Field, ValidationError

from onb_uniformity.core import config
from onb_uniformity.core.errors import UsageError
from onb_uniformity.core.logger import get_logger
from onb_uniformity.models.experiments import TrialConfig, TrialMode
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.base import Route, add_seed_argument, load_params, seed_stream, thread_count
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest
from onb_uniformity.routes.uniformity import record_comparison, record_trial
from onb_uniformity.services.uniformity_harness import (
    equal_measure_bands,
    parse_region,
    run_mode_comparison,
    run_partition_trial,
    run_uniformity_trial,
)
from onb_uniformity.tracer import trace_operation

logger = get_logger(__name__)

DEFAULT_GRID = "configs/acceptance_grid.json"


class PartitionGrid(BaseModel):
    cells: int = Field(default=4, ge=1)
    dims: List[int] = Field(default_factory=lambda: [1600])
    delta: float = Field(default=0.1, gt=0)
    epsilon: float = Field(default=0.25, gt=0)


class AcceptanceGrid(BaseModel):
    """Pinned experiment grid; every (d, delta, epsilon, cap) combination is one cell"""
    field: FieldTag = FieldTag.REAL
    dims: List[int] = Field(min_length=1)
    deltas: List[float] = Field(min_length=1)
    epsilons: List[float] = Field(min_length=1)
    cap_measures: List[float] = Field(default_factory=lambda: [0.1, 0.3, 0.5])
    n_trials: int = Field(default=200, ge=1)
    compare_modes_dims: List[int] = Field(default_factory=list)
    partition: Optional[PartitionGrid] = None


class AcceptanceParams(BaseModel):
    grid: str = DEFAULT_GRID
    max_dim: Optional[int] = Field(default=None, ge=2)


def load_grid(path: str | Path) -> AcceptanceGrid:
    path = Path(path)
    if not path.is_file():
        raise UsageError(f"acceptance grid not found: {path}")
    try:
        return AcceptanceGrid.model_validate(json.loads(path.read_text(encoding="utf-8")))
    except (json.JSONDecodeError, ValidationError) as exc:
        raise UsageError(f"invalid acceptance grid {path}: {exc}") from exc


def _cell_config(grid: AcceptanceGrid, d: int, delta: float, epsilon: float, spec: ExperimentSpec,
                 mode: TrialMode = TrialMode.RANDOM_BASIS_FIXED_REGION) -> TrialConfig:
    return TrialConfig(dim=d, field=grid.field, delta=delta, epsilon=epsilon, n_trials=grid.n_trials,
                       mode=mode, seed=seed_stream(spec).seed, threads=thread_count(spec))


@trace_operation("acceptance_grid")
def run_grid(grid: AcceptanceGrid, spec: ExperimentSpec, manifest: RunManifest, max_dim: int | None = None):
    dims = [d for d in grid.dims if max_dim is None or d <= max_dim]
    for d, delta, epsilon, measure in itertools.product(dims, grid.deltas, grid.epsilons, grid.cap_measures):
        cfg = _cell_config(grid, d, delta, epsilon, spec)
        region = parse_region(f"cap:measure={measure}", d, grid.field)
        name = f"d={d} delta={delta} eps={epsilon} u={measure}"
        logger.info("acceptance cell %s", name)
        if d in grid.compare_modes_dims:
            record_comparison(manifest, name, run_mode_comparison(cfg, region))
        else:
            record_trial(manifest, name, run_uniformity_trial(cfg, region))

    if grid.partition is None:
        return
    part = grid.partition
    for d in (d for d in part.dims if max_dim is None or d <= max_dim):
        cfg = _cell_config(grid, d, part.delta, part.epsilon, spec)
        report = run_partition_trial(cfg, equal_measure_bands(part.cells, d, grid.field))
        name = f"partition[m={part.cells}] d={d}"
        record_trial(manifest, name, report)
        manifest.add_check(f"{name} union bound", "sum of cell failure rates", report.failure_rate,
                           report.union_bound)


def add_arguments(parser: argparse.ArgumentParser):
    parser.add_argument("--grid", help=f"pinned grid JSON, default {DEFAULT_GRID}")
    parser.add_argument("--max-dim", dest="max_dim", type=int, help="skip grid cells above this dimension")
    add_seed_argument(parser)


def execute(spec: ExperimentSpec, manifest: RunManifest):
    params = load_params(AcceptanceParams, spec)
    run_grid(load_grid(params.grid), spec, manifest, max_dim=params.max_dim)


def execute_config(spec: ExperimentSpec, manifest: RunManifest):
    manifest.records.append(config.show_config())


ROUTE = Route("acceptance", "run every cell of a pinned uniformity grid", add_arguments, execute, stochastic=True)
CONFIG_ROUTE = Route("config", "print the effective configuration", lambda parser: None, execute_config)
