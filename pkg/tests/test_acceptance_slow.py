import pytest

from onb_uniformity.models.experiments import TrialConfig
from onb_uniformity.models.field import FieldTag
from onb_uniformity.routes.acceptance import load_grid
from onb_uniformity.services.uniformity_harness import (
    equal_measure_bands,
    parse_region,
    run_mode_comparison,
    run_partition_trial,
    run_uniformity_trial,
)

pytestmark = pytest.mark.slow

SEED = 20240601


def test_pinned_grid_loads(configs_dir):
    grid = load_grid(configs_dir / "acceptance_grid.json")
    assert max(grid.dims) == 1600
    assert grid.partition.cells == 4


@pytest.mark.parametrize("delta, epsilon", [(0.05, 0.25), (0.1, 0.1), (0.1, 0.25)])
@pytest.mark.parametrize("measure", [0.1, 0.3, 0.5])
def test_failure_rate_within_epsilon_at_d1600(delta, epsilon, measure):
    d = 1600
    cfg = TrialConfig(dim=d, delta=delta, epsilon=epsilon, n_trials=200, seed=SEED, threads=4)
    report = run_uniformity_trial(cfg, parse_region(f"cap:measure={measure}", d))
    assert report.within_chebyshev
    if cfg.hypothesis_met:
        assert report.within_epsilon


def test_modes_agree_at_d400():
    d = 400
    cfg = TrialConfig(dim=d, delta=0.05, epsilon=0.25, n_trials=200, seed=SEED, threads=4)
    assert run_mode_comparison(cfg, parse_region("cap:measure=0.3", d)).agree


def test_partition_of_four_bands_at_d1600():
    d = 1600
    cfg = TrialConfig(dim=d, field=FieldTag.REAL, delta=0.1, epsilon=0.25, n_trials=200, seed=SEED, threads=4)
    report = run_partition_trial(cfg, equal_measure_bands(4, d))
    assert report.hypothesis_met
    assert report.failure_rate <= report.union_bound
    assert report.within_epsilon
