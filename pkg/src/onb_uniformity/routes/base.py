import argparse
from dataclasses import dataclass
from typing import Callable, Type, TypeVar

from pydantic import BaseModel

from onb_uniformity.core import config
from onb_uniformity.core.errors import DomainError, UsageError
from onb_uniformity.models.field import FieldTag, RngStream
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest

P = TypeVar("P", bound=BaseModel)


@dataclass(frozen=True)
class Route:
    """One CLI subcommand: its flags and the handler that fills a RunManifest"""
    name: str
    help: str
    add_arguments: Callable[[argparse.ArgumentParser], None]
    execute: Callable[[ExperimentSpec, RunManifest], None]
    stochastic: bool = False


def load_params(model: Type[P], spec: ExperimentSpec) -> P:
    """Validate the subcommand parameters; pydantic errors name the offending field."""
    return model.model_validate(spec.parameters)


def seed_stream(spec: ExperimentSpec) -> RngStream:
    if spec.seed is None:
        raise UsageError(f"--seed is required for the stochastic subcommand '{spec.subcommand}'")
    return RngStream(spec.seed)


def thread_count(spec: ExperimentSpec) -> int:
    return spec.threads or config.THREADS


def add_field_argument(parser: argparse.ArgumentParser):
    parser.add_argument("--field", choices=[f.value for f in FieldTag], default=None,
                        help="real (O(d)) or complex (U(d)); default real")


def add_seed_argument(parser: argparse.ArgumentParser):
    parser.add_argument("--seed", type=int, default=None, help="64-bit seed (mandatory)")


def parse_pair(text: str) -> tuple[int, int]:
    """'1,1' -> (1, 1)."""
    try:
        first, second = (int(part) for part in text.split(","))
    except ValueError as exc:
        raise DomainError(f"expected two comma-separated integers, got {text!r}") from exc
    return first, second


def parse_degree(text: str) -> int:
    """'2' -> 2."""
    try:
        return int(text)
    except ValueError as exc:
        raise DomainError(f"expected an integer degree, got {text!r}") from exc


def bound_slack(probability: float, trials: int) -> float:
    """Sigma-band slack of a binomial proportion estimated from `trials` draws."""
    return config.SIGMA_BAND * (max(probability * (1.0 - probability), 0.0) / trials) ** 0.5
