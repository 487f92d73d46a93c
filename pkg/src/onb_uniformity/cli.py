import argparse
import json
import sys
import time
from pathlib import Path
from typing import Sequence

from pydantic import ValidationError

from onb_uniformity import __version__
from onb_uniformity.core.errors import OnbLabError, UsageError
from onb_uniformity.core.logger import configure_logging, get_logger
from onb_uniformity.report import emit_report, render_report
from onb_uniformity.routes import acceptance, covariance, moments, spectrum, uniformity
from onb_uniformity.routes.base import Route, seed_stream
from onb_uniformity.routes.dto import ExperimentSpec, RunManifest
from onb_uniformity.tracer import get_operation_stats, reset_traces

logger = get_logger(__name__)

ROUTES: list[Route] = [
    moments.ROUTE,
    spectrum.SPECTRUM_ROUTE,
    spectrum.RADON_ROUTE,
    covariance.ROUTE,
    uniformity.UNIFORMITY_ROUTE,
    uniformity.PARTITION_ROUTE,
    uniformity.TESTFN_ROUTE,
    acceptance.ROUTE,
    acceptance.CONFIG_ROUTE,
]
ROUTES_BY_NAME = {route.name: route for route in ROUTES}

GLOBAL_KEYS = {"subcommand", "config", "threads", "format", "output", "log_level", "seed"}

EPILOG = """
Examples:
  %(prog)s moments --alpha 2 10
  %(prog)s spectrum --field real --dim 4 --max-degree 8
  %(prog)s uniformity --dim 400 --delta 0.1 --epsilon 0.25 --region cap:measure=0.3 --trials 200 --seed 7
  %(prog)s --config configs/uniformity_d400.json --output reports/d400.json
"""


class LabArgumentParser(argparse.ArgumentParser):
    """argparse that raises UsageError instead of exiting, so the caller decides the exit code"""

    def error(self, message):
        raise UsageError(message, self.format_help())


def _global_flags() -> argparse.ArgumentParser:
    # SUPPRESS keeps a flag given before the subcommand from being reset by the subparser default
    flags = LabArgumentParser(add_help=False)
    flags.add_argument("--config", default=argparse.SUPPRESS, help="ExperimentSpec JSON file")
    flags.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker threads for trials")
    flags.add_argument("--format", choices=["json", "csv"], default=argparse.SUPPRESS)
    flags.add_argument("--output", "-o", default=argparse.SUPPRESS, help="write the report to this path")
    flags.add_argument("--log-level", dest="log_level", default=argparse.SUPPRESS,
                       choices=["debug", "info", "warning", "error"])
    return flags


def build_parser() -> LabArgumentParser:
    flags = _global_flags()
    parser = LabArgumentParser(
        prog="onb-lab",
        description="Exact sphere moments, Radon spectrum and uniformity experiments for random orthonormal bases",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=EPILOG,
        parents=[flags],
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", parser_class=LabArgumentParser)
    for route in ROUTES:
        sub = subparsers.add_parser(route.name, help=route.help, description=route.help, parents=[flags])
        route.add_arguments(sub)
    return parser


def _load_spec_file(path: str) -> ExperimentSpec:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read --config {path}: {exc}") from exc
    return ExperimentSpec.model_validate_json(text)


def build_spec(args: argparse.Namespace) -> ExperimentSpec:
    """ExperimentSpec from --config (if any) overlaid with the flags given on the command line."""
    flags = vars(args)
    base = _load_spec_file(flags["config"]).model_dump() if "config" in flags else {}
    if flags.get("subcommand"):
        if base.get("subcommand") not in (None, flags["subcommand"]):
            base["parameters"] = {}
        base["subcommand"] = flags["subcommand"]
    if not base.get("subcommand"):
        raise UsageError("a subcommand (or --config with one) is required", build_parser().format_help())

    parameters = dict(base.get("parameters") or {})
    parameters.update({key: value for key, value in flags.items() if key not in GLOBAL_KEYS and value is not None})
    base["parameters"] = parameters
    for key, target in (("seed", "seed"), ("threads", "threads"), ("format", "format"), ("output", "output_path")):
        if flags.get(key) is not None:
            base[target] = flags[key]
    return ExperimentSpec.model_validate(base)


def dispatch(spec: ExperimentSpec) -> RunManifest:
    route = ROUTES_BY_NAME[spec.subcommand]
    if route.stochastic:
        seed_stream(spec)
    reset_traces()
    manifest = RunManifest(tool_version=__version__, spec=spec)
    start = time.perf_counter()
    logger.info("running %s", spec.subcommand)
    route.execute(spec, manifest)
    manifest.duration_seconds = time.perf_counter() - start
    manifest.operations = get_operation_stats()
    if spec.output_path:
        emit_report(manifest, spec.format, spec.output_path)
    return manifest


def parse_and_dispatch(argv: Sequence[str] | None = None) -> RunManifest:
    args = build_parser().parse_args(argv)
    configure_logging(getattr(args, "log_level", None))
    return dispatch(build_spec(args))


def summarize(manifest: RunManifest) -> str:
    results = manifest.results
    lines = [f"{manifest.spec.subcommand} ({manifest.duration_seconds:.3f}s)"]
    for name, value in results.float_values.items():
        if name in results.exact_values:
            lines.append(f"  {name} = {results.exact_values[name]} ({value:.12g})")
        elif name in results.stderr_values:
            lines.append(f"  {name} = {value:.6g} +/- {results.stderr_values[name]:.2g}")
        else:
            lines.append(f"  {name} = {value:.12g}")
    for check in manifest.checks:
        verdict = "PASS" if check.passed else "FAIL"
        lines.append(f"  [{verdict}] {check.name}: {check.observed:.6g} vs {check.bound_name} {check.bound:.6g}")
    if not results.float_values and not manifest.checks:
        lines.extend(json.dumps(record, indent=2) for record in manifest.records)
    return "\n".join(lines)


def main(argv: Sequence[str] | None = None) -> int:
    """Exit 0 when every check passes, 2 when a check fails, 1 on usage or input errors."""
    try:
        manifest = parse_and_dispatch(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.help_text:
            print(exc.help_text, file=sys.stderr)
        return 1
    except ValidationError as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return 1
    except (OnbLabError, OSError) as exc:
        logger.error("%s: %s", type(exc).__name__, exc)
        return 1

    if manifest.spec.output_path:
        print(summarize(manifest))
    else:
        sys.stdout.write(render_report(manifest, manifest.spec.format))
    if not manifest.all_passed:
        failed = sum(not check.passed for check in manifest.checks)
        logger.warning("%d of %d checks failed", failed, len(manifest.checks))
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
