from .dto import CheckResult, EigenvalueCheck, ExperimentSpec, ReportResults, RunManifest

__all__ = [
    "CheckResult",
    "EigenvalueCheck",
    "ExperimentSpec",
    "ReportResults",
    "RunManifest",
]
