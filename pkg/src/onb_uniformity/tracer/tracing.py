import functools
import time

from .tracer import OperationTrace
from .tracer_instance import tracer

ARGUMENT_PREVIEW = 200


def trace_operation(operation_name: str):
    """Record duration and outcome of every call; exceptions are recorded and re-raised."""
    def decorator(func):
        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            start = time.perf_counter()
            arguments = f"{args!r:.{ARGUMENT_PREVIEW}} {kwargs!r:.{ARGUMENT_PREVIEW}}"
            try:
                result = func(*args, **kwargs)
            except Exception as exc:
                tracer.record(OperationTrace(operation_name, (time.perf_counter() - start) * 1000,
                                             "error", f"{type(exc).__name__}: {exc}", arguments))
                raise
            tracer.record(OperationTrace(operation_name, (time.perf_counter() - start) * 1000,
                                         arguments=arguments))
            return result
        return wrapper
    return decorator


def get_operation_stats():
    """Aggregated stats for the run manifest"""
    return tracer.get_stats()


def get_operation_calls(operation: str | None = None):
    return tracer.calls(operation)


def reset_traces():
    tracer.clear()
