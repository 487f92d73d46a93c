from .tracer_instance import tracer
from .tracing import get_operation_calls, get_operation_stats, reset_traces, trace_operation

__all__ = ["tracer", "trace_operation", "get_operation_calls", "get_operation_stats", "reset_traces"]
