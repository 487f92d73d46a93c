import threading
from collections import deque
from dataclasses import dataclass, field
from datetime import datetime, timezone


def singleton(cls):
    instances = {}

    def get_instance(*args, **kwargs):
        if cls not in instances:
            instances[cls] = cls(*args, **kwargs)

        return instances[cls]

    return get_instance


@dataclass(frozen=True)
class OperationTrace:
    operation: str
    duration_ms: float
    status: str = "success"
    error: str | None = None
    arguments: str = ""
    finished_at: datetime = field(default_factory=lambda: datetime.now(timezone.utc))


@singleton
class OperationTracer:
    """
    Thread-safe record of traced service calls for the current run.

    Trials run on worker threads, so every mutation holds the lock.  Only the
    newest `max_traces` calls are kept; the aggregated stats end up in the run
    manifest under "operations".
    """

    def __init__(self, max_traces: int = 10000):
        self.traces: deque[OperationTrace] = deque(maxlen=max_traces)
        self.lock = threading.Lock()

    def record(self, trace: OperationTrace):
        with self.lock:
            self.traces.append(trace)

    def calls(self, operation: str | None = None) -> list[OperationTrace]:
        with self.lock:
            return [t for t in self.traces if operation is None or t.operation == operation]

    def get_stats(self) -> dict[str, dict]:
        """count, total/avg/max duration in ms, errors and the last error message per operation"""
        with self.lock:
            traces = list(self.traces)

        stats: dict[str, dict] = {}
        for trace in traces:
            entry = stats.setdefault(trace.operation, {
                "count": 0,
                "total_duration_ms": 0.0,
                "max_duration_ms": 0.0,
                "errors": 0,
            })
            entry["count"] += 1
            entry["total_duration_ms"] += trace.duration_ms
            entry["max_duration_ms"] = max(entry["max_duration_ms"], trace.duration_ms)
            if trace.status == "error":
                entry["errors"] += 1
                entry["last_error"] = trace.error

        for entry in stats.values():
            entry["avg_duration_ms"] = entry["total_duration_ms"] / entry["count"]
        return stats

    def clear(self):
        with self.lock:
            self.traces.clear()
