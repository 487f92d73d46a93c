from .tracer import OperationTracer

# one tracer per process; reset at the start of every run
tracer = OperationTracer()
