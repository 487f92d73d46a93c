import logging
import os
import sys

_ROOT = "onb_uniformity"
_configured = False


def configure_logging(level: str | None = None) -> None:
    """Attach a stderr handler to the package logger (idempotent)."""
    global _configured
    root = logging.getLogger(_ROOT)
    level_name = (level or os.getenv("LOG_LEVEL", "info")).upper()
    root.setLevel(getattr(logging, level_name, logging.INFO))
    if _configured:
        return
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("[%(levelname)s] %(name)s: %(message)s"))
    root.addHandler(handler)
    _configured = True


def get_logger(name: str) -> logging.Logger:
    if not name.startswith(_ROOT):
        name = f"{_ROOT}.{name}"
    return logging.getLogger(name)
