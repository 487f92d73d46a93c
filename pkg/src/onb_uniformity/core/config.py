import os
from dotenv import load_dotenv

from .logger import get_logger

# Load the .env file once during startup
load_dotenv()

# Access variables
APP_ENV = os.getenv("APP_ENV", "production")
LOG_LEVEL = os.getenv("LOG_LEVEL", "info")
APP_NAME = os.getenv("APP_NAME", "onb_uniformity")

# Monte Carlo plumbing
THREADS = int(os.getenv("ONB_THREADS", 1))
BLOCK_SIZE = int(os.getenv("ONB_BLOCK_SIZE", 4096))
SIGMA_BAND = float(os.getenv("ONB_SIGMA_BAND", 4.0))
FAST_PATH_DIM = int(os.getenv("ONB_FAST_PATH_DIM", 10_000))
OUTPUT_DIR = os.getenv("ONB_OUTPUT_DIR", "reports")

# Largest tensor ranks with explicit harmonic representatives
MAX_REAL_RANK = 4
MAX_COMPLEX_RANK = 2

logger = get_logger(__name__)


def show_config() -> dict:
    config = {
        "app_name": APP_NAME,
        "environment": APP_ENV,
        "log_level": LOG_LEVEL,
        "threads": THREADS,
        "block_size": BLOCK_SIZE,
        "sigma_band": SIGMA_BAND,
        "fast_path_dim": FAST_PATH_DIM,
        "output_dir": OUTPUT_DIR,
    }
    for key, value in config.items():
        logger.debug("config %s=%s", key, value)
    return config
