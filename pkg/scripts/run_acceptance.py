import sys
from pathlib import Path

# --- Ensure consistent project root ---
BASE_DIR = Path(__file__).resolve().parent.parent
sys.path.append(str(BASE_DIR / "src"))

from onb_uniformity.cli import main
from onb_uniformity.core.config import OUTPUT_DIR, show_config

DEFAULT_SEED = "20240601"


def acceptance_argv(extra):
	"""Pinned grid with a fixed seed unless the caller overrides either."""
	argv = ["--output", str(BASE_DIR / OUTPUT_DIR / "acceptance.json"), "acceptance",
	        "--grid", str(BASE_DIR / "configs" / "acceptance_grid.json"), "--seed", DEFAULT_SEED]
	return argv + list(extra)


if __name__ == "__main__":
	# Display loaded configuration
	show_config()

	sys.exit(main(acceptance_argv(sys.argv[1:])))
