import logging
import os

logger = logging.getLogger(__name__)

try:
    from dotenv import load_dotenv

    env_path = load_dotenv(override=False)
    if env_path:
        logger.debug("Loaded environment variables from .env file.")
except ImportError:
    logger.debug("python-dotenv not installed, skipping .env file load.")
    pass

# --- Logging ---
LOG_LEVEL: str = os.getenv("TANDEM_LOG_LEVEL", "INFO").upper()

# --- Observation model defaults ---
# 128 bins over [-a-4, a+4] keep >= 0.9997 of the mass of every hypothesis.
DEFAULT_BINS: int = int(os.getenv("TANDEM_DEFAULT_BINS", "128"))
DEFAULT_INTERVAL_PAD: float = float(os.getenv("TANDEM_DEFAULT_INTERVAL_PAD", "4"))

# --- Design defaults ---
DEFAULT_ETA: float = float(os.getenv("TANDEM_DEFAULT_ETA", "1e-6"))
DEFAULT_ITERATIONS: int = int(os.getenv("TANDEM_DEFAULT_ITERATIONS", "3"))

# --- Oracle / Monte Carlo ---
ORACLE_MAX_COMBINATIONS: int = int(
    os.getenv("TANDEM_ORACLE_MAX_COMBINATIONS", "10000000")
)
MONTE_CARLO_SHARDS: int = int(os.getenv("TANDEM_MONTE_CARLO_SHARDS", "4"))

# --- Runner ---
# Grid cells (one per N per series) dispatched to worker threads at once.
MAX_PARALLEL_CELLS: int = int(os.getenv("TANDEM_MAX_PARALLEL_CELLS", "4"))
