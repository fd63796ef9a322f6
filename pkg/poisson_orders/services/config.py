import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

PACKAGE_ROOT = Path(__file__).resolve().parent.parent

DEFAULT_SESSION = os.getenv("POISSON_SESSION", str(PACKAGE_ROOT / "sessions" / "examples.json"))
DEFAULT_ORDER = os.getenv("POISSON_ORDER", "degrevlex")
ROUND_CAP = int(os.getenv("POISSON_ROUND_CAP", "64"))
# None means "let the operation choose" (module dimension, input degree, ...)
DEGREE_CAP = int(os.getenv("POISSON_DEGREE_CAP")) if os.getenv("POISSON_DEGREE_CAP") else None
MAX_ELL = int(os.getenv("POISSON_MAX_ELL", "12"))
LOG_LEVEL = os.getenv("POISSON_LOG_LEVEL", "WARNING")
