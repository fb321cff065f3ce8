"""
Environment-driven settings and logging setup for the command-line entry point
"""

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

LOG_ENV = "DUNKLKIT_LOG"
THREADS_ENV = "DUNKLKIT_THREADS"
OUT_ENV = "DUNKLKIT_OUT"

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass
class Settings:
    log_level: str = "INFO"
    threads: int = 1
    output_dir: str = "dunklkit_reports"


def load_settings() -> Settings:
    """Read settings from the environment (and a local .env file, if present)"""
    load_dotenv()
    level = os.getenv(LOG_ENV, "INFO").upper()
    try:
        threads = max(1, int(os.getenv(THREADS_ENV, "1")))
    except ValueError:
        threads = 1
    return Settings(
        log_level=level,
        threads=threads,
        output_dir=os.getenv(OUT_ENV, "dunklkit_reports"),
    )


def configure_logging(level: str = "INFO") -> None:
    """Configure root logging once; library modules never add handlers"""
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        numeric = logging.INFO
    logging.basicConfig(level=numeric, format=LOG_FORMAT)
    logging.getLogger().setLevel(numeric)
