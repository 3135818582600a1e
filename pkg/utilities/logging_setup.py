import logging
import os
import sys
from typing import Optional

from dotenv import load_dotenv

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(level: Optional[str] = None) -> logging.Logger:
    """Configure root logging once for a CLI process.

    Records go to stderr so that reports printed on stdout stay byte-identical.
    """
    load_dotenv()
    level_name = (level or os.getenv("HANKELFIBER_LOG_LEVEL", "INFO")).upper()
    numeric = getattr(logging, level_name, None)
    if not isinstance(numeric, int):
        numeric = logging.INFO
    logging.basicConfig(level=numeric, format=LOG_FORMAT, stream=sys.stderr, force=True)
    return logging.getLogger("hankelfiber")
