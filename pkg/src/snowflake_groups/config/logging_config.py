import logging
import os
from typing import Optional, Union


def setup_logging(level: Optional[Union[int, str]] = None) -> None:
    """Configure root logging; level falls back to SNOWFLAKE_LOG_LEVEL, then INFO."""
    if level is None:
        level = os.getenv("SNOWFLAKE_LOG_LEVEL", "INFO")
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO
    logging.basicConfig(
        level=level, format="%(asctime)s - %(levelname)s - %(message)s", force=True
    )
