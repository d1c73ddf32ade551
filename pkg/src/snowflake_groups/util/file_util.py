import json
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from ..algebra.presentations import Presentation
from ..exceptions import ParameterError, WordParseError

logger = logging.getLogger(__name__)


def read_text_file(file: Union[str, Path]) -> Optional[str]:
    """Read a UTF-8 text file.

    Args:
        file: Path to the file

    Returns:
        File contents, or None if the path is missing, not a file or unreadable
    """
    file_path = Path(file)
    if not file_path.is_file():
        logger.error(f"Not a readable file: {file_path}")
        return None
    try:
        contents = file_path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        logger.error(f"Could not read {file_path}: {e}")
        return None
    logger.debug(f"Read {len(contents)} characters from {file_path}")
    return contents


def read_presentation(file: Union[str, Path]) -> Optional[Presentation]:
    """Load a presentation file (``gens:`` line, then one relator per line).

    Args:
        file: Path to the presentation file

    Returns:
        The parsed Presentation, or None if the file is missing or malformed
    """
    text = read_text_file(file)
    if text is None:
        return None
    try:
        presentation = Presentation.from_text(text)
    except (WordParseError, ParameterError) as e:
        logger.error(f"Invalid presentation in {file}: {e}")
        return None
    logger.info(
        f"Loaded presentation with {len(presentation.alphabet)} generators "
        f"and {len(presentation.relators)} relators from {file}"
    )
    return presentation


def write_text_file(file_path: Union[str, Path], content: str) -> bool:
    """Write content to a file, creating parent directories.

    Returns:
        True if successful, False if the write failed
    """
    file_path = Path(file_path)
    try:
        file_path.parent.mkdir(parents=True, exist_ok=True)
        file_path.write_text(content, encoding="utf-8")
    except OSError as e:
        logger.error(f"Could not write {file_path}: {e}")
        return False
    logger.debug(f"Wrote {len(content)} characters to {file_path}")
    return True


def write_presentation(file_path: Union[str, Path], presentation: Presentation) -> bool:
    return write_text_file(file_path, presentation.to_text())


def to_json(document: Dict[str, Any]) -> str:
    """Deterministic JSON rendering (sorted keys, fixed separators)."""
    return json.dumps(document, sort_keys=True, indent=2, default=str) + "\n"


def write_csv(file_path: Union[str, Path], frame: pd.DataFrame) -> bool:
    return write_text_file(file_path, frame.to_csv(index=False))
