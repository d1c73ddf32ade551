"""Test fixtures for snowflake group tests."""

from .sample_data import (
    COMMENTED_TEXT,
    COVER_CASES,
    DENSITY_TARGETS,
    KLEIN_31_RELATORS,
    KLEIN_31_TEXT,
    MALFORMED_TEXT,
    R_2252_RELATORS,
    SNOWFLAKE_31_RELATORS,
    WITNESS_GRID,
    WITNESS_MAX_LEVEL,
)

__all__ = [
    "COMMENTED_TEXT",
    "COVER_CASES",
    "DENSITY_TARGETS",
    "KLEIN_31_RELATORS",
    "KLEIN_31_TEXT",
    "MALFORMED_TEXT",
    "R_2252_RELATORS",
    "SNOWFLAKE_31_RELATORS",
    "WITNESS_GRID",
    "WITNESS_MAX_LEVEL",
]
