import os
from dataclasses import asdict, dataclass
from typing import Any, Dict, Optional

from ..exceptions import ParameterError

ENV_PREFIX = "SNOWFLAKE_"


@dataclass(frozen=True)
class Limits:
    """Resource caps shared by coset enumeration, area search and Tietze passes."""

    max_cosets: int = 10**6
    max_states: int = 10**7
    max_depth: int = 64
    length_slack: int = 0
    tietze_budget: int = 1000
    seed: int = 0

    def __post_init__(self) -> None:
        for name in ("max_cosets", "max_states", "max_depth", "tietze_budget"):
            if getattr(self, name) < 1:
                raise ParameterError(f"limit '{name}' must be positive")
        if self.length_slack < 0:
            raise ParameterError("limit 'length_slack' must be non-negative")

    @classmethod
    def from_env(cls, **overrides: Optional[int]) -> "Limits":
        """Load limits from SNOWFLAKE_* variables; non-None overrides win."""
        values: Dict[str, int] = {}
        for name, default in asdict(cls()).items():
            raw = os.getenv(f"{ENV_PREFIX}{name.upper()}")
            if raw is None:
                values[name] = default
                continue
            try:
                values[name] = int(raw)
            except ValueError:
                raise ParameterError(
                    f"{ENV_PREFIX}{name.upper()}={raw!r} is not an integer.\n\n"
                    "Recognised environment variables:\n"
                    "  SNOWFLAKE_MAX_COSETS=1000000 (default)\n"
                    "  SNOWFLAKE_MAX_STATES=10000000 (default)\n"
                    "  SNOWFLAKE_MAX_DEPTH=64 (default)\n"
                    "  SNOWFLAKE_LENGTH_SLACK=0 (default)\n"
                    "  SNOWFLAKE_TIETZE_BUDGET=1000 (default)\n"
                    "  SNOWFLAKE_SEED=0 (default)\n"
                )
        for name, value in overrides.items():
            if value is not None:
                values[name] = value
        return cls(**values)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
