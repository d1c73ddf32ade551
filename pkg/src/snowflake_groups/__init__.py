"""
Snowflake Groups

Computational group theory for the one-relator groups R_{p,q} and the
snowflake groups G_{p,q}: presentations, the index-2 cover by coset
enumeration and Reidemeister-Schreier rewriting, Britton's-lemma word
problems, equitable sets, and Dehn-function exponent estimates.
"""

__version__ = "0.1.0"

from .algebra import coset, hnn, presentations, words
from .config import limits_config, logging_config, path_config
from .service import dehn_service, equitable_service, family_service, verification_service
from .util import file_util

__all__ = [
    "words",
    "presentations",
    "coset",
    "hnn",
    "dehn_service",
    "equitable_service",
    "family_service",
    "verification_service",
    "limits_config",
    "logging_config",
    "path_config",
    "file_util",
]
