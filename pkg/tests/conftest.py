import shutil
import tempfile
from pathlib import Path

import numpy as np
import pytest

from snowflake_groups.algebra.hnn import HnnFamily, make_hnn
from snowflake_groups.algebra.presentations import make_klein_form, make_snowflake_G
from snowflake_groups.config.limits_config import Limits
from snowflake_groups.service.family_service import free_abelian_presentation


@pytest.fixture
def temp_data_dir():
    """Create a temporary directory for test data."""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture(autouse=True)
def clean_snowflake_env(monkeypatch):
    """Keep SNOWFLAKE_* variables from the calling shell out of the tests."""
    for name in ("MAX_COSETS", "MAX_STATES", "MAX_DEPTH", "LENGTH_SLACK", "TIETZE_BUDGET", "SEED", "LOG_LEVEL"):
        monkeypatch.delenv(f"SNOWFLAKE_{name}", raising=False)


@pytest.fixture
def rng():
    """Seeded numpy generator."""
    return np.random.default_rng(20240917)


@pytest.fixture
def limits():
    """Default resource limits."""
    return Limits()


@pytest.fixture
def klein_31():
    """Klein form of R_{3,1}."""
    return make_klein_form(3, 1)


@pytest.fixture
def snowflake_31():
    """Presentation of G_{3,1}."""
    return make_snowflake_G(3, 1)


@pytest.fixture
def z2():
    """<a, b | [a, b]>."""
    return free_abelian_presentation()


@pytest.fixture
def hnn_r31():
    """R_{3,1} over the Klein bottle group."""
    return make_hnn(HnnFamily.R_KLEIN, 3, 1)


@pytest.fixture
def hnn_g31():
    """G_{3,1} over Z^2."""
    return make_hnn(HnnFamily.G_SNOWFLAKE, 3, 1)
