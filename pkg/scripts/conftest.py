"""
Shared pytest fixtures.

Usage:
    pytest scripts                 # everything
    pytest scripts -m "not slow"   # skip the large building runs
"""
import sys
from pathlib import Path

import pytest

# Add project root to Python path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from app.core.config import settings  # noqa: E402
from app.models.domain import Model  # noqa: E402
from app.services import lattice as lat  # noqa: E402


@pytest.fixture(autouse=True)
def no_external_cache(monkeypatch):
    """Tests never read or write a shared ball cache."""
    monkeypatch.setattr(settings, "CACHE_DIR", None)
    monkeypatch.setattr(settings, "REDIS_URL", None)


@pytest.fixture
def tree_origin():
    """Standard vertex of the SL2(Q2) tree."""
    return lat.lattice_class(lat.standard_lattice(2, 2))


@pytest.fixture
def quotient():
    return Model.QUOTIENT


@pytest.fixture
def extended():
    return Model.EXTENDED
