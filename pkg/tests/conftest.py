import sys
from pathlib import Path

# Add project root to path so imports work
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

import pytest

from app.config import reset_config
from app.observability import observability
from app.pipeline import analyze_pair
from app.schemas import PairDescriptor


@pytest.fixture(scope="session")
def analyze():
    """Cached full analysis of a built-in family instance"""
    cache = {}

    def _analyze(family: str, **params):
        key = (family, tuple(sorted(params.items())))
        if key not in cache:
            cache[key] = analyze_pair(PairDescriptor(family=family, params=params))
        return cache[key]

    return _analyze


@pytest.fixture(autouse=True)
def clean_state(monkeypatch):
    """Each test starts from default configuration and empty metrics"""
    for name in (
        "SYMPAIR_WEYL_SIZE_CAP",
        "SYMPAIR_PARABOLIC_CAP",
        "SYMPAIR_DEFAULT_Q",
        "SYMPAIR_DEFAULT_DEPTH",
        "SYMPAIR_DEFAULT_BOX",
        "SYMPAIR_LOG_LEVEL",
    ):
        monkeypatch.delenv(name, raising=False)
    reset_config()
    observability.reset()
    yield
    reset_config()


def half(*values):
    """RatVec of halves, e.g. half(1, -1) == (1/2, -1/2)"""
    from sympy import Rational
    from app.linalg import RatVec
    return RatVec(tuple(Rational(v, 2) for v in values))
