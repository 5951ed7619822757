"""Shared pytest fixtures: shipped algebras and their preset triples."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from core.builders import resolve_fixture  # noqa: E402
from core.presets import PRESET_FIXTURES, build_preset  # noqa: E402

KAC_PALJUTKIN_PATH = ROOT / "fixtures" / "kac_paljutkin.json"
EXPERIMENTS_DIR = ROOT / "experiments"


def load_shipped(ref: str):
    if ref.endswith(".json"):
        return resolve_fixture(str(ROOT / ref))
    return resolve_fixture(ref)


@pytest.fixture(scope="session")
def kac_paljutkin():
    return resolve_fixture(str(KAC_PALJUTKIN_PATH))


@pytest.fixture(scope="session")
def function_z2():
    return resolve_fixture("function:Z2")


@pytest.fixture(scope="session")
def poisson(function_z2):
    return function_z2, build_preset("poisson_z2", function_z2)


@pytest.fixture(scope="session", params=sorted(PRESET_FIXTURES))
def model(request):
    """(algebra, triple) for every preset."""
    algebra = load_shipped(PRESET_FIXTURES[request.param])
    return algebra, build_preset(request.param, algebra)
