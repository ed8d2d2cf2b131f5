import sys
from pathlib import Path

import pytest
from hypothesis import settings

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "src"))
sys.path.insert(0, str(Path(__file__).resolve().parent))

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

FIXTURES = Path(__file__).resolve().parent / "fixtures"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN


def load_fixture(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def build_model(name: str):
    """Parse and validate a fixture, asserting it is clean of errors."""
    from otl import has_errors, parse, validate

    result = parse(load_fixture(name), name)
    assert result.model is not None, [d.render() for d in result.diagnostics]
    diagnostics = validate(result.model)
    assert not has_errors(diagnostics), [d.render() for d in diagnostics]
    return result.model


@pytest.fixture
def mouse():
    return build_model("mouse.otl")


@pytest.fixture
def porphyry():
    return build_model("porphyry.otl")


@pytest.fixture
def multi_genus():
    return build_model("multi_genus.otl")


@pytest.fixture
def red_things():
    return build_model("red_things.otl")


@pytest.fixture
def mouse_parts():
    return build_model("mouse_parts.otl")


@pytest.fixture
def terms_model():
    return build_model("terms.otl")
