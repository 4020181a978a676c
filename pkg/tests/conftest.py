from pathlib import Path

import pytest

from qbd.bayesnet import load_model

MODELS = Path(__file__).resolve().parent.parent / "models"


@pytest.fixture(scope="session")
def demo_text() -> str:
    return (MODELS / "demo.json").read_text()


@pytest.fixture()
def demo_problem(demo_text):
    return load_model(demo_text)


@pytest.fixture()
def demo_path() -> str:
    return str(MODELS / "demo.json")
