"""Common configuration of tests."""

import numpy as np
import pytest
from ruamel.yaml import YAML


@pytest.fixture
def rng() -> np.random.Generator:
    """Fixture providing a seeded random generator."""
    return np.random.default_rng(20240601)


@pytest.fixture
def write_yaml():
    """Reusable YAML writer for tests."""

    def _write_yaml(path, data):
        yaml = YAML(typ="safe")
        with open(path, "w", encoding="utf-8") as file:
            yaml.dump(data, file)

    return _write_yaml


@pytest.fixture
def clean_env(monkeypatch):
    """Fixture removing FPI_MAX_TERMS from the environment."""
    monkeypatch.delenv("FPI_MAX_TERMS", raising=False)
