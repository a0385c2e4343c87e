import json
from pathlib import Path

import numpy as np
import pytest

from agt_simulator.dynamics import StateVector, random_states

TESTS_DIR = Path(__file__).parent


@pytest.fixture
def load_scenario():
    def _load(name: str) -> dict:
        return json.loads((TESTS_DIR / name).read_text(encoding="utf-8"))
    return _load


@pytest.fixture
def circuit_file() -> Path:
    return TESTS_DIR / "circuit_aba.txt"


@pytest.fixture
def single_qubit_inputs() -> list[StateVector]:
    """Basis states plus two seeded random states."""
    return [StateVector.basis("0"), StateVector.basis("1"), StateVector.basis("+")] + random_states(1, 2, seed=11)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(2024)
