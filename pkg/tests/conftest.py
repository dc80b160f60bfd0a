import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(20240901)


def random_state_amplitudes(rng, qubits: int) -> np.ndarray:
    amps = rng.normal(size=2**qubits) + 1j * rng.normal(size=2**qubits)
    return amps / np.linalg.norm(amps)
