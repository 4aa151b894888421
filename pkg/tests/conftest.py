import json
from pathlib import Path

import numpy as np
import pytest

from bcabe import construct
from bcabe.linalg import DensityMatrix

GOLDENS = Path(__file__).parent / "goldens" / "goldens.json"


@pytest.fixture(scope="session")
def goldens():
    return json.loads(GOLDENS.read_text())


@pytest.fixture(scope="session")
def class_states():
    """All four class states at n = 4, 6, 8, built once."""
    return {
        (cls, n): construct.projector_direct(cls, n)
        for n in (4, 6, 8)
        for cls in construct.STATE_CLASSES
    }


def random_density_matrix(rng: np.random.Generator, qubits: int) -> DensityMatrix:
    dim = 2**qubits
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    m = g @ g.conj().T
    return DensityMatrix(qubits, m / np.trace(m))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2
