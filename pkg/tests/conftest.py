import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from logoswb.graph import build_commutation_graph  # noqa: E402
from logoswb.linalg import vector_to_projector  # noqa: E402

S = 1 / np.sqrt(2)


@pytest.fixture
def rng():
    return np.random.default_rng(20191015)


@pytest.fixture
def two_bases():
    """Computational and +/- bases in C^2, ids P0, P1, Pp, Pm."""
    return [
        ("P0", vector_to_projector([1, 0])),
        ("P1", vector_to_projector([0, 1])),
        ("Pp", vector_to_projector([S, S])),
        ("Pm", vector_to_projector([S, -S])),
    ]


@pytest.fixture
def two_basis_graph(two_bases):
    return build_commutation_graph(two_bases)
