import os
import sys
from pathlib import Path

import hypothesis
import numpy as np
import pytest

# Add project root to path
sys.path.append(str(Path(__file__).resolve().parent.parent))

from entlifepy.entlifeTypes import LatticeKind
from entlifepy.graph_core import make_lattice
from entlifepy.oracle import DensityMatrixOracle

hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.register_profile("ci", max_examples=200, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "fast"))


def pytest_configure(config):
    config.addinivalue_line("markers", "oracle: dense density-matrix checks (deselect with -m 'not oracle')")


@pytest.fixture
def oracle():
    return DensityMatrixOracle(max_qubits=10)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def linear10():
    return make_lattice(LatticeKind.Linear, (10,))
