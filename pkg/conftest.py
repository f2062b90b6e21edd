# Fixtures compartidas de las pruebas
import os

import pytest

from modules.commands import AnalysisSettings
from modules.integrals import QuadratureConfig
from modules.lti import RationalSystem
from modules.mimo import TransferMatrix
from modules.system_file import EXAMPLES_DIR

# Sistemas de referencia
EXAMPLE1_ZPK = ([0.7, -0.8752], [-0.5, 0.8187, 0.8187], 0.2628)
EXAMPLE2_ZPK = ([0.7, -1.0], [-0.5, 0.8187, 1.2214], 0.301)
EXAMPLE3_GRID = [
    [([0.1], [-0.9, 1.0]), ([0.2], [-0.7, 1.0])],
    [([0.1], [-0.9, 1.0]), ([0.1], [-0.9, 1.0])],
]


@pytest.fixture
def quad_cfg():
    return QuadratureConfig()


@pytest.fixture
def example1():
    return RationalSystem.from_zpk(*EXAMPLE1_ZPK)


@pytest.fixture
def example2():
    return RationalSystem.from_zpk(*EXAMPLE2_ZPK)


@pytest.fixture
def example3():
    return TransferMatrix.from_coefficients(EXAMPLE3_GRID)


@pytest.fixture
def settings():
    return AnalysisSettings()


@pytest.fixture
def example_path():
    def _path(name):
        return os.path.join(EXAMPLES_DIR, f"{name}.json")
    return _path
