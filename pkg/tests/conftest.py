import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from kgbench.datasets import simpsons_graph, simpsons_ontology


@pytest.fixture(scope="session")
def simpsons():
    return simpsons_graph()


@pytest.fixture(scope="session")
def simpsons_ont():
    return simpsons_ontology()
