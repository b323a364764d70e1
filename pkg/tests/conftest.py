"""
Fixtures compartidas para la suite de pruebas.
"""

import sys
from pathlib import Path
from typing import Dict, Iterable, Tuple

import pytest

# Agregar el directorio raíz al path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from services.catalog import table_graph
from services.graph_core import Ends, ProductGraph, Tri, VertexGroupInfo

# Estados abreviados para construir grafos anotados en las pruebas
STATUS = {
    "F": lambda n: VertexGroupInfo.finite(n, 2),
    "O": lambda n: VertexGroupInfo.infinite(n, Ends.ONE, Tri.YES),
    "M": lambda n: VertexGroupInfo.infinite(n, Ends.MANY, Tri.YES),
    "T": lambda n: VertexGroupInfo.infinite(n, Ends.TWO, Tri.YES),
    "N": lambda n: VertexGroupInfo.infinite(n, Ends.ONE, Tri.NO),
    "U": lambda n: VertexGroupInfo.infinite(n, Ends.ONE, Tri.UNKNOWN),
    "E": lambda n: VertexGroupInfo.infinite(n, Ends.UNKNOWN, Tri.YES),
}


def build(statuses: Dict[str, str], edges: Iterable[Tuple[str, str]] = ()) -> ProductGraph:
    """build({'a': 'F', 'b': 'N'}, [('a', 'b')])"""
    return ProductGraph(tuple(STATUS[code](name) for name, code in statuses.items()), tuple(edges))


@pytest.fixture
def make_graph():
    return build


@pytest.fixture
def path3():
    return table_graph("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def triangle():
    return table_graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def square():
    return table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])


@pytest.fixture
def two_isolated():
    return table_graph("ab", [])


@pytest.fixture
def golden_dir() -> Path:
    return project_root / "tests" / "golden"


@pytest.fixture
def catalog_dir() -> Path:
    return project_root / "data" / "catalog"
