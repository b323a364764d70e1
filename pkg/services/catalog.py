"""
Catálogo de instancias concretas y enumeración de grafos pequeños.
Alimenta las pruebas exhaustivas, el runner de aceptación y los ejemplos.
"""

import itertools
import string
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from services.classify import EndsKind
from services.graph_core import Ends, ProductGraph, Tri, VertexGroupInfo, VertexPresentation
from services.group_tables import FiniteGroupTable


@dataclass(frozen=True)
class CatalogInstance:
    name: str
    graph: ProductGraph
    expected_ends: EndsKind
    description: str = ""


def finite_vertex(name: str, order: int = 2, table: Optional[FiniteGroupTable] = None) -> VertexGroupInfo:
    table = table or FiniteGroupTable.cyclic(order)
    return VertexGroupInfo.finite(name, len(table), table=table)


def infinite_cyclic_vertex(name: str) -> VertexGroupInfo:
    """Z con presentación ⟨x | ⟩ (un generador, sin relatores)"""
    return VertexGroupInfo.infinite(name, Ends.TWO, Tri.YES, presentation=VertexPresentation(("x",)))


def involution_vertex(name: str) -> VertexGroupInfo:
    """Z2 con presentación ⟨x | x^2⟩"""
    return VertexGroupInfo.finite(name, 2, presentation=VertexPresentation(("x",), ("x^2",)))


def table_graph(names: Sequence[str], edges: Iterable[Tuple[str, str]],
                orders: Optional[Dict[str, int]] = None) -> ProductGraph:
    """Producto de grafos de grupos cíclicos finitos (orden 2 por defecto)"""
    orders = orders or {}
    return ProductGraph(tuple(finite_vertex(n, orders.get(n, 2)) for n in names), tuple(edges))


def racg(names: Sequence[str], edges: Iterable[Tuple[str, str]]) -> ProductGraph:
    """Grupo de Coxeter rectangular con presentaciones explícitas"""
    return ProductGraph(tuple(involution_vertex(n) for n in names), tuple(edges))


def raag(names: Sequence[str], edges: Iterable[Tuple[str, str]]) -> ProductGraph:
    """Grupo de Artin rectangular con presentaciones explícitas"""
    return ProductGraph(tuple(infinite_cyclic_vertex(n) for n in names), tuple(edges))


def builtin_catalog() -> List[CatalogInstance]:
    """Instancias con tablas para contrastar ends_of con el oráculo"""
    return [
        CatalogInstance("triangle_z2", table_graph("abc", [("a", "b"), ("b", "c"), ("a", "c")]),
                        EndsKind.ZERO, "Z2^3, orden 8"),
        CatalogInstance("path3_z2", table_graph("abc", [("a", "b"), ("b", "c")]),
                        EndsKind.MORE_THAN_ONE, "D∞ × Z2, dos finales"),
        CatalogInstance("two_isolated_z2", table_graph("ab", []),
                        EndsKind.MORE_THAN_ONE, "D∞, dos finales"),
        CatalogInstance("three_isolated_z2", table_graph("abc", []),
                        EndsKind.MORE_THAN_ONE, "Z2 * Z2 * Z2, infinitos finales"),
        CatalogInstance("square_z2", table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")]),
                        EndsKind.ONE, "D∞ × D∞, un final"),
        CatalogInstance("k4_minus_edge_z6",
                        table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("b", "d")],
                                    orders={"b": 6}),
                        EndsKind.MORE_THAN_ONE, "D∞ × Z6 × Z2, separador {b, d}"),
        CatalogInstance("single_z3", table_graph("a", [], orders={"a": 3}),
                        EndsKind.ZERO, "Z3"),
        CatalogInstance("edge_z2_z3", table_graph("ab", [("a", "b")], orders={"b": 3}),
                        EndsKind.ZERO, "Z2 × Z3, orden 6"),
        CatalogInstance("k4_z2",
                        table_graph("abcd", [(u, w) for u, w in itertools.combinations("abcd", 2)]),
                        EndsKind.ZERO, "Z2^4, orden 16"),
        CatalogInstance("claw_z2", table_graph("abcd", [("a", "b"), ("a", "c"), ("a", "d")]),
                        EndsKind.MORE_THAN_ONE, "Z2 × (Z2 * Z2 * Z2)"),
        CatalogInstance("diamond_z2",
                        table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("b", "d")]),
                        EndsKind.MORE_THAN_ONE, "D∞ × Z2 × Z2"),
        CatalogInstance("two_isolated_z3", table_graph("ab", [], orders={"a": 3, "b": 3}),
                        EndsKind.MORE_THAN_ONE, "Z3 * Z3, infinitos finales"),
    ]


# ---------------------------------------------------------------------------
# Enumeración exhaustiva de grafos pequeños
# ---------------------------------------------------------------------------

# Paleta de cuatro estados usada en las pruebas exhaustivas
PALETTE: Dict[str, VertexGroupInfo] = {
    "finite": VertexGroupInfo.finite("_", 2),
    "one_ended": VertexGroupInfo.infinite("_", Ends.ONE, Tri.YES),
    "many_ended": VertexGroupInfo.infinite("_", Ends.MANY, Tri.YES),
    "not_semistable": VertexGroupInfo.infinite("_", Ends.ONE, Tri.NO),
}


def connected_shapes(max_vertices: int, min_vertices: int = 1) -> Iterator[nx.Graph]:
    """Grafos conexos no isomorfos del atlas de networkx (hasta 7 vértices)"""
    for shape in nx.graph_atlas_g():
        n = shape.number_of_nodes()
        if n < min_vertices or n > max_vertices:
            continue
        if nx.is_connected(shape):
            yield shape


def _layout(shape: nx.Graph) -> Tuple[List[int], Dict[int, str], Tuple[Tuple[str, str], ...]]:
    order = sorted(shape.nodes)
    names = {node: string.ascii_lowercase[i] for i, node in enumerate(order)}
    edges = tuple(sorted((names[u], names[w]) if names[u] < names[w] else (names[w], names[u])
                         for u, w in shape.edges))
    return order, names, edges


@lru_cache(maxsize=None)
def _palette_vertex(name: str, status: str) -> VertexGroupInfo:
    template = PALETTE[status]
    return VertexGroupInfo(name, template.order, template.ends, template.semistable)


def annotate(shape: nx.Graph, statuses: Sequence[str]) -> ProductGraph:
    """Etiqueta los nodos del atlas como a, b, c, ... con la paleta dada"""
    order, names, edges = _layout(shape)
    return ProductGraph(tuple(_palette_vertex(names[node], statuses[node]) for node in order), edges)


def palette_instances(max_vertices: int, min_vertices: int = 1,
                      palette: Sequence[str] = tuple(PALETTE)) -> Iterator[ProductGraph]:
    """Todas las asignaciones de la paleta sobre todos los grafos conexos"""
    for shape in connected_shapes(max_vertices, min_vertices):
        # La disposición del atlas se calcula una vez por forma
        order, names, edges = _layout(shape)
        for statuses in itertools.product(palette, repeat=len(order)):
            yield ProductGraph(tuple(_palette_vertex(names[node], statuses[node]) for node in order), edges)


def palette_instance_count(max_vertices: int, min_vertices: int = 1) -> int:
    return sum(len(PALETTE) ** shape.number_of_nodes()
               for shape in connected_shapes(max_vertices, min_vertices))
