"""
Modelo de datos del grafo anotado y operaciones puramente combinatorias.
Subgrafos plenos, links, estrellas, completitud, finitud de subgrupos visuales
y enumeración de separadores completos con grupos de vértice finitos.
"""

import re
import time
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
from networkx.utils import UnionFind

from services.group_tables import FiniteGroupTable
from utils.config import config
from utils.logging_config import get_logger, performance_logger

logger = get_logger("graph_core")

# Subconjunto ordenado de nombres de vértices (orden global del grafo)
SubgraphRef = Tuple[str, ...]

VERTEX_NAME_PATTERN = re.compile(r"^[A-Za-z0-9_\-]+$")
GENERATOR_PATTERN = VERTEX_NAME_PATTERN


class AnalysisError(Exception):
    """Error base de todas las operaciones del toolkit"""


class UnknownVertexError(AnalysisError, ValueError):
    """Se referenció un vértice que no existe en el grafo"""


class VertexBoundExceededError(AnalysisError):
    """El grafo supera el límite de vértices para enumeraciones exponenciales"""


class Tri(Enum):
    """Lógica trivalente para anotaciones y consultas"""
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @staticmethod
    def from_bool(value: bool) -> "Tri":
        return Tri.YES if value else Tri.NO

    def __and__(self, other: "Tri") -> "Tri":
        if self is Tri.NO or other is Tri.NO:
            return Tri.NO
        if self is Tri.UNKNOWN or other is Tri.UNKNOWN:
            return Tri.UNKNOWN
        return Tri.YES


class Ends(Enum):
    """Número de finales de un grupo de vértice"""
    ZERO = "zero"
    ONE = "one"
    TWO = "two"
    MANY = "many"
    UNKNOWN = "unknown"

    @property
    def is_multi(self) -> bool:
        return self in (Ends.TWO, Ends.MANY)


@dataclass(frozen=True)
class VertexPresentation:
    """Fragmento de presentación de un grupo de vértice: generadores locales y relatores en texto ('x^2 y^-1')"""
    generators: Tuple[str, ...]
    relators: Tuple[str, ...] = ()


@dataclass(frozen=True)
class VertexGroupInfo:
    """Metadatos de un grupo de vértice; order=None significa infinito"""
    name: str
    order: Optional[int]
    ends: Ends
    semistable: Tri
    finitely_presented: bool = True
    presentation: Optional[VertexPresentation] = None
    table: Optional[FiniteGroupTable] = None

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    @classmethod
    def finite(cls, name: str, order: int, table: Optional[FiniteGroupTable] = None,
               presentation: Optional[VertexPresentation] = None) -> "VertexGroupInfo":
        return cls(name, order, Ends.ZERO, Tri.YES, True, presentation, table)

    @classmethod
    def infinite(cls, name: str, ends: Ends = Ends.ONE, semistable: Tri = Tri.YES,
                 finitely_presented: bool = True,
                 presentation: Optional[VertexPresentation] = None) -> "VertexGroupInfo":
        return cls(name, None, ends, semistable, finitely_presented, presentation, None)


@dataclass(frozen=True)
class Violation:
    """Violación de un invariante del grafo anotado"""
    code: str
    message: str
    vertex: Optional[str] = None


@dataclass(frozen=True)
class Separator:
    """Subgrafo completo Δ con grupos finitos que separa el grafo"""
    delta: SubgraphRef
    parts: Tuple[SubgraphRef, ...]
    minimal: bool = False


@dataclass(frozen=True)
class ProductGraph:
    """Grafo simple finito con un grupo de vértice anotado en cada vértice"""
    vertices: Tuple[VertexGroupInfo, ...] = ()
    edges: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple((str(u), str(v)) for u, v in self.edges))

    @cached_property
    def names(self) -> SubgraphRef:
        return tuple(v.name for v in self.vertices)

    @cached_property
    def index(self) -> Dict[str, int]:
        index: Dict[str, int] = {}
        for i, v in enumerate(self.vertices):
            index.setdefault(v.name, i)
        return index

    @cached_property
    def info(self) -> Dict[str, VertexGroupInfo]:
        return {v.name: v for v in self.vertices}

    @cached_property
    def adjacency(self) -> Dict[str, FrozenSet[str]]:
        neighbors: Dict[str, set] = {name: set() for name in self.names}
        for u, v in self.edges:
            if u == v or u not in neighbors or v not in neighbors:
                continue
            neighbors[u].add(v)
            neighbors[v].add(u)
        return {name: frozenset(ns) for name, ns in neighbors.items()}

    @cached_property
    def nx_graph(self) -> nx.Graph:
        graph = nx.Graph()
        graph.add_nodes_from(self.names)
        graph.add_edges_from((u, v) for u, v in self.edges
                             if u != v and u in self.index and v in self.index)
        return graph

    def __len__(self) -> int:
        return len(self.vertices)

    def vertex(self, name: str) -> VertexGroupInfo:
        try:
            return self.info[name]
        except KeyError:
            raise UnknownVertexError(f"Vértice desconocido: {name!r}") from None

    def adjacent(self, u: str, v: str) -> bool:
        return v in self.adjacency.get(u, frozenset())

    def ordered(self, names: Iterable[str]) -> SubgraphRef:
        """Normaliza un conjunto de nombres al orden global (sin duplicados)"""
        unique = set(names)
        for name in unique:
            if name not in self.index:
                raise UnknownVertexError(f"Vértice desconocido: {name!r}")
        return tuple(sorted(unique, key=self.index.__getitem__))

    def scope(self, within: Optional[Iterable[str]] = None) -> SubgraphRef:
        return self.names if within is None else self.ordered(within)

    def components(self, within: Optional[Iterable[str]] = None) -> List[SubgraphRef]:
        """Componentes conexas del subgrafo pleno, en orden global"""
        scope = self.scope(within)
        members = set(scope)
        forest = UnionFind(scope)
        for u in scope:
            for w in self.adjacency[u] & members:
                forest.union(u, w)
        comps = [self.ordered(c) for c in forest.to_sets()]
        return sorted(comps, key=lambda c: self.index[c[0]])


# ---------------------------------------------------------------------------
# Validación
# ---------------------------------------------------------------------------

def validate_graph(g: ProductGraph) -> List[Violation]:
    """
    Verifica los invariantes de ProductGraph y VertexGroupInfo.

    Returns:
        Lista de violaciones (vacía si el grafo es válido)
    """
    violations: List[Violation] = []
    seen = set()

    for v in g.vertices:
        if v.name in seen:
            violations.append(Violation("duplicate_vertex", f"Nombre de vértice repetido: {v.name}", v.name))
        seen.add(v.name)
        if not VERTEX_NAME_PATTERN.match(v.name):
            violations.append(Violation("invalid_name", f"Nombre de vértice inválido: {v.name!r}", v.name))
        violations.extend(_vertex_violations(v))

    edge_keys = set()
    for u, w in g.edges:
        if u == w:
            violations.append(Violation("self_loop", f"Lazo en el vértice {u}", u))
            continue
        for endpoint in (u, w):
            if endpoint not in seen:
                violations.append(Violation("unknown_endpoint", f"Arista ({u}, {w}) con extremo desconocido {endpoint}", endpoint))
        key = frozenset((u, w))
        if key in edge_keys:
            violations.append(Violation("duplicate_edge", f"Arista repetida ({u}, {w})", u))
        edge_keys.add(key)

    return violations


def _vertex_violations(v: VertexGroupInfo) -> List[Violation]:
    found = []
    if v.order is not None and v.order < 1:
        found.append(Violation("invalid_order", f"{v.name}: el orden debe ser positivo", v.name))
    if v.order == 1:
        found.append(Violation("trivial_group", f"{v.name}: los grupos de vértice deben ser no triviales", v.name))
    if v.is_finite and v.ends is not Ends.ZERO:
        found.append(Violation("finite_implies_zero_ends", f"{v.name}: un grupo finito tiene cero finales", v.name))
    if not v.is_finite and v.ends is Ends.ZERO:
        found.append(Violation("zero_ends_implies_finite", f"{v.name}: cero finales exige orden finito", v.name))
    if v.is_finite and v.semistable is not Tri.YES:
        found.append(Violation("finite_implies_semistable", f"{v.name}: un grupo finito es semiestable", v.name))
    if v.semistable is Tri.NO and v.is_finite:
        found.append(Violation("non_semistable_implies_infinite", f"{v.name}: no semiestable exige orden infinito", v.name))
    if v.table is not None and v.order != len(v.table):
        found.append(Violation("table_order_mismatch", f"{v.name}: el orden no coincide con la tabla ({len(v.table)})", v.name))
    if v.presentation is not None and not v.finitely_presented:
        found.append(Violation("presentation_implies_fp", f"{v.name}: con presentación debe ser finitamente presentado", v.name))
    if v.presentation is not None:
        found.extend(_generator_violations(v))
    return found


def _generator_violations(v: VertexGroupInfo) -> List[Violation]:
    # Los símbolos calificados 'v.x' deben ser únicos y tokens del formato de texto
    found = []
    generators = v.presentation.generators
    for symbol in generators:
        if not GENERATOR_PATTERN.fullmatch(symbol):
            found.append(Violation("invalid_generator", f"{v.name}: generador inválido {symbol!r}", v.name))
    repeated = sorted({s for s in generators if generators.count(s) > 1})
    if repeated:
        found.append(Violation("duplicate_generator", f"{v.name}: generadores repetidos {repeated}", v.name))
    return found


# ---------------------------------------------------------------------------
# Subgrafos plenos, links y estrellas
# ---------------------------------------------------------------------------

def full_subgraph(g: ProductGraph, s: Iterable[str]) -> ProductGraph:
    """Subgrafo pleno sobre s; hereda todas las aristas y anotaciones"""
    keep = set(g.ordered(s))
    if len(keep) == len(g.index):
        return g
    vertices = tuple(v for v in g.vertices if v.name in keep)
    edges = tuple((u, w) for u, w in g.edges if u in keep and w in keep)
    return ProductGraph(vertices, edges)


def link(g: ProductGraph, v: str, within: Optional[Iterable[str]] = None) -> SubgraphRef:
    """Vecinos de v (dentro de `within` si se indica), en orden global"""
    g.vertex(v)
    neighbors = g.adjacency[v]
    if within is not None:
        neighbors = neighbors & set(g.ordered(within))
    return g.ordered(neighbors)


def star(g: ProductGraph, v: str, within: Optional[Iterable[str]] = None) -> SubgraphRef:
    return g.ordered((v,) + link(g, v, within))


def is_complete(g: ProductGraph, s: Sequence[str]) -> bool:
    members = g.ordered(s)
    for i, u in enumerate(members):
        adj = g.adjacency[u]
        for w in members[i + 1:]:
            if w not in adj:
                return False
    return True


def spans_finite_subgroup(g: ProductGraph, s: Sequence[str]) -> Tri:
    """
    ⟨s⟩ es finito si y sólo si s es completo y todos sus grupos son finitos.
    Nunca devuelve UNKNOWN: el orden de un vértice siempre es conocido.
    """
    members = g.ordered(s)
    if any(not g.vertex(v).is_finite for v in members):
        return Tri.NO
    return Tri.from_bool(is_complete(g, members))


def spans_finite_subgroup_order(g: ProductGraph, s: Sequence[str]) -> Optional[int]:
    """Orden exacto de ⟨s⟩ cuando es finito (producto directo), si no None"""
    members = g.ordered(s)
    if spans_finite_subgroup(g, members) is not Tri.YES:
        return None
    order = 1
    for v in members:
        order *= g.vertex(v).order
    return order


# ---------------------------------------------------------------------------
# Separadores completos finitos
# ---------------------------------------------------------------------------

def separation_parts(g: ProductGraph, delta: Iterable[str],
                     within: Optional[Iterable[str]] = None) -> List[SubgraphRef]:
    """Componentes de (within - delta)"""
    scope = g.scope(within)
    removed = set(g.ordered(delta))
    return g.components([v for v in scope if v not in removed])


def find_finite_complete_separators(g: ProductGraph, within: Optional[Iterable[str]] = None,
                                    max_vertices: Optional[int] = None) -> List[Separator]:
    """
    Enumera exhaustivamente los Δ completos con grupos finitos que separan.

    Δ=∅ se reporta sólo si el grafo es disconexo (escisión en producto libre);
    un Δ no vacío se reporta si su eliminación aumenta estrictamente el número
    de componentes. Orden: (|Δ|, orden global).
    """
    scope = g.scope(within)
    bound = config.graph.max_vertices if max_vertices is None else max_vertices
    if len(scope) > bound:
        raise VertexBoundExceededError(
            f"El grafo tiene {len(scope)} vértices; el límite de enumeración es {bound} (GPA_MAX_VERTICES)"
        )

    start = time.perf_counter()
    finite_vertices = [v for v in scope if g.vertex(v).is_finite]
    candidates: List[SubgraphRef] = [()]
    candidates.extend(g.ordered(c) for c in nx.enumerate_all_cliques(g.nx_graph.subgraph(finite_vertices)))

    base_count = len(g.components(scope))
    found: List[Tuple[SubgraphRef, Tuple[SubgraphRef, ...]]] = []
    for delta in candidates:
        parts = separation_parts(g, delta, scope)
        if not delta:
            if len(parts) >= 2:
                found.append((delta, tuple(parts)))
        elif len(parts) > base_count and len(parts) >= 2:
            found.append((delta, tuple(parts)))

    found.sort(key=lambda item: (len(item[0]), tuple(g.index[v] for v in item[0])))
    delta_sets = [frozenset(d) for d, _ in found]
    separators = [
        Separator(delta, parts, minimal=not any(other < frozenset(delta) for other in delta_sets))
        for delta, parts in found
    ]

    performance_logger.log_enumeration(
        "find_finite_complete_separators",
        explored=len(candidates),
        duration_seconds=time.perf_counter() - start,
        found=len(separators),
    )
    return separators
