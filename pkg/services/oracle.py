"""
Oráculo concreto para productos de grafos con grupos de vértice finitos.

Cada vértice debe traer su tabla de multiplicación. Los elementos se
representan por formas normales canónicas (sucesiones de sílabas
(vértice, índice)) y el grafo de Cayley usa como generadores todos los
elementos no triviales de todos los grupos de vértice.
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from networkx.utils import UnionFind

from services.graph_core import AnalysisError, ProductGraph
from services.group_tables import FiniteGroupTable
from utils.config import config
from utils.logging_config import get_logger, performance_logger

logger = get_logger("oracle")

Syllable = Tuple[str, int]
NormalForm = Tuple[Syllable, ...]

IDENTITY: NormalForm = ()


class MissingTableError(AnalysisError, ValueError):
    """Algún vértice no tiene tabla de multiplicación"""


class InvalidElementError(AnalysisError, ValueError):
    """Sílaba con vértice o índice de elemento inválido"""


class BallCapExceededError(AnalysisError):
    """La bola de Cayley supera el límite de elementos configurado"""


class EstimateKind(Enum):
    ZERO = "zero"
    ONE = "one"
    TWO = "two"
    MANY = "many"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class SubgroupOrder:
    """Orden exacto, o None si la clausura superó la cota"""
    order: Optional[int]
    bound: int

    @property
    def exceeds_bound(self) -> bool:
        return self.order is None


@dataclass
class CayleyBall:
    """Bola del grafo de Cayley: capas por distancia y aristas (i < j) entre índices"""
    layers: List[List[NormalForm]]
    edges: List[Tuple[int, int]] = field(default_factory=list)
    closed: bool = False

    @property
    def elements(self) -> List[NormalForm]:
        return [x for layer in self.layers for x in layer]

    @property
    def layer_sizes(self) -> List[int]:
        return [len(layer) for layer in self.layers]

    def __len__(self) -> int:
        return sum(self.layer_sizes)


@dataclass(frozen=True)
class EndsEstimate:
    kind: EstimateKind
    order: Optional[int] = None
    counts: Tuple[Tuple[int, int], ...] = ()


class GraphProductOracle:
    """Aritmética exacta en un producto de grafos de grupos finitos"""

    def __init__(self, graph: ProductGraph):
        missing = [v.name for v in graph.vertices if v.table is None]
        if missing:
            raise MissingTableError(f"Vértices sin tabla de multiplicación: {', '.join(missing)}")
        self.graph = graph
        self.tables: Dict[str, FiniteGroupTable] = {v.name: v.table for v in graph.vertices}
        self.generators: Tuple[Syllable, ...] = tuple(
            (v.name, e) for v in graph.vertices for e in v.table.non_identity()
        )

    # -- formas normales ----------------------------------------------

    def _validate(self, word: Iterable[Syllable]) -> List[Syllable]:
        syllables = []
        for vertex, element in word:
            table = self.tables.get(vertex)
            if table is None:
                raise InvalidElementError(f"Sílaba con vértice desconocido: {vertex!r}")
            if not isinstance(element, int) or not 0 <= element < len(table):
                raise InvalidElementError(f"Índice de elemento inválido para {vertex}: {element!r}")
            syllables.append((vertex, element))
        return syllables

    def _append(self, stack: List[Syllable], syllable: Syllable):
        """
        Agrega una sílaba a una palabra reducida. La sílaba se desplaza hacia
        la izquierda mientras conmute; si encuentra otra del mismo vértice se
        fusionan por la tabla (y se elimina si el producto es la identidad).
        """
        vertex, element = syllable
        if element == 0:
            return
        neighbors = self.graph.adjacency[vertex]
        j = len(stack) - 1
        while j >= 0:
            other, value = stack[j]
            if other == vertex:
                merged = self.tables[vertex].mult(value, element)
                if merged == 0:
                    del stack[j]
                else:
                    stack[j] = (vertex, merged)
                return
            if other not in neighbors:
                break
            j -= 1
        stack.append(syllable)

    def _canonicalize(self, stack: Sequence[Syllable]) -> NormalForm:
        # Izquierda-codicioso: en cada paso la sílaba de menor vértice que puede ir al frente
        remaining = list(stack)
        result: List[Syllable] = []
        index = self.graph.index
        while remaining:
            best = None
            for i, (vertex, _) in enumerate(remaining):
                neighbors = self.graph.adjacency[vertex]
                if all(prev in neighbors for prev, _ in remaining[:i]):
                    if best is None or index[vertex] < index[remaining[best][0]]:
                        best = i
            result.append(remaining.pop(best))
        return tuple(result)

    def reduce(self, word: Iterable[Syllable]) -> NormalForm:
        stack: List[Syllable] = []
        for syllable in self._validate(word):
            self._append(stack, syllable)
        return self._canonicalize(stack)

    def multiply(self, x: Sequence[Syllable], y: Sequence[Syllable]) -> NormalForm:
        return self.reduce(tuple(x) + tuple(y))

    def inverse(self, x: Sequence[Syllable]) -> NormalForm:
        syllables = self._validate(x)
        return self.reduce((v, self.tables[v].inv(e)) for v, e in reversed(syllables))

    def _right_multiply(self, x: NormalForm, syllable: Syllable) -> NormalForm:
        """
        x · sílaba con x ya canónica. La sílaba retrocede por el sufijo de x
        que conmuta con ella: se fusiona con una sílaba de su mismo vértice o
        se inserta antes de la primera sílaba de índice mayor, lo que conserva
        la forma lexicográficamente mínima. Sólo una cancelación completa
        obliga a recanonicalizar.
        """
        vertex, element = syllable
        if element == 0:
            return x
        neighbors = self.graph.adjacency[vertex]
        j = len(x)
        while j > 0 and x[j - 1][0] in neighbors:
            j -= 1
        if j > 0 and x[j - 1][0] == vertex:
            merged = self.tables[vertex].mult(x[j - 1][1], element)
            if merged != 0:
                return x[:j - 1] + ((vertex, merged),) + x[j:]
            return self._canonicalize(x[:j - 1] + x[j:])

        index = self.graph.index
        rank = index[vertex]
        k = j
        while k < len(x) and index[x[k][0]] < rank:
            k += 1
        return x[:k] + (syllable,) + x[k:]

    # -- enumeraciones ------------------------------------------------

    def subgroup_order(self, s: Iterable[str], bound: Optional[int] = None) -> SubgroupOrder:
        """Clausura BFS bajo los generadores de los vértices de s"""
        bound = config.oracle.subgroup_bound if bound is None else bound
        members = set(self.graph.ordered(s))
        gens = [syl for syl in self.generators if syl[0] in members]
        seen = {IDENTITY}
        frontier = [IDENTITY]
        while frontier:
            nxt = []
            for x in frontier:
                for gen in gens:
                    y = self._right_multiply(x, gen)
                    if y not in seen:
                        seen.add(y)
                        if len(seen) > bound:
                            return SubgroupOrder(None, bound)
                        nxt.append(y)
            frontier = nxt
        return SubgroupOrder(len(seen), bound)

    def cayley_ball(self, radius: int, cap: Optional[int] = None, with_edges: bool = True) -> CayleyBall:
        """Bola exacta de la métrica de palabras; orden determinista por BFS"""
        cap = config.oracle.ball_cap if cap is None else cap
        start = time.perf_counter()
        position: Dict[NormalForm, int] = {IDENTITY: 0}
        layers: List[List[NormalForm]] = [[IDENTITY]]
        edges = set()
        closed = False
        escaped = False

        for r in range(radius + 1):
            nxt: List[NormalForm] = []
            for x in layers[r]:
                i = position[x]
                for gen in self.generators:
                    y = self._right_multiply(x, gen)
                    j = position.get(y)
                    if j is None:
                        if r == radius:
                            escaped = True
                            continue
                        j = len(position)
                        if j >= cap:
                            raise BallCapExceededError(
                                f"La bola de radio {radius} supera el límite de {cap} elementos"
                            )
                        position[y] = j
                        nxt.append(y)
                    if with_edges and i != j:
                        edges.add((min(i, j), max(i, j)))
            if r == radius:
                closed = not escaped
                break
            if not nxt:
                closed = True
                break
            layers.append(nxt)

        performance_logger.log_enumeration(
            "cayley_ball", explored=len(position), duration_seconds=time.perf_counter() - start, radius=radius
        )
        return CayleyBall(layers, sorted(edges), closed)

    def ball_sizes(self, radius: int) -> List[int]:
        """Tamaños de las esferas 0..radius"""
        sizes = self.cayley_ball(radius, with_edges=False).layer_sizes
        return sizes + [0] * (radius + 1 - len(sizes))

    def estimate_ends(self, inner: Optional[int] = None, outer: Optional[int] = None,
                      stability: Optional[int] = None, cap: Optional[int] = None) -> EndsEstimate:
        """
        Estimación empírica del número de finales. Para R = inner+1..outer se
        cuentan las componentes de B_R ∖ B_inner que tocan la esfera de radio R;
        si la cuenta es constante en los últimos `stability` radios se
        traduce a 1, 2 o muchos finales.
        """
        inner = config.oracle.inner if inner is None else inner
        outer = config.oracle.outer if outer is None else outer
        stability = config.oracle.stability if stability is None else stability
        if not 0 <= inner < outer:
            raise ValueError("estimate_ends requiere 0 <= inner < outer")
        if stability < 1:
            raise ValueError("stability debe ser positivo")

        ball = self.cayley_ball(outer, cap)
        if ball.closed:
            return EndsEstimate(EstimateKind.ZERO, order=len(ball))

        offsets = [0]
        for size in ball.layer_sizes:
            offsets.append(offsets[-1] + size)
        distance = {}
        for r in range(len(ball.layers)):
            for i in range(offsets[r], offsets[r + 1]):
                distance[i] = r

        incident: Dict[int, List[int]] = {}
        for i, j in ball.edges:
            incident.setdefault(i, []).append(j)
            incident.setdefault(j, []).append(i)

        components = UnionFind()
        counts: List[Tuple[int, int]] = []
        for radius in range(inner + 1, outer + 1):
            sphere = range(offsets[radius], offsets[radius + 1])
            for i in sphere:
                components[i]
                for j in incident.get(i, ()):
                    if inner < distance[j] <= radius:
                        components.union(i, j)
            counts.append((radius, len({components[i] for i in sphere})))

        tail = [c for _, c in counts[-stability:]]
        if len(set(tail)) != 1:
            kind = EstimateKind.INCONCLUSIVE
        elif tail[0] == 1:
            kind = EstimateKind.ONE
        elif tail[0] == 2:
            kind = EstimateKind.TWO
        elif tail[0] >= 3:
            kind = EstimateKind.MANY
        else:
            kind = EstimateKind.INCONCLUSIVE

        logger.debug("Estimación de finales", kind=kind.value, counts=counts)
        return EndsEstimate(kind, counts=tuple(counts))


# Funciones de módulo

def reduce(g: ProductGraph, word: Iterable[Syllable]) -> NormalForm:
    return GraphProductOracle(g).reduce(word)


def multiply(g: ProductGraph, x: Sequence[Syllable], y: Sequence[Syllable]) -> NormalForm:
    return GraphProductOracle(g).multiply(x, y)


def inverse(g: ProductGraph, x: Sequence[Syllable]) -> NormalForm:
    return GraphProductOracle(g).inverse(x)


def subgroup_order(g: ProductGraph, s: Iterable[str], bound: Optional[int] = None) -> SubgroupOrder:
    return GraphProductOracle(g).subgroup_order(s, bound)


def cayley_ball(g: ProductGraph, radius: int, cap: Optional[int] = None) -> CayleyBall:
    return GraphProductOracle(g).cayley_ball(radius, cap)


def ball_sizes(g: ProductGraph, radius: int) -> List[int]:
    return GraphProductOracle(g).ball_sizes(radius)


def estimate_ends(g: ProductGraph, inner: Optional[int] = None, outer: Optional[int] = None,
                  stability: Optional[int] = None, cap: Optional[int] = None) -> EndsEstimate:
    return GraphProductOracle(g).estimate_ends(inner, outer, stability, cap)
