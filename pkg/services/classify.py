"""
Clasificadores analíticos del producto de grafos:
- número de finales (escisión visual sobre un separador completo finito, o
  grafo completo con un único factor infinito de varios finales)
- semiestabilidad del grupo fundamental en el infinito (criterio del vértice
  malo: G_v no semiestable y link completo con grupos finitos)

Todos los resultados usan lógica trivalente y se aplican a cualquier subgrafo
pleno a través de AnalysisSession, que memoiza por subconjunto de vértices.
"""

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple

from services.graph_core import (
    AnalysisError,
    Ends,
    ProductGraph,
    Separator,
    SubgraphRef,
    Tri,
    find_finite_complete_separators,
    is_complete,
    spans_finite_subgroup,
)
from utils.logging_config import get_logger, performance_logger

logger = get_logger("classify")


class NotFinitelyPresentedError(AnalysisError, ValueError):
    """El criterio de semiestabilidad exige grupos de vértice finitamente presentados"""


class EmptyGraphError(AnalysisError, ValueError):
    """Grafo vacío cuando el llamador no acepta la convención del grupo trivial"""


class EndsKind(Enum):
    ZERO = "zero"
    ONE = "one"
    MORE_THAN_ONE = "more_than_one"
    UNKNOWN = "unknown"


class SemistabilityStatus(Enum):
    SEMISTABLE = "semistable"
    NOT_SEMISTABLE = "not_semistable"
    UNKNOWN = "unknown"

    def as_tri(self) -> Tri:
        return {
            SemistabilityStatus.SEMISTABLE: Tri.YES,
            SemistabilityStatus.NOT_SEMISTABLE: Tri.NO,
            SemistabilityStatus.UNKNOWN: Tri.UNKNOWN,
        }[self]


@dataclass(frozen=True)
class BadVertices:
    definite: SubgraphRef = ()
    potential: SubgraphRef = ()


@dataclass(frozen=True)
class EndsVerdict:
    kind: EndsKind
    separator: Optional[Separator] = None
    vertex: Optional[str] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class SemistabilityVerdict:
    status: SemistabilityStatus
    witness: Optional[str] = None
    bad_vertices: SubgraphRef = ()
    potential_bad_vertices: SubgraphRef = ()
    componentwise: bool = False
    component_count: int = 0


@dataclass(frozen=True)
class GraphReport:
    """Reporte combinado de finales y semiestabilidad de un subgrafo"""
    subject: SubgraphRef
    ends: EndsVerdict
    semistability: SemistabilityVerdict
    notes: Tuple[str, ...] = ()


class AnalysisSession:
    """
    Sesión de análisis sobre un grafo fijo. Los resultados se memoizan por
    subconjunto de vértices; una sesión no se comparte entre hilos.
    """

    def __init__(self, graph: ProductGraph):
        self.graph = graph
        self._bad: Dict[FrozenSet[str], BadVertices] = {}
        self._semistability: Dict[FrozenSet[str], SemistabilityVerdict] = {}
        self._ends: Dict[FrozenSet[str], EndsVerdict] = {}

    def _key(self, s: Optional[Iterable[str]]) -> Tuple[SubgraphRef, FrozenSet[str]]:
        scope = self.graph.scope(s)
        return scope, frozenset(scope)

    # -- vértices malos -----------------------------------------------

    def bad_vertices(self, s: Optional[Iterable[str]] = None) -> BadVertices:
        scope, key = self._key(s)
        if key in self._bad:
            return self._bad[key]

        definite, potential = [], []
        members = set(scope)
        for v in scope:
            status = self.graph.vertex(v).semistable
            if status is Tri.YES:
                continue
            # link de v dentro del subgrafo
            if spans_finite_subgroup(self.graph, self.graph.adjacency[v] & members) is not Tri.YES:
                continue
            (definite if status is Tri.NO else potential).append(v)

        result = BadVertices(tuple(definite), tuple(potential))
        self._bad[key] = result
        return result

    # -- semiestabilidad ----------------------------------------------

    def semistability_of(self, s: Optional[Iterable[str]] = None) -> SemistabilityVerdict:
        scope, key = self._key(s)
        if key in self._semistability:
            return self._semistability[key]

        not_fp = [v for v in scope if not self.graph.vertex(v).finitely_presented]
        if not_fp:
            raise NotFinitelyPresentedError(
                f"Vértices sin presentación finita: {', '.join(not_fp)}"
            )

        # El link se calcula dentro del subgrafo: cada componente se evalúa por separado
        bad = self.bad_vertices(None if s is None else scope)
        components = self.graph.components(None if s is None else scope)
        if bad.definite:
            status = SemistabilityStatus.NOT_SEMISTABLE
        elif bad.potential:
            status = SemistabilityStatus.UNKNOWN
        else:
            status = SemistabilityStatus.SEMISTABLE

        verdict = SemistabilityVerdict(
            status=status,
            witness=bad.definite[0] if bad.definite else None,
            bad_vertices=bad.definite,
            potential_bad_vertices=bad.potential,
            componentwise=len(components) > 1,
            component_count=len(components),
        )
        self._semistability[key] = verdict
        return verdict

    # -- finales ------------------------------------------------------

    def ends_of(self, s: Optional[Iterable[str]] = None, allow_empty: bool = True) -> EndsVerdict:
        scope, key = self._key(s)
        if key in self._ends:
            return self._ends[key]

        if not scope:
            if not allow_empty:
                raise EmptyGraphError("ends_of requiere un grafo no vacío")
            return EndsVerdict(EndsKind.ZERO, note="trivial group")

        if is_complete(self.graph, scope):
            verdict = self._ends_of_complete(scope)
        else:
            separators = find_finite_complete_separators(self.graph, within=scope)
            if separators:
                verdict = EndsVerdict(EndsKind.MORE_THAN_ONE, separator=separators[0])
            else:
                verdict = EndsVerdict(EndsKind.ONE)

        self._ends[key] = verdict
        return verdict

    def _ends_of_complete(self, scope: SubgraphRef) -> EndsVerdict:
        # Producto directo de los grupos de vértice
        infinite = [v for v in scope if not self.graph.vertex(v).is_finite]
        if not infinite:
            return EndsVerdict(EndsKind.ZERO)
        if len(infinite) >= 2:
            return EndsVerdict(EndsKind.ONE, note="product of infinite groups")

        v = infinite[0]
        ends = self.graph.vertex(v).ends
        if ends is Ends.ONE:
            return EndsVerdict(EndsKind.ONE, vertex=v)
        if ends.is_multi:
            return EndsVerdict(EndsKind.MORE_THAN_ONE, vertex=v)
        return EndsVerdict(EndsKind.UNKNOWN, vertex=v)

    # -- consultas compuestas -----------------------------------------

    def one_ended_and_semistable(self, s: Iterable[str]) -> Tri:
        ends = self.ends_of(s)
        ends_tri = {
            EndsKind.ONE: Tri.YES,
            EndsKind.UNKNOWN: Tri.UNKNOWN,
        }.get(ends.kind, Tri.NO)
        if ends_tri is Tri.NO:
            return Tri.NO
        try:
            ss_tri = self.semistability_of(s).status.as_tri()
        except NotFinitelyPresentedError:
            ss_tri = Tri.UNKNOWN
        return ends_tri & ss_tri

    def classify(self, s: Optional[Iterable[str]] = None) -> GraphReport:
        scope = self.graph.scope(s)
        start = time.perf_counter()
        ends = self.ends_of(scope)
        semistability = self.semistability_of(scope)
        notes = []
        if semistability.componentwise:
            notes.append("componentwise extension")
        if ends.note:
            notes.append(ends.note)
        performance_logger.log_operation_time("classify", time.perf_counter() - start, vertex_count=len(scope))
        return GraphReport(scope, ends, semistability, tuple(notes))

    def corollary_checks(self, s: Optional[Iterable[str]] = None) -> List[str]:
        """
        Implicaciones que deben cumplirse siempre (devuelve las violaciones):
        todos los vértices semiestables implica semiestable; un final y grafo
        no completo implica semiestable.
        """
        scope = self.graph.scope(s)
        violations = []
        status = self.semistability_of(scope).status
        if all(self.graph.vertex(v).semistable is Tri.YES for v in scope):
            if status is not SemistabilityStatus.SEMISTABLE:
                violations.append("all vertex groups semistable but verdict is not semistable")
        if self.ends_of(scope).kind is EndsKind.ONE and not is_complete(self.graph, scope):
            if status is SemistabilityStatus.NOT_SEMISTABLE:
                violations.append("one-ended non-complete graph classified as not semistable")
        return violations


# ---------------------------------------------------------------------------
# Funciones de módulo (sesión desechable)
# ---------------------------------------------------------------------------

def bad_vertices(g: ProductGraph) -> BadVertices:
    return AnalysisSession(g).bad_vertices()


def semistability_of(g: ProductGraph) -> SemistabilityVerdict:
    return AnalysisSession(g).semistability_of()


def ends_of(g: ProductGraph) -> EndsVerdict:
    return AnalysisSession(g).ends_of()


def one_ended_and_semistable(g: ProductGraph, s: Iterable[str]) -> Tri:
    return AnalysisSession(g).one_ended_and_semistable(s)


def classify_graph(g: ProductGraph) -> GraphReport:
    return AnalysisSession(g).classify()


def corollary_checks(g: ProductGraph) -> List[str]:
    return AnalysisSession(g).corollary_checks()
