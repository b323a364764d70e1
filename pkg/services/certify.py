"""
Certificados de semiestabilidad verificables por máquina.

Un certificado es un árbol de aplicaciones de reglas de inferencia (teoremas
de combinación usados como axiomas). El verificador valida las condiciones
laterales de cada nodo sólo con hechos de adyacencia, finitud, finales y los
veredictos de los hijos; nunca consulta el criterio de semiestabilidad sobre
el sujeto del propio nodo. El generador busca un árbol aceptado siguiendo un
orden fijo de movimientos.
"""

import itertools
import time
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from services.classify import AnalysisSession, SemistabilityStatus
from services.graph_core import (
    AnalysisError,
    ProductGraph,
    SubgraphRef,
    Tri,
    UnknownVertexError,
    find_finite_complete_separators,
    link,
    separation_parts,
    spans_finite_subgroup,
    star,
)
from utils.config import config
from utils.logging_config import analysis_logger, get_logger, performance_logger
from utils.schemas import SchemaValidationError, validate_document

logger = get_logger("certify")

SS = SemistabilityStatus.SEMISTABLE
NOT_SS = SemistabilityStatus.NOT_SEMISTABLE


class UnknownVerdictError(AnalysisError):
    """No se certifica un veredicto Unknown"""


class CertSearchExhausted(AnalysisError):
    """La búsqueda no encontró un certificado aceptado dentro de los límites"""


class MalformedCertificateError(AnalysisError, ValueError):
    """Certificado con referencias a vértices inexistentes o parámetros faltantes"""


class Rule(Enum):
    LEAF_VERTEX = "LeafVertex"
    PRODUCT = "Product"
    FINITE_INDEX = "FiniteIndex"
    AMALGAM_SS = "AmalgamSS"
    UNION_MM = "UnionMM"
    SPLIT_NON_SS = "SplitNonSS"


@dataclass(frozen=True)
class Certificate:
    """Nodo del árbol: sujeto, veredicto, regla, argumentos y sub-certificados"""
    subject: SubgraphRef
    verdict: SemistabilityStatus
    rule: Rule
    params: Tuple[Tuple[str, SubgraphRef], ...] = ()
    children: Tuple["Certificate", ...] = ()

    @classmethod
    def make(cls, subject: Sequence[str], verdict: SemistabilityStatus, rule: Rule,
             children: Sequence["Certificate"] = (), **params: Sequence[str]) -> "Certificate":
        return cls(
            tuple(subject),
            verdict,
            rule,
            tuple(sorted((k, tuple(v)) for k, v in params.items())),
            tuple(children),
        )

    def param(self, name: str) -> SubgraphRef:
        for key, value in self.params:
            if key == name:
                return value
        raise MalformedCertificateError(f"Regla {self.rule.value}: falta el parámetro {name!r}")

    def walk(self, path: str = "root") -> Iterator[Tuple[str, "Certificate"]]:
        """Recorrido en preorden con rutas 'root/0/1'"""
        yield path, self
        for i, child in enumerate(self.children):
            yield from child.walk(f"{path}/{i}")

    def node_count(self) -> int:
        return sum(1 for _ in self.walk())


@dataclass(frozen=True)
class CheckViolation:
    path: str
    rule: str
    condition: str
    explanation: str


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    first_violation: Optional[CheckViolation] = None


# ---------------------------------------------------------------------------
# Reglas de inferencia
# ---------------------------------------------------------------------------

Failure = Tuple[str, str]


class InferenceRule:
    """Regla base: nombre, aridad, parámetros y condiciones laterales"""

    rule: Rule
    arity: int = 0
    param_names: Tuple[str, ...] = ()
    description: str = ""

    def check(self, ctx: "CertificateChecker", node: Certificate) -> List[Failure]:
        raise NotImplementedError

    # -- utilidades compartidas ---------------------------------------

    @staticmethod
    def cross_adjacent(ctx: "CertificateChecker", left: Iterable[str], right: Iterable[str]) -> bool:
        return all(ctx.graph.adjacent(u, w) for u in left for w in right)

    @staticmethod
    def child_matches(node: Certificate, index: int, subject: SubgraphRef,
                      verdict: Optional[SemistabilityStatus], label: str) -> List[Failure]:
        child = node.children[index]
        failures = []
        if set(child.subject) != set(subject):
            failures.append((f"{label}_subject", f"el sujeto del hijo {index} no es {list(subject)}"))
        if verdict is not None and child.verdict is not verdict:
            failures.append((f"{label}_verdict", f"el hijo {index} debe tener veredicto {verdict.value}"))
        return failures

    @staticmethod
    def separation(ctx: "CertificateChecker", subject: SubgraphRef, a: SubgraphRef,
                   b: SubgraphRef, c: SubgraphRef) -> List[Failure]:
        """Escisión visual: C = A ∩ B, A ∪ B = sujeto, sin aristas entre A∖C y B∖C"""
        sa, sb, sc = set(a), set(b), set(c)
        failures = []
        if sa & sb != sc:
            failures.append(("intersection", "C debe ser exactamente A ∩ B"))
        if sa | sb != set(subject):
            failures.append(("cover", "A ∪ B debe ser el sujeto"))
        only_a, only_b = sa - sc, sb - sc
        if not only_a or not only_b:
            failures.append(("proper_sides", "A∖C y B∖C deben ser no vacíos"))
        if any(ctx.graph.adjacent(u, w) for u in only_a for w in only_b):
            failures.append(("no_cross_edges", "hay aristas entre A∖C y B∖C"))
        return failures

    @staticmethod
    def finitely_presented(ctx: "CertificateChecker", refs: Iterable[str]) -> List[Failure]:
        if all(ctx.graph.vertex(v).finitely_presented for v in refs):
            return []
        return [("finitely_presented", "todos los grupos de vértice deben ser finitamente presentados")]


class LeafVertexRule(InferenceRule):
    rule = Rule.LEAF_VERTEX
    param_names = ("vertex",)
    description = "La anotación del vértice es la evidencia"

    def check(self, ctx, node):
        vertex = ctx.ref(node, "vertex")
        if len(vertex) != 1:
            return [("single_vertex", "LeafVertex requiere exactamente un vértice")]
        if set(node.subject) != set(vertex):
            return [("subject", "el sujeto de una hoja es su vértice")]
        flag = ctx.graph.vertex(vertex[0]).semistable
        if flag is Tri.UNKNOWN:
            return [("annotation_known", f"el vértice {vertex[0]} tiene semiestabilidad desconocida")]
        expected = SS if flag is Tri.YES else NOT_SS
        if node.verdict is not expected:
            return [("annotation_matches", f"la anotación de {vertex[0]} implica {expected.value}")]
        return []


class ProductRule(InferenceRule):
    rule = Rule.PRODUCT
    param_names = ("factor1", "factor2")
    description = "Producto directo de dos grupos infinitos f.p.: un final y semiestable"

    def check(self, ctx, node):
        f1, f2 = ctx.ref(node, "factor1"), ctx.ref(node, "factor2")
        failures = []
        if node.verdict is not SS:
            failures.append(("verdict", "Product sólo certifica semiestable"))
        if not f1 or not f2 or set(f1) & set(f2) or set(f1) | set(f2) != set(node.subject):
            failures.append(("partition", "el sujeto debe ser la unión disjunta de dos factores no vacíos"))
        if not self.cross_adjacent(ctx, f1, f2):
            failures.append(("join", "cada par factor1-factor2 debe ser adyacente"))
        if spans_finite_subgroup(ctx.graph, f1) is not Tri.NO or spans_finite_subgroup(ctx.graph, f2) is not Tri.NO:
            failures.append(("infinite_factors", "ambos factores deben generar subgrupos infinitos"))
        failures.extend(self.finitely_presented(ctx, node.subject))
        return failures


class FiniteIndexRule(InferenceRule):
    rule = Rule.FINITE_INDEX
    arity = 1
    param_names = ("core", "finite_partner")
    description = "Subgrupo de índice finito: la semiestabilidad se transfiere en ambos sentidos"

    def check(self, ctx, node):
        core, partner = ctx.ref(node, "core"), ctx.ref(node, "finite_partner")
        failures = []
        if not core or set(core) & set(partner) or set(core) | set(partner) != set(node.subject):
            failures.append(("partition", "el sujeto debe ser core ⊔ finite_partner con core no vacío"))
        if not self.cross_adjacent(ctx, core, partner):
            failures.append(("join", "cada par core-finite_partner debe ser adyacente"))
        if spans_finite_subgroup(ctx.graph, partner) is not Tri.YES:
            failures.append(("finite_partner", "finite_partner debe generar un subgrupo finito"))
        failures.extend(self.child_matches(node, 0, core, node.verdict, "child"))
        return failures


class AmalgamSSRule(InferenceRule):
    rule = Rule.AMALGAM_SS
    arity = 2
    param_names = ("A", "B", "C")
    description = "Amalgama de factores f.p. semiestables sobre un subgrupo f.g."

    def check(self, ctx, node):
        a, b, c = ctx.ref(node, "A"), ctx.ref(node, "B"), ctx.ref(node, "C")
        failures = []
        if node.verdict is not SS:
            failures.append(("verdict", "AmalgamSS sólo certifica semiestable"))
        failures.extend(self.separation(ctx, node.subject, a, b, c))
        failures.extend(self.finitely_presented(ctx, node.subject))
        failures.extend(self.child_matches(node, 0, a, SS, "childA"))
        failures.extend(self.child_matches(node, 1, b, SS, "childB"))
        return failures


class UnionMMRule(InferenceRule):
    rule = Rule.UNION_MM
    arity = 2
    param_names = ("A", "B")
    description = "Unión de subgrupos de un final semiestables con intersección infinita"

    def check(self, ctx, node):
        a, b = ctx.ref(node, "A"), ctx.ref(node, "B")
        subject = set(node.subject)
        failures = []
        if node.verdict is not SS:
            failures.append(("verdict", "UnionMM sólo certifica semiestable"))
        if set(a) | set(b) != subject:
            failures.append(("cover", "A ∪ B debe ser el sujeto"))
        if not (set(a) < subject and set(b) < subject):
            failures.append(("proper_sides", "A y B deben ser subconjuntos propios del sujeto"))
        else:
            for label, side in (("A", a), ("B", b)):
                if ctx.session.one_ended_and_semistable(side) is not Tri.YES:
                    failures.append((f"one_ended_{label}", f"⟨{label}⟩ debe ser de un final y semiestable"))
        common = [v for v in a if v in set(b)]
        if spans_finite_subgroup(ctx.graph, common) is not Tri.NO:
            failures.append(("infinite_intersection", "A ∩ B debe generar un subgrupo infinito"))
        failures.extend(self.child_matches(node, 0, a, SS, "childA"))
        failures.extend(self.child_matches(node, 1, b, SS, "childB"))
        return failures


class SplitNonSSRule(InferenceRule):
    rule = Rule.SPLIT_NON_SS
    arity = 1
    param_names = ("A", "B", "C")
    description = "Escisión sobre un subgrupo finito con un factor no semiestable"

    def check(self, ctx, node):
        a, b, c = ctx.ref(node, "A"), ctx.ref(node, "B"), ctx.ref(node, "C")
        failures = []
        if node.verdict is not NOT_SS:
            failures.append(("verdict", "SplitNonSS sólo certifica no semiestable"))
        failures.extend(self.separation(ctx, node.subject, a, b, c))
        if spans_finite_subgroup(ctx.graph, c) is not Tri.YES:
            failures.append(("finite_edge_group", "C debe generar un subgrupo finito"))
        failures.extend(self.finitely_presented(ctx, node.subject))
        failures.extend(self.child_matches(node, 0, a, NOT_SS, "childA"))
        return failures


RULES: Dict[Rule, InferenceRule] = {
    rule.rule: rule
    for rule in (LeafVertexRule(), ProductRule(), FiniteIndexRule(),
                 AmalgamSSRule(), UnionMMRule(), SplitNonSSRule())
}


# ---------------------------------------------------------------------------
# Verificador
# ---------------------------------------------------------------------------

class CertificateChecker:
    """Verifica certificados contra un grafo fijo"""

    def __init__(self, graph: ProductGraph, session: Optional[AnalysisSession] = None):
        self.graph = graph
        self.session = session or AnalysisSession(graph)

    def ref(self, node: Certificate, name: str) -> SubgraphRef:
        return self._resolve(node.param(name))

    def _resolve(self, names: Sequence[str]) -> SubgraphRef:
        try:
            return self.graph.ordered(names)
        except UnknownVertexError as e:
            raise MalformedCertificateError(str(e)) from e

    def check_node(self, node: Certificate) -> List[Failure]:
        """Condiciones laterales de un nodo (los hijos se tratan como hechos)"""
        self._resolve(node.subject)
        for child in node.children:
            self._resolve(child.subject)
        rule = RULES[node.rule]
        failures: List[Failure] = []
        if node.verdict not in (SS, NOT_SS):
            failures.append(("verdict_definite", "el veredicto debe ser semistable o not_semistable"))
        if len(node.children) != rule.arity:
            failures.append(("arity", f"{rule.rule.value} requiere {rule.arity} hijo(s)"))
            return failures
        failures.extend(rule.check(self, node))
        return failures

    def check(self, certificate: Certificate) -> CheckReport:
        for path, node in certificate.walk():
            failures = self.check_node(node)
            if failures:
                condition, explanation = failures[0]
                return CheckReport(False, CheckViolation(path, node.rule.value, condition, explanation))
        return CheckReport(True)


def check_certificate(g: ProductGraph, c: Certificate,
                      session: Optional[AnalysisSession] = None) -> CheckReport:
    report = CertificateChecker(g, session).check(c)
    violation = None
    if report.first_violation:
        violation = {"path": report.first_violation.path, "condition": report.first_violation.condition}
    analysis_logger.log_certificate(c.verdict.value, c.node_count(), report.accepted, violation)
    return report


# ---------------------------------------------------------------------------
# Generador
# ---------------------------------------------------------------------------

class CertificateBuilder:
    """
    Busca un certificado aceptado para cada subgrafo, memoizando por
    subconjunto. Cada movimiento se acepta sólo si pasa check_node.
    """

    def __init__(self, graph: ProductGraph, session: Optional[AnalysisSession] = None):
        self.graph = graph
        self.session = session or AnalysisSession(graph)
        self.checker = CertificateChecker(graph, self.session)
        self._memo: Dict[frozenset, Optional[Certificate]] = {}

    def build(self, s: Optional[Iterable[str]] = None) -> Certificate:
        scope = self.graph.scope(s)
        status = self.session.semistability_of(scope).status
        if status is SemistabilityStatus.UNKNOWN:
            raise UnknownVerdictError("No se puede certificar un veredicto desconocido")
        if not scope:
            raise CertSearchExhausted("El grafo vacío no admite certificado (no hay hojas)")

        start = time.perf_counter()
        certificate = self._certify(scope)
        performance_logger.log_operation_time(
            "build_certificate", time.perf_counter() - start,
            vertex_count=len(scope), explored=len(self._memo),
        )
        if certificate is None:
            raise CertSearchExhausted(f"No se encontró certificado para {list(scope)}")
        return certificate

    # -- búsqueda -----------------------------------------------------

    def _status(self, scope: Sequence[str]) -> SemistabilityStatus:
        return self.session.semistability_of(scope).status

    def _certify(self, scope: SubgraphRef) -> Optional[Certificate]:
        key = frozenset(scope)
        if key in self._memo:
            return self._memo[key]
        self._memo[key] = None

        status = self._status(scope)
        if status is SS:
            moves = self._semistable_moves(scope)
        elif status is NOT_SS:
            moves = self._not_semistable_moves(scope)
        else:
            moves = iter(())

        result = None
        for candidate in moves:
            if candidate is not None and not self.checker.check_node(candidate):
                result = candidate
                break
        self._memo[key] = result
        return result

    def _child(self, scope: Iterable[str], expected: SemistabilityStatus) -> Optional[Certificate]:
        scope = self.graph.ordered(scope)
        if not scope or self._status(scope) is not expected:
            return None
        return self._certify(scope)

    def _not_semistable_moves(self, scope: SubgraphRef) -> Iterator[Optional[Certificate]]:
        yield self._bad_vertex_move(scope)
        yield from self._componentwise_moves(scope, NOT_SS)
        yield from self._separator_moves(scope, NOT_SS)
        yield from self._exhaustive_moves(scope, NOT_SS)

    def _semistable_moves(self, scope: SubgraphRef) -> Iterator[Optional[Certificate]]:
        if len(scope) == 1:
            yield self._leaf(scope[0], SS)
            return
        yield from self._componentwise_moves(scope, SS)
        yield from self._star_moves(scope)
        yield self._all_semistable_move(scope)
        yield self._greedy_union_move(scope)
        yield from self._adjacent_pair_moves(scope)
        yield from self._separator_moves(scope, SS)
        yield from self._vertex_split_moves(scope)
        yield from self._exhaustive_moves(scope, SS)

    # -- movimientos --------------------------------------------------

    def _leaf(self, v: str, verdict: SemistabilityStatus) -> Certificate:
        return Certificate.make((v,), verdict, Rule.LEAF_VERTEX, vertex=(v,))

    def _bad_vertex_move(self, scope: SubgraphRef) -> Optional[Certificate]:
        bad = self.session.bad_vertices(scope).definite
        if not bad:
            return None
        v = bad[0]
        lk = link(self.graph, v, within=scope)
        st = star(self.graph, v, within=scope)
        local = self._leaf(v, NOT_SS)
        if lk:
            local = Certificate.make(st, NOT_SS, Rule.FINITE_INDEX, [local], core=(v,), finite_partner=lk)
        if len(st) == len(scope):
            return local
        rest = [u for u in scope if u != v]
        return Certificate.make(scope, NOT_SS, Rule.SPLIT_NON_SS, [local], A=st, B=rest, C=lk)

    def _split(self, scope: SubgraphRef, a: Sequence[str], b: Sequence[str], c: Sequence[str],
               verdict: SemistabilityStatus, certified_b: Optional[Certificate] = None) -> Optional[Certificate]:
        a, b, c = self.graph.ordered(a), self.graph.ordered(b), self.graph.ordered(c)
        if verdict is SS:
            child_a = self._child(a, SS)
            child_b = certified_b or (self._child(b, SS) if child_a else None)
            if child_a is None or child_b is None:
                return None
            return Certificate.make(scope, SS, Rule.AMALGAM_SS, [child_a, child_b], A=a, B=b, C=c)

        if spans_finite_subgroup(self.graph, c) is not Tri.YES:
            return None
        if self._status(a) is not NOT_SS:
            a, b = b, a
        child_a = self._child(a, NOT_SS)
        if child_a is None:
            return None
        return Certificate.make(scope, NOT_SS, Rule.SPLIT_NON_SS, [child_a], A=a, B=b, C=c)

    def _componentwise_moves(self, scope, verdict):
        components = self.graph.components(scope)
        if len(components) < 2:
            return
        for i, component in enumerate(components):
            rest = [v for other in components[:i] + components[i + 1:] for v in other]
            yield self._split(scope, component, rest, (), verdict)
            if verdict is SS:
                return

    def _star_moves(self, scope):
        for w in scope:
            lk = link(self.graph, w, within=scope)
            if len(lk) + 1 != len(scope):
                continue
            finite_link = spans_finite_subgroup(self.graph, lk)
            if not self.graph.vertex(w).is_finite and finite_link is Tri.NO:
                yield Certificate.make(scope, SS, Rule.PRODUCT, factor1=(w,), factor2=lk)
            elif finite_link is Tri.YES:
                yield Certificate.make(scope, SS, Rule.FINITE_INDEX, [self._leaf(w, SS)],
                                       core=(w,), finite_partner=lk)
            if self.graph.vertex(w).is_finite and lk:
                child = self._child(lk, SS)
                if child is not None:
                    yield Certificate.make(scope, SS, Rule.FINITE_INDEX, [child],
                                           core=lk, finite_partner=(w,))

    def _all_semistable_move(self, scope):
        if not all(self.graph.vertex(v).semistable is Tri.YES for v in scope):
            return None
        v = scope[0]
        st = star(self.graph, v, within=scope)
        if len(st) == len(scope):
            return None
        rest = [u for u in scope if u != v]
        return self._split(scope, rest, st, link(self.graph, v, within=scope), SS)

    def _star_product(self, w: str, scope: SubgraphRef) -> Optional[Certificate]:
        lk = link(self.graph, w, within=scope)
        if self.graph.vertex(w).is_finite or spans_finite_subgroup(self.graph, lk) is not Tri.NO:
            return None
        return Certificate.make(star(self.graph, w, within=scope), SS, Rule.PRODUCT,
                                factor1=(w,), factor2=lk)

    def _fold_stars(self, centers: Sequence[str], scope: SubgraphRef) -> Optional[Certificate]:
        """Une las estrellas de centros conectados con UnionMM en orden de inserción"""
        current: Optional[Certificate] = None
        for w in centers:
            piece = self._star_product(w, scope)
            if piece is None:
                return None
            if current is None:
                current = piece
                continue
            covered = set(current.subject)
            union = covered | set(piece.subject)
            if union == covered:
                continue
            if union == set(piece.subject):
                current = piece
                continue
            current = Certificate.make(self.graph.ordered(union), SS, Rule.UNION_MM, [current, piece],
                                       A=current.subject, B=piece.subject)
            if self.checker.check_node(current):
                return None
        return current

    def _close_union(self, scope: SubgraphRef, centers: Sequence[str],
                     union_cert: Optional[Certificate]) -> Optional[Certificate]:
        if union_cert is None:
            return None
        if len(union_cert.subject) == len(scope):
            return union_cert
        removed = set(centers)
        rest = [v for v in scope if v not in removed]
        boundary = [v for v in union_cert.subject if v not in removed]
        return self._split(scope, rest, union_cert.subject, boundary, SS, certified_b=union_cert)

    def _greedy_union_move(self, scope):
        candidates = [
            w for w in scope
            if self.graph.vertex(w).semistable is not Tri.YES and self._star_product(w, scope) is not None
        ]
        if not candidates:
            return None
        centers = [candidates[0]]
        while True:
            nxt = next((w for w in candidates if w not in centers
                        and any(self.graph.adjacent(w, c) for c in centers)), None)
            if nxt is None:
                break
            centers.append(nxt)
        if len(centers) < 2:
            return None
        return self._close_union(scope, centers, self._fold_stars(centers, scope))

    def _adjacent_pair_moves(self, scope):
        for v, w in itertools.combinations(scope, 2):
            if not self.graph.adjacent(v, w):
                continue
            if self._star_product(v, scope) is None or self._star_product(w, scope) is None:
                continue
            yield self._close_union(scope, (v, w), self._fold_stars((v, w), scope))

    def _separator_moves(self, scope, verdict):
        for separator in find_finite_complete_separators(self.graph, within=scope):
            if not separator.delta:
                continue
            first = set(separator.parts[0])
            rest = {v for part in separator.parts[1:] for v in part}
            yield self._split(scope, first | set(separator.delta), rest | set(separator.delta),
                              separator.delta, verdict)

    def _vertex_split_moves(self, scope):
        for v in scope:
            st = star(self.graph, v, within=scope)
            if len(st) == len(scope):
                continue
            rest = [u for u in scope if u != v]
            yield self._split(scope, rest, st, link(self.graph, v, within=scope), SS)

    def _exhaustive_moves(self, scope, verdict):
        if len(scope) > config.certificate.fallback_max_vertices:
            return
        for size in range(0, len(scope) - 1):
            for c in itertools.combinations(scope, size):
                parts = separation_parts(self.graph, c, scope)
                if len(parts) < 2:
                    continue
                first = set(parts[0])
                rest = {v for part in parts[1:] for v in part}
                yield self._split(scope, first | set(c), rest | set(c), c, verdict)


def build_certificate(g: ProductGraph, session: Optional[AnalysisSession] = None) -> Certificate:
    builder = CertificateBuilder(g, session)
    certificate = builder.build()
    report = check_certificate(g, certificate, builder.session)
    if not report.accepted:
        raise CertSearchExhausted(
            f"El certificado generado fue rechazado en {report.first_violation.path}: "
            f"{report.first_violation.explanation}"
        )
    return certificate


# ---------------------------------------------------------------------------
# Mutaciones (robustez del verificador)
# ---------------------------------------------------------------------------

def _replace_at(root: Certificate, indices: Sequence[int], node: Certificate) -> Certificate:
    if not indices:
        return node
    children = list(root.children)
    children[indices[0]] = _replace_at(children[indices[0]], indices[1:], node)
    return replace(root, children=tuple(children))


def _swap_first(ref: SubgraphRef, names: Sequence[str]) -> Optional[SubgraphRef]:
    outside = [v for v in names if v not in ref]
    if not ref or not outside:
        return None
    return (outside[0],) + tuple(ref[1:])


def certificate_mutations(c: Certificate, names: Sequence[str]) -> Iterator[Certificate]:
    """
    Mutaciones de un solo campo de cada nodo: veredicto invertido, primer
    vértice del sujeto o de un argumento cambiado por uno ausente, argumento
    sin su primer vértice y último hijo eliminado.
    """
    for path, node in c.walk():
        indices = [int(p) for p in path.split("/")[1:]]
        flipped = NOT_SS if node.verdict is SS else SS
        yield _replace_at(c, indices, replace(node, verdict=flipped))

        swapped = _swap_first(node.subject, names)
        if swapped is not None:
            yield _replace_at(c, indices, replace(node, subject=swapped))

        for i, (key, ref) in enumerate(node.params):
            params = list(node.params)
            swapped = _swap_first(ref, names)
            if swapped is not None:
                params[i] = (key, swapped)
                yield _replace_at(c, indices, replace(node, params=tuple(params)))
            if ref:
                params[i] = (key, ref[1:])
                yield _replace_at(c, indices, replace(node, params=tuple(params)))

        if node.children:
            yield _replace_at(c, indices, replace(node, children=node.children[:-1]))


# ---------------------------------------------------------------------------
# Serialización
# ---------------------------------------------------------------------------

def certificate_node_to_dict(c: Certificate) -> Dict[str, Any]:
    return {
        "rule": c.rule.value,
        "subject": list(c.subject),
        "verdict": c.verdict.value,
        "params": {key: list(value) for key, value in c.params},
        "children": [certificate_node_to_dict(child) for child in c.children],
    }


def certificate_to_json(c: Certificate) -> Dict[str, Any]:
    return {"schema": config.output.certificate_schema, "root": certificate_node_to_dict(c)}


def certificate_from_json(data: Dict[str, Any]) -> Certificate:
    """Lee cert-v1; acepta el documento completo o un nodo suelto"""
    if "root" in data:
        if data.get("schema") != config.output.certificate_schema:
            raise MalformedCertificateError(f"Esquema de certificado no soportado: {data.get('schema')!r}")
        try:
            validate_document(data, config.output.certificate_schema)
        except SchemaValidationError as e:
            raise MalformedCertificateError(str(e)) from e
        data = data["root"]
    try:
        rule = Rule(data["rule"])
        verdict = SemistabilityStatus(data["verdict"])
        params = {str(k): tuple(v) for k, v in data.get("params", {}).items()}
        children = [certificate_from_json(child) for child in data.get("children", [])]
        return Certificate.make(tuple(data["subject"]), verdict, rule, children, **params)
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, MalformedCertificateError):
            raise
        raise MalformedCertificateError(f"Nodo de certificado inválido: {e}") from e


def export_certificate_dot(c: Certificate) -> str:
    """Digrafo DOT con ids n0, n1, ... en preorden"""
    lines = ["digraph certificate {", "  node [shape=box];"]
    ids: Dict[str, str] = {}
    for path, node in c.walk():
        ids[path] = f"n{len(ids)}"
        subject = ", ".join(node.subject)
        label = f"{node.rule.value}\\n{{{subject}}}\\n{node.verdict.value}"
        lines.append(f'  {ids[path]} [label="{label}"];')
    for path, node in c.walk():
        for i in range(len(node.children)):
            lines.append(f"  {ids[path]} -> {ids[f'{path}/{i}']};")
    lines.append("}")
    return "\n".join(lines) + "\n"
