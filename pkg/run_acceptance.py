"""
Runner de aceptación: recorre la enumeración exhaustiva de grafos pequeños y
el catálogo con tablas, y contrasta clasificadores, certificados,
presentaciones y oráculo contra re-implementaciones independientes.
Uso: python run_acceptance.py [--max-vertices 6] [--mutations 1000]
"""

import itertools
import logging
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import click
from tqdm import tqdm

# Agregar el directorio raíz al path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))


def setup_environment():
    """Configura variables de entorno necesarias"""
    os.environ["PYTHONPATH"] = str(project_root)
    os.environ.setdefault("GPA_ENVIRONMENT", "local")


setup_environment()

from services.catalog import (
    builtin_catalog,
    connected_shapes,
    palette_instance_count,
    palette_instances,
    table_graph,
)
from services.certify import (
    CertSearchExhausted,
    MalformedCertificateError,
    build_certificate,
    certificate_mutations,
    check_certificate,
)
from services.classify import AnalysisSession, EndsKind, SemistabilityStatus, ends_of
from services.cross_checks import independent_bad_vertex, rewriting_ball_size
from services.graph_core import separation_parts
from services.oracle import EstimateKind, ball_sizes, estimate_ends
from services.presentations import (
    RetractionMismatchError,
    amalgam_presentations,
    retract_presentation,
    standard_presentation,
)
from utils.logging_config import configure_logging

AGREES = {
    EndsKind.ZERO: {EstimateKind.ZERO},
    EndsKind.ONE: {EstimateKind.ONE},
    EndsKind.MORE_THAN_ONE: {EstimateKind.TWO, EstimateKind.MANY},
}

GOLDEN_PATH3 = project_root / "tests" / "golden" / "path3_standard.txt"


@dataclass
class CriterionResult:
    number: int
    title: str
    checked: int
    failures: int
    seconds: float
    limit: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.failures == 0 and (not self.limit or self.seconds < self.limit)


def _progress(iterable, total, desc):
    return tqdm(iterable, total=total, desc=desc, unit="grafo", file=sys.stderr, leave=False)


def check_main_equivalence(max_vertices: int) -> CriterionResult:
    """NotSemistable exactamente cuando existe un vértice malo definido"""
    start = time.perf_counter()
    checked = failures = 0
    total = palette_instance_count(max_vertices)
    for g in _progress(palette_instances(max_vertices), total, "criterio 1"):
        status = AnalysisSession(g).semistability_of().status
        expected = (SemistabilityStatus.NOT_SEMISTABLE if independent_bad_vertex(g)
                    else SemistabilityStatus.SEMISTABLE)
        checked += 1
        failures += status is not expected
    return CriterionResult(1, "Equivalencia del criterio del vértice malo", checked, failures,
                           time.perf_counter() - start, limit=60.0)


def check_certificates(max_vertices: int) -> CriterionResult:
    """Cada instancia definida recibe un certificado aceptado con el veredicto correcto"""
    start = time.perf_counter()
    checked = failures = 0
    total = palette_instance_count(max_vertices)
    for g in _progress(palette_instances(max_vertices), total, "criterio 2"):
        session = AnalysisSession(g)
        checked += 1
        try:
            certificate = build_certificate(g, session)
        except CertSearchExhausted:
            failures += 1
            continue
        accepted = check_certificate(g, certificate, session).accepted
        if not accepted or certificate.verdict is not session.semistability_of().status:
            failures += 1
    return CriterionResult(2, "Solidez y completitud de certificados", checked, failures,
                           time.perf_counter() - start, limit=600.0)


def check_mutations(max_vertices: int, target: int) -> CriterionResult:
    """Ninguna mutación aceptada contradice al clasificador"""
    start = time.perf_counter()
    checked = rejected = contradictions = 0
    for g in palette_instances(max_vertices, min_vertices=2):
        session = AnalysisSession(g)
        certificate = build_certificate(g, session)
        for mutated in certificate_mutations(certificate, g.names):
            checked += 1
            try:
                report = check_certificate(g, mutated, session)
            except MalformedCertificateError:
                rejected += 1
                continue
            if not report.accepted:
                rejected += 1
                continue
            contradictions += any(node.verdict is not session.semistability_of(node.subject).status
                                  for _, node in mutated.walk())
        if checked >= target:
            break
    failures = contradictions + (checked < target)
    return CriterionResult(3, "Robustez del verificador ante mutaciones", checked, failures,
                           time.perf_counter() - start, detail=f"{rejected} rechazadas")


def check_oracle_ends(inner: int, outer: int) -> CriterionResult:
    """ends_of contra estimate_ends en el catálogo, cada instancia en menos de 10 s"""
    start = time.perf_counter()
    catalog = builtin_catalog()
    failures = 0
    slow = []
    for instance in tqdm(catalog, desc="criterio 4", unit="instancia", file=sys.stderr, leave=False):
        t0 = time.perf_counter()
        estimate = estimate_ends(instance.graph, inner=inner, outer=outer)
        elapsed = time.perf_counter() - t0
        analytic = ends_of(instance.graph).kind
        if estimate.kind not in AGREES.get(analytic, set()) or analytic is not instance.expected_ends:
            failures += 1
        if elapsed >= 10.0:
            failures += 1
            slow.append(instance.name)
    detail = f"lentas: {', '.join(slow)}" if slow else f"{len(catalog)} instancias"
    return CriterionResult(4, "Finales analíticos contra el oráculo", len(catalog), failures,
                           time.perf_counter() - start, detail=detail)


def check_corollaries(max_vertices: int) -> CriterionResult:
    """Las dos implicaciones de corollary_checks sobre la enumeración exhaustiva"""
    start = time.perf_counter()
    checked = failures = 0
    total = palette_instance_count(max_vertices)
    for g in _progress(palette_instances(max_vertices), total, "criterio 5"):
        checked += 1
        failures += bool(AnalysisSession(g).corollary_checks())
    return CriterionResult(5, "Implicaciones de semiestabilidad", checked, failures,
                           time.perf_counter() - start)


def check_presentations(max_vertices: int) -> CriterionResult:
    """Identidades de amalgama y retracción, y archivo de referencia del camino"""
    start = time.perf_counter()
    checked = failures = 0
    shapes = list(connected_shapes(max_vertices))
    for shape in tqdm(shapes, desc="criterio 6", unit="grafo", file=sys.stderr, leave=False):
        names = [chr(ord("a") + i) for i in sorted(shape.nodes)]
        g = table_graph(names, [(names[u], names[w]) for u, w in shape.edges])
        standard = standard_presentation(g)
        for size in range(len(g) + 1):
            for s in itertools.combinations(g.names, size):
                checked += 1
                try:
                    retract_presentation(g, s, full=standard)
                except RetractionMismatchError:
                    failures += 1
                if size < len(g) and len(separation_parts(g, s)) >= 2:
                    decomposition = amalgam_presentations(g, s)
                    if not (decomposition.generators_intersect_correctly()
                            and decomposition.relator_identity_holds(standard)):
                        failures += 1

    path3 = table_graph("abc", [("a", "b"), ("b", "c")])
    checked += 1
    if standard_presentation(path3).to_text() != GOLDEN_PATH3.read_text(encoding="utf-8"):
        failures += 1
    return CriterionResult(6, "Identidades de presentaciones", checked, failures,
                           time.perf_counter() - start)


def check_normal_forms(radius: int) -> CriterionResult:
    """Tamaños de bola del oráculo contra la clausura por reescritura"""
    start = time.perf_counter()
    catalog = builtin_catalog()
    failures = 0
    for instance in tqdm(catalog, desc="criterio 7", unit="instancia", file=sys.stderr, leave=False):
        for r in range(radius + 1):
            if sum(ball_sizes(instance.graph, r)) != rewriting_ball_size(instance.graph, r):
                failures += 1
    return CriterionResult(7, "Formas normales del oráculo", len(catalog) * (radius + 1), failures,
                           time.perf_counter() - start)


def print_results(results):
    print("\n" + "=" * 60)
    print("📊 RESULTADOS DE ACEPTACIÓN")
    print("=" * 60)
    for result in results:
        mark = "✅" if result.passed else "❌"
        timing = f"{result.seconds:.1f}s" + (f" / límite {result.limit:.0f}s" if result.limit else "")
        print(f"{mark} {result.number}. {result.title}")
        print(f"   casos: {result.checked}  fallos: {result.failures}  tiempo: {timing}")
        if result.detail:
            print(f"   {result.detail}")
    passed = sum(r.passed for r in results)
    print("=" * 60)
    print(f"{passed}/{len(results)} criterios superados")


@click.command()
@click.option("--max-vertices", type=click.IntRange(1, 7), default=6, show_default=True,
              help="Tamaño máximo de la enumeración exhaustiva")
@click.option("--mutations", type=click.IntRange(1), default=1000, show_default=True,
              help="Número mínimo de certificados mutados")
@click.option("--inner", type=click.IntRange(0), default=4, show_default=True)
@click.option("--outer", type=click.IntRange(1), default=12, show_default=True)
@click.option("--radius", type=click.IntRange(0), default=5, show_default=True,
              help="Radio máximo para contrastar formas normales")
def main(max_vertices, mutations, inner, outer, radius):
    """Ejecuta los criterios de aceptación del toolkit"""
    configure_logging(logging.WARNING)
    print("🔍 Ejecutando criterios de aceptación...")
    results = [
        check_main_equivalence(max_vertices),
        check_certificates(max_vertices),
        check_mutations(min(max_vertices, 4), mutations),
        check_oracle_ends(inner, outer),
        check_corollaries(max_vertices),
        check_presentations(max_vertices),
        check_normal_forms(radius),
    ]
    print_results(results)
    sys.exit(0 if all(r.passed for r in results) else 1)


if __name__ == "__main__":
    main()
