"""
Pruebas del verificador y del generador de certificados
"""

import re
import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from services.catalog import builtin_catalog, palette_instances
from services.certify import (
    RULES,
    CertSearchExhausted,
    Certificate,
    CertificateBuilder,
    MalformedCertificateError,
    Rule,
    UnknownVerdictError,
    build_certificate,
    certificate_from_json,
    certificate_mutations,
    certificate_to_json,
    check_certificate,
    export_certificate_dot,
)
from services.classify import AnalysisSession, SemistabilityStatus
from services.graph_core import ProductGraph
from utils.schemas import schema_errors

SS = SemistabilityStatus.SEMISTABLE
NOT_SS = SemistabilityStatus.NOT_SEMISTABLE

# Reglas sin premisas de certificado: la anotación del vértice o el producto directo
TERMINAL_RULES = {Rule.LEAF_VERTEX, Rule.PRODUCT}

DOT_LINE = re.compile(r'^  (n\d+ \[label="[^"]*"\];|n\d+ -> n\d+;|node \[shape=box\];)$')


def _leaf(v, verdict):
    return Certificate.make((v,), verdict, Rule.LEAF_VERTEX, vertex=(v,))


def _dot_is_well_formed(text):
    lines = text.rstrip("\n").split("\n")
    return (lines[0] == "digraph certificate {" and lines[-1] == "}"
            and all(DOT_LINE.match(line) for line in lines[1:-1]))


class TestChecker:
    """Pruebas de check_certificate"""

    def test_leaf_not_semistable(self, make_graph):
        g = make_graph({"v": "N"})
        assert check_certificate(g, _leaf("v", NOT_SS)).accepted

    def test_leaf_must_match_annotation(self, make_graph):
        g = make_graph({"v": "N"})
        report = check_certificate(g, _leaf("v", SS))
        assert not report.accepted
        assert report.first_violation.condition == "annotation_matches"
        assert report.first_violation.path == "root"

    def test_leaf_with_unknown_annotation(self, make_graph):
        g = make_graph({"u": "U"})
        assert not check_certificate(g, _leaf("u", SS)).accepted
        assert not check_certificate(g, _leaf("u", NOT_SS)).accepted

    def test_product_over_edge(self, make_graph):
        g = make_graph({"v": "N", "w": "O"}, [("v", "w")])
        cert = Certificate.make(("v", "w"), SS, Rule.PRODUCT, factor1=("v",), factor2=("w",))
        assert check_certificate(g, cert).accepted

    def test_product_is_terminal(self, make_graph):
        """Product no lleva sub-certificados: un hijo es una violación de aridad"""
        g = make_graph({"v": "N", "w": "O"}, [("v", "w")])
        cert = Certificate.make(("v", "w"), SS, Rule.PRODUCT, [_leaf("w", SS)], factor1=("v",), factor2=("w",))
        report = check_certificate(g, cert)
        assert not report.accepted
        assert report.first_violation.condition == "arity"
        assert {rule.rule for rule in RULES.values() if rule.arity == 0} == TERMINAL_RULES

    def test_product_needs_infinite_factors(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        cert = Certificate.make(("v", "w"), SS, Rule.PRODUCT, factor1=("v",), factor2=("w",))
        report = check_certificate(g, cert)
        assert not report.accepted
        assert report.first_violation.condition == "infinite_factors"

    def test_amalgam_with_cross_edge(self, make_graph):
        """A∖C y B∖C comparten una arista: no es una escisión visual"""
        g = make_graph({"a": "O", "b": "O", "c": "O"}, [("a", "b"), ("b", "c"), ("a", "c")])
        cert = Certificate.make(
            ("a", "b", "c"), SS, Rule.AMALGAM_SS,
            [Certificate.make(("a", "b"), SS, Rule.PRODUCT, factor1=("a",), factor2=("b",)),
             Certificate.make(("b", "c"), SS, Rule.PRODUCT, factor1=("b",), factor2=("c",))],
            A=("a", "b"), B=("b", "c"), C=("b",),
        )
        report = check_certificate(g, cert)
        assert not report.accepted
        assert report.first_violation.condition == "no_cross_edges"

    def test_finite_index_with_wrong_child(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        cert = Certificate.make(("v", "w"), NOT_SS, Rule.FINITE_INDEX, [_leaf("w", SS)],
                                core=("v",), finite_partner=("w",))
        report = check_certificate(g, cert)
        assert not report.accepted
        assert report.first_violation.condition.startswith("child")

    def test_union_requires_proper_sides(self, make_graph):
        g = make_graph({"a": "O", "b": "O"}, [("a", "b")])
        product = Certificate.make(("a", "b"), SS, Rule.PRODUCT, factor1=("a",), factor2=("b",))
        cert = Certificate.make(("a", "b"), SS, Rule.UNION_MM, [product, product], A=("a", "b"), B=("a", "b"))
        report = check_certificate(g, cert)
        assert report.first_violation.condition == "proper_sides"

    def test_wrong_arity_is_rejected(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        cert = Certificate.make(("v", "w"), NOT_SS, Rule.FINITE_INDEX, [], core=("v",), finite_partner=("w",))
        assert check_certificate(g, cert).first_violation.condition == "arity"

    def test_failure_path_points_to_child(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        child = Certificate.make(("v",), NOT_SS, Rule.LEAF_VERTEX, vertex=("w",))
        cert = Certificate.make(("v", "w"), NOT_SS, Rule.FINITE_INDEX, [child],
                                core=("v",), finite_partner=("w",))
        report = check_certificate(g, cert)
        assert report.first_violation.path == "root/0"
        assert report.first_violation.condition == "subject"

    def test_unknown_vertex_is_malformed(self, make_graph):
        g = make_graph({"v": "N"})
        with pytest.raises(MalformedCertificateError):
            check_certificate(g, _leaf("z", NOT_SS))

    def test_missing_parameter_is_malformed(self, make_graph):
        g = make_graph({"v": "N"})
        cert = Certificate.make(("v",), NOT_SS, Rule.LEAF_VERTEX)
        with pytest.raises(MalformedCertificateError):
            check_certificate(g, cert)

    def test_every_rule_is_registered(self):
        assert set(RULES) == set(Rule)
        assert RULES[Rule.AMALGAM_SS].arity == 2
        assert RULES[Rule.SPLIT_NON_SS].arity == 1


class TestBuilder:
    """Pruebas de build_certificate"""

    def test_single_non_semistable_vertex(self, make_graph):
        cert = build_certificate(make_graph({"v": "N"}))
        assert cert.rule is Rule.LEAF_VERTEX
        assert cert.verdict is NOT_SS

    def test_edge_with_finite_partner(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        cert = build_certificate(g)
        assert cert.rule is Rule.FINITE_INDEX
        assert cert.param("core") == ("v",)
        assert cert.param("finite_partner") == ("w",)
        assert cert.children[0].rule is Rule.LEAF_VERTEX
        assert cert.verdict is NOT_SS

    def test_edge_with_infinite_partner(self, make_graph):
        g = make_graph({"v": "N", "w": "O"}, [("v", "w")])
        cert = build_certificate(g)
        assert cert.rule is Rule.PRODUCT
        assert cert.children == ()
        assert {cert.param("factor1"), cert.param("factor2")} == {("v",), ("w",)}
        assert cert.verdict is SS

    def test_isolated_bad_vertex(self, make_graph):
        g = make_graph({"v": "N", "a": "O", "b": "O"}, [("a", "b")])
        cert = build_certificate(g)
        assert cert.rule is Rule.SPLIT_NON_SS
        assert cert.children[0].rule is Rule.LEAF_VERTEX

    def test_square_of_non_semistable_groups(self, make_graph):
        """Sin vértices malos: las estrellas se unen y el certificado es aceptado"""
        g = make_graph({"a": "N", "b": "N", "c": "N", "d": "N"},
                       [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        cert = build_certificate(g)
        assert cert.verdict is SS
        assert check_certificate(g, cert).accepted

    def test_unknown_verdict(self, make_graph):
        g = make_graph({"u": "U", "w": "F"}, [("u", "w")])
        with pytest.raises(UnknownVerdictError):
            build_certificate(g)

    def test_empty_graph(self):
        with pytest.raises(CertSearchExhausted):
            build_certificate(ProductGraph())

    def test_subgraph_build(self, make_graph):
        g = make_graph({"v": "N", "w": "O", "f": "F"}, [("v", "w"), ("v", "f")])
        cert = CertificateBuilder(g).build(["v", "f"])
        assert cert.verdict is NOT_SS
        assert set(cert.subject) == {"v", "f"}

    def test_catalog_instances(self):
        for instance in builtin_catalog():
            cert = build_certificate(instance.graph)
            assert cert.verdict is SS


class TestCompleteness:
    """El generador encuentra un certificado aceptado para toda la paleta"""

    def _check(self, g):
        session = AnalysisSession(g)
        cert = build_certificate(g, session)
        assert cert.verdict is session.semistability_of().status
        for _, node in cert.walk():
            assert node.verdict is session.semistability_of(node.subject).status
            if not node.children:
                assert node.rule in TERMINAL_RULES

    def test_palette_up_to_four_vertices(self):
        for g in palette_instances(4):
            self._check(g)

    @pytest.mark.slow
    def test_palette_five_and_six_vertices(self):
        for g in palette_instances(6, min_vertices=5):
            self._check(g)


class TestMutations:
    """Ninguna mutación aceptada contradice al clasificador"""

    def test_thousand_mutations(self):
        total = 0
        rejected = 0
        for g in palette_instances(4, min_vertices=2):
            session = AnalysisSession(g)
            cert = build_certificate(g, session)
            for mutated in certificate_mutations(cert, g.names):
                total += 1
                try:
                    report = check_certificate(g, mutated, session)
                except MalformedCertificateError:
                    rejected += 1
                    continue
                if not report.accepted:
                    rejected += 1
                    continue
                for _, node in mutated.walk():
                    assert node.verdict is session.semistability_of(node.subject).status
            if total >= 1500:
                break
        assert total >= 1000
        assert rejected > total // 2


class TestSerialization:
    """Pruebas de JSON y DOT"""

    def test_json_round_trip_and_schema(self, make_graph):
        g = make_graph({"a": "N", "b": "N", "c": "N", "d": "N"},
                       [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")])
        cert = build_certificate(g)
        document = certificate_to_json(cert)
        assert schema_errors(document, "cert-v1") == []
        assert certificate_from_json(document) == cert

    def test_from_json_rejects_bad_schema(self):
        with pytest.raises(MalformedCertificateError):
            certificate_from_json({"schema": "cert-v0", "root": {}})
        with pytest.raises(MalformedCertificateError):
            certificate_from_json({"rule": "Nope", "subject": [], "verdict": "semistable"})
        leaf = {"rule": "LeafVertex", "subject": ["v"], "verdict": "not_semistable",
                "params": {"vertex": ["v"]}, "children": [], "colour": "red"}
        with pytest.raises(MalformedCertificateError):
            certificate_from_json({"schema": "cert-v1", "root": leaf})

    def test_leaf_dot(self):
        dot = export_certificate_dot(_leaf("v", NOT_SS))
        assert dot.count("[label=") == 1
        assert "->" not in dot
        assert _dot_is_well_formed(dot)

    def test_finite_index_dot(self, make_graph):
        g = make_graph({"v": "N", "w": "F"}, [("v", "w")])
        dot = export_certificate_dot(build_certificate(g))
        assert dot.count("[label=") == 2
        assert dot.count("->") == 1
        assert "  n0 -> n1;" in dot

    def test_generated_dot_is_well_formed(self):
        for g in palette_instances(3):
            cert = build_certificate(g)
            dot = export_certificate_dot(cert)
            assert _dot_is_well_formed(dot)
            assert dot.count("[label=") == cert.node_count()


class _RecordingLogger:
    """Registra (nivel, evento) de cada llamada"""

    def __init__(self):
        self.calls = []

    def __getattr__(self, level):
        return lambda event, **kwargs: self.calls.append((level, event))


class TestLogging:
    """Las verificaciones por certificado no llenan stderr por encima de debug"""

    def test_check_and_build_log_at_debug(self, make_graph, monkeypatch):
        from utils.logging_config import analysis_logger, performance_logger

        analysis, performance = _RecordingLogger(), _RecordingLogger()
        monkeypatch.setattr(analysis_logger, "logger", analysis)
        monkeypatch.setattr(performance_logger, "logger", performance)

        g = make_graph({"v": "N", "w": "O"}, [("v", "w")])
        check_certificate(g, build_certificate(g))

        assert ("debug", "certificate_checked") in analysis.calls
        assert ("debug", "operation_performance") in performance.calls
        assert {level for level, _ in analysis.calls + performance.calls} == {"debug"}
