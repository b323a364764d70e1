"""
Pruebas de presentaciones estándar, escisiones visuales y retracciones
"""

import itertools
import sys
from pathlib import Path

import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from services.catalog import connected_shapes, racg, raag, table_graph
from services.graph_core import Ends, ProductGraph, Tri, VertexGroupInfo, VertexPresentation, separation_parts
from services.presentations import (
    MissingPresentationError,
    Presentation,
    PresentationFormatError,
    SeparationError,
    amalgam_presentations,
    check_finitely_presented,
    free_group_on,
    format_word,
    parse_word,
    retract_presentation,
    standard_presentation,
    vertex_presentation,
    word_letters,
)


def _shape_graph(shape):
    names = [chr(ord("a") + i) for i in sorted(shape.nodes)]
    edges = [(names[u], names[w]) for u, w in shape.edges]
    return table_graph(names, edges)


class TestWords:
    """Pruebas de lectura, escritura y reducción de palabras"""

    def test_parse_expands_exponents(self):
        group = free_group_on(["x", "y"])
        assert word_letters(parse_word("x^2 y^-1", group)) == (("x", 1), ("x", 1), ("y", -1))

    def test_parse_reduces(self):
        """x y y^-1 x^-1 es la palabra vacía"""
        group = free_group_on(["x", "y"])
        assert parse_word("x y y^-1 x^-1", group).is_identity
        assert parse_word("x^0", group).is_identity

    def test_parse_with_prefix(self):
        """Los símbolos locales se buscan calificados por el vértice"""
        group = free_group_on(["a.x"])
        assert format_word(parse_word("x^-2", group, prefix="a.")) == "a.x^-1 a.x^-1"

    def test_parse_rejects_garbage(self):
        group = free_group_on(["x"])
        with pytest.raises(PresentationFormatError):
            parse_word("x^^2", group)
        with pytest.raises(PresentationFormatError):
            parse_word("y", group)

    def test_format(self):
        group = free_group_on(["a.x", "b.x"])
        assert format_word(parse_word("a.x b.x^-1", group)) == "a.x^1 b.x^-1"

    def test_free_group_is_shared(self):
        """El mismo conjunto de símbolos da el mismo grupo libre"""
        assert free_group_on(["a.x", "b.x"]) is free_group_on(["a.x", "b.x"])


class TestStandardPresentation:
    """Pruebas de standard_presentation"""

    def test_path3_golden(self, golden_dir):
        """La presentación del camino de involuciones coincide con el archivo de referencia"""
        expected = (golden_dir / "path3_standard.txt").read_text(encoding="utf-8")
        g = racg("abc", [("a", "b"), ("b", "c")])
        assert standard_presentation(g).to_text() == expected

    def test_table_synthesis_matches_explicit(self, path3):
        """Z2 por tabla produce la misma presentación que ⟨x | x^2⟩"""
        explicit = standard_presentation(racg("abc", [("a", "b"), ("b", "c")]))
        assert standard_presentation(path3) == explicit

    def test_single_vertex(self):
        pres = standard_presentation(racg("a", []))
        assert pres.symbols == ("a.x",)
        assert [format_word(r) for r in pres.relators] == ["a.x^1 a.x^1"]

    def test_no_edges_no_commutators(self):
        """Producto libre: sólo los relatores de los vértices"""
        pres = standard_presentation(raag("ab", []))
        assert pres.relators == ()
        assert pres.symbols == ("a.x", "b.x")

    def test_commutator_count(self):
        """Un conmutador por cada par de generadores de vértices adyacentes"""
        g = table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a")], orders={"a": 3})
        pres = standard_presentation(g)
        letters = [word_letters(r) for r in pres.relators]
        commutators = [w for w in letters if len(w) == 4 and w[0][0] != w[1][0]]
        sizes = {v: len(pres.symbols_of(v)) for v in g.names}
        expected = sum(sizes[u] * sizes[w] for u, w in g.edges)
        assert len(commutators) == expected

    def test_canonical_order(self, triangle):
        pres = standard_presentation(triangle)
        keys = [(len(r), word_letters(r)) for r in pres.relators]
        assert keys == sorted(keys)

    def test_missing_presentation(self):
        """Un vértice infinito sin presentación no puede presentarse"""
        g = ProductGraph((VertexGroupInfo.infinite("a", Ends.ONE, Tri.YES),))
        with pytest.raises(MissingPresentationError):
            standard_presentation(g)

    def test_vertex_presentation_from_table_z3(self):
        """Z3 por tabla: dos generadores y los productos de la tabla"""
        g = table_graph("a", [], orders={"a": 3})
        pres = vertex_presentation(g.vertex("a"))
        assert pres.symbols == ("a.g1", "a.g2")
        letters = [word_letters(r) for r in pres.relators]
        assert (("a.g1", 1), ("a.g2", 1)) in letters
        assert (("a.g1", 1), ("a.g1", 1), ("a.g2", -1)) in letters

    def test_rejects_repeated_or_malformed_generators(self):
        """Generadores repetidos o que no son tokens rompen la unicidad de los símbolos"""
        for generators in (("x", "x"), ("x y",), ("x^2",)):
            v = VertexGroupInfo.infinite("a", Ends.TWO, Tri.YES, presentation=VertexPresentation(generators))
            with pytest.raises(PresentationFormatError):
                vertex_presentation(v)

    def test_relator_with_undeclared_local_symbol(self):
        v = VertexGroupInfo.finite("a", 2, presentation=VertexPresentation(("x",), ("y^2",)))
        with pytest.raises(MissingPresentationError):
            vertex_presentation(v)

    def test_text_round_trip(self, square):
        pres = standard_presentation(square)
        assert Presentation.from_text(pres.to_text()) == pres

    def test_from_text_rejects_undeclared(self):
        with pytest.raises(PresentationFormatError):
            Presentation.from_text("gen a a.x\nrel b.x^2\n")
        with pytest.raises(PresentationFormatError):
            Presentation.from_text("gen a\n")

    def test_finitely_presented(self):
        g = ProductGraph((VertexGroupInfo.finite("a", 2),
                          VertexGroupInfo.infinite("b", Ends.ONE, Tri.YES, finitely_presented=False)))
        assert not check_finitely_presented(g)
        assert check_finitely_presented(raag("ab", [("a", "b")]))
        assert check_finitely_presented(ProductGraph())


class TestAmalgams:
    """Pruebas de amalgam_presentations"""

    def test_path3_over_middle_vertex(self, path3):
        decomposition = amalgam_presentations(path3, ["b"])
        assert decomposition.graph_A == ("a", "b")
        assert decomposition.graph_B == ("b", "c")
        assert decomposition.generators_intersect_correctly()
        assert decomposition.relator_identity_holds(standard_presentation(path3))

    def test_square_over_diagonal(self, square):
        """Δ={a, c} no es completo y aun así produce una escisión válida"""
        decomposition = amalgam_presentations(square, ["a", "c"])
        assert decomposition.graph_A == ("a", "b", "c")
        assert decomposition.graph_B == ("a", "c", "d")
        assert decomposition.relator_identity_holds(standard_presentation(square))

    def test_free_product(self, two_isolated):
        decomposition = amalgam_presentations(two_isolated, [])
        assert decomposition.graph_Delta == ()
        assert decomposition.pres_Delta.relators == ()
        assert decomposition.relator_identity_holds(standard_presentation(two_isolated))

    def test_non_separating(self, triangle):
        with pytest.raises(SeparationError):
            amalgam_presentations(triangle, ["a"])

    def test_every_separation_of_small_graphs(self):
        """Para todo grafo conexo y todo Δ que separa, las identidades se cumplen"""
        checked = 0
        for shape in connected_shapes(5):
            g = _shape_graph(shape)
            standard = standard_presentation(g)
            for size in range(len(g)):
                for delta in itertools.combinations(g.names, size):
                    if len(separation_parts(g, delta)) < 2:
                        continue
                    decomposition = amalgam_presentations(g, delta)
                    assert decomposition.generators_intersect_correctly()
                    assert decomposition.relator_identity_holds(standard)
                    checked += 1
        assert checked > 50


class TestRetractions:
    """Pruebas de retract_presentation"""

    def test_single_vertex_of_triangle(self, triangle):
        pres = retract_presentation(triangle, ["a"])
        assert pres == standard_presentation(table_graph("a", []))

    def test_non_adjacent_pair(self, path3):
        """Retraer a {a, c} elimina todos los conmutadores"""
        pres = retract_presentation(path3, ["a", "c"])
        assert pres.symbols == ("a.x", "c.x")
        assert all(len(r) == 2 for r in pres.relators)
        assert pres.relators[0].group is free_group_on(["a.x", "c.x"])

    def test_repeated_vertex_relators_survive(self):
        """Los relatores repetidos del vértice retenido no se deduplican"""
        doubled = VertexGroupInfo.finite("a", 2, presentation=VertexPresentation(("x",), ("x^2", "x^2")))
        g = ProductGraph((doubled, VertexGroupInfo.finite("b", 2, presentation=VertexPresentation(("x",), ("x^2",)))),
                         (("a", "b"),))
        pres = retract_presentation(g, ["a"])
        assert [format_word(r) for r in pres.relators] == ["a.x^1 a.x^1", "a.x^1 a.x^1"]

    def test_empty_subset(self, path3):
        assert retract_presentation(path3, []) == Presentation()

    def test_every_subset_of_small_graphs(self):
        for shape in connected_shapes(4):
            g = _shape_graph(shape)
            for size in range(len(g) + 1):
                for s in itertools.combinations(g.names, size):
                    retract_presentation(g, s)

    @pytest.mark.slow
    def test_every_subset_of_six_vertex_graphs(self):
        for shape in connected_shapes(6, min_vertices=5):
            g = _shape_graph(shape)
            standard = standard_presentation(g)
            for size in range(len(g) + 1):
                for s in itertools.combinations(g.names, size):
                    retract_presentation(g, s, full=standard)
                    if size < len(g) and len(separation_parts(g, s)) >= 2:
                        assert amalgam_presentations(g, s).relator_identity_holds(standard)
