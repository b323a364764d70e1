"""
Pruebas del modelo de grafo anotado y de las operaciones combinatorias
"""

import itertools
import sys
from pathlib import Path

import networkx as nx
import numpy as np
import pytest

project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))

from services.catalog import annotate, connected_shapes, table_graph
from services.cross_checks import brute_force_separators
from services.graph_core import (
    Ends,
    ProductGraph,
    Tri,
    UnknownVertexError,
    VertexBoundExceededError,
    VertexGroupInfo,
    find_finite_complete_separators,
    full_subgraph,
    is_complete,
    link,
    separation_parts,
    spans_finite_subgroup,
    spans_finite_subgroup_order,
    star,
    validate_graph,
)
from services.group_tables import FiniteGroupTable


def _codes(g):
    return {v.code for v in validate_graph(g)}


class TestValidation:
    """Pruebas de validate_graph"""

    def test_valid_graph_has_no_violations(self, path3):
        """Un grafo bien formado no produce violaciones"""
        assert validate_graph(path3) == []

    def test_empty_graph_is_valid(self):
        """El grafo vacío es válido"""
        assert validate_graph(ProductGraph()) == []

    def test_self_loop(self, make_graph):
        """Los lazos se rechazan"""
        assert "self_loop" in _codes(make_graph({"a": "F"}, [("a", "a")]))

    def test_duplicate_edge_and_unknown_endpoint(self, make_graph):
        """Aristas repetidas y extremos desconocidos se reportan"""
        g = make_graph({"a": "F", "b": "F"}, [("a", "b"), ("b", "a"), ("a", "z")])
        assert {"duplicate_edge", "unknown_endpoint"} <= _codes(g)

    def test_duplicate_vertex_and_bad_name(self):
        """Nombres repetidos o con caracteres inválidos"""
        g = ProductGraph((VertexGroupInfo.finite("a", 2), VertexGroupInfo.finite("a", 2),
                          VertexGroupInfo.finite("x y", 2)))
        assert {"duplicate_vertex", "invalid_name"} <= _codes(g)

    def test_finite_with_ends_is_rejected(self):
        """Un grupo finito debe tener cero finales"""
        g = ProductGraph((VertexGroupInfo("a", 4, Ends.ONE, Tri.YES),))
        assert "finite_implies_zero_ends" in _codes(g)

    def test_infinite_with_zero_ends_is_rejected(self):
        """Cero finales exige un grupo finito"""
        g = ProductGraph((VertexGroupInfo("a", None, Ends.ZERO, Tri.YES),))
        assert "zero_ends_implies_finite" in _codes(g)

    def test_finite_not_semistable_is_rejected(self):
        """Un grupo finito siempre es semiestable"""
        g = ProductGraph((VertexGroupInfo("a", 2, Ends.ZERO, Tri.NO),))
        assert {"finite_implies_semistable", "non_semistable_implies_infinite"} <= _codes(g)

    def test_trivial_group_is_rejected(self):
        """Los grupos de vértice deben ser no triviales"""
        g = ProductGraph((VertexGroupInfo.finite("a", 1),))
        assert "trivial_group" in _codes(g)

    def test_table_order_mismatch(self):
        """El orden declarado debe coincidir con la tabla"""
        g = ProductGraph((VertexGroupInfo.finite("a", 3, table=FiniteGroupTable.cyclic(2)),))
        assert "table_order_mismatch" in _codes(g)

    def test_invalid_and_duplicate_generators(self):
        """Los generadores locales son únicos y usan [A-Za-z0-9_-]"""
        from services.graph_core import VertexPresentation
        repeated = VertexPresentation(("x", "x"))
        malformed = VertexPresentation(("x y", "z.w"))
        g = ProductGraph((VertexGroupInfo.infinite("a", Ends.ONE, Tri.YES, True, repeated),
                          VertexGroupInfo.infinite("b", Ends.ONE, Tri.YES, True, malformed)))
        assert {"duplicate_generator", "invalid_generator"} <= _codes(g)

    def test_not_fp_with_presentation(self):
        """Una presentación implica presentación finita"""
        from services.graph_core import VertexPresentation
        g = ProductGraph((VertexGroupInfo.infinite("a", Ends.ONE, Tri.YES, False, VertexPresentation(("x",))),))
        assert "presentation_implies_fp" in _codes(g)


class TestSubgraphs:
    """Pruebas de subgrafos plenos, links y estrellas"""

    def test_full_subgraph_keeps_edges(self, path3):
        """Γ_{a,b} del camino conserva la arista a–b"""
        sub = full_subgraph(path3, ["b", "a"])
        assert sub.names == ("a", "b")
        assert sub.edges == (("a", "b"),)

    def test_full_subgraph_without_edges(self, path3):
        """Γ_{a,c} del camino no tiene aristas"""
        sub = full_subgraph(path3, ["a", "c"])
        assert sub.edges == ()

    def test_full_subgraph_of_everything_is_identity(self, path3):
        assert full_subgraph(path3, path3.names) is path3

    def test_unknown_vertex(self, path3):
        """Referenciar un vértice inexistente falla"""
        with pytest.raises(UnknownVertexError):
            full_subgraph(path3, ["a", "z"])
        with pytest.raises(UnknownVertexError):
            link(path3, "z")

    def test_link_and_star(self, path3):
        """lk(b) = {a, c} y st(a) = {a, b}"""
        assert link(path3, "b") == ("a", "c")
        assert star(path3, "a") == ("a", "b")
        assert link(path3, "b", within=["a", "b"]) == ("a",)

    def test_link_of_isolated_vertex(self, two_isolated):
        assert link(two_isolated, "a") == ()
        assert star(two_isolated, "a") == ("a",)

    def test_star_contains_link(self, square):
        """st(v) = {v} ∪ lk(v) y v ∉ lk(v)"""
        for v in square.names:
            assert v not in link(square, v)
            assert set(star(square, v)) == {v} | set(link(square, v))

    def test_star_is_idempotent(self):
        """La estrella de v dentro de su propia estrella es ella misma"""
        for shape in connected_shapes(5):
            g = annotate(shape, ["finite"] * shape.number_of_nodes())
            for v in g.names:
                st = star(g, v)
                assert star(full_subgraph(g, st), v) == st
                assert star(g, v, within=st) == st
                assert link(g, v, within=st) == link(g, v)

    def test_complete(self, triangle, path3):
        assert is_complete(triangle, triangle.names)
        assert not is_complete(path3, path3.names)
        assert is_complete(path3, [])
        assert is_complete(path3, ["b"])


class TestFiniteSubgroups:
    """Pruebas de spans_finite_subgroup"""

    def test_complete_finite_spans_finite(self, triangle):
        assert spans_finite_subgroup(triangle, triangle.names) is Tri.YES
        assert spans_finite_subgroup_order(triangle, triangle.names) == 8

    def test_non_complete_is_infinite(self, path3):
        assert spans_finite_subgroup(path3, ["a", "c"]) is Tri.NO
        assert spans_finite_subgroup_order(path3, ["a", "c"]) is None

    def test_infinite_vertex(self, make_graph):
        g = make_graph({"a": "F", "b": "O"}, [("a", "b")])
        assert spans_finite_subgroup(g, ["a", "b"]) is Tri.NO
        assert spans_finite_subgroup(g, ["a"]) is Tri.YES

    def test_repeated_members_count_once(self, triangle):
        """Los vértices repetidos no multiplican el orden"""
        assert spans_finite_subgroup_order(triangle, ["a", "a"]) == 2
        assert spans_finite_subgroup_order(triangle, ["a", "b", "a", "b"]) == 4
        assert spans_finite_subgroup(triangle, ["c", "c"]) is Tri.YES

    def test_empty_set_is_trivial(self, path3):
        """⟨∅⟩ es el grupo trivial"""
        assert spans_finite_subgroup(path3, []) is Tri.YES
        assert spans_finite_subgroup_order(path3, []) == 1


class TestSeparators:
    """Pruebas de find_finite_complete_separators"""

    def test_path(self, path3):
        """En el camino a–b–c el único separador es {b}"""
        separators = find_finite_complete_separators(path3)
        assert [s.delta for s in separators] == [("b",)]
        assert separators[0].parts == (("a",), ("c",))
        assert separators[0].minimal

    def test_complete_graph_has_none(self, triangle):
        assert find_finite_complete_separators(triangle) == []

    def test_disconnected_reports_empty_delta(self, two_isolated):
        separators = find_finite_complete_separators(two_isolated)
        assert separators[0].delta == ()
        assert separators[0].parts == (("a",), ("b",))

    def test_infinite_vertex_is_not_a_separator(self, make_graph):
        """Un vértice de corte infinito no cuenta"""
        g = make_graph({"a": "F", "b": "O", "c": "F"}, [("a", "b"), ("b", "c")])
        assert find_finite_complete_separators(g) == []

    def test_minimality_and_order(self):
        """{b, d} separa el cuadrado con diagonal; nada más pequeño lo hace"""
        g = table_graph("abcd", [("a", "b"), ("b", "c"), ("c", "d"), ("d", "a"), ("b", "d")])
        separators = find_finite_complete_separators(g)
        assert [s.delta for s in separators] == [("b", "d")]
        assert separators[0].minimal

    def test_non_minimal_separator(self):
        """En la garra, {a} es minimal y {a, b} no lo es"""
        g = table_graph("abcd", [("a", "b"), ("a", "c"), ("a", "d")])
        separators = find_finite_complete_separators(g)
        by_delta = {s.delta: s for s in separators}
        assert by_delta[("a",)].minimal
        assert ("a", "b") in by_delta and not by_delta[("a", "b")].minimal
        assert [len(s.delta) for s in separators] == sorted(len(s.delta) for s in separators)

    def test_within_restricts_scope(self, square):
        """Dentro de {a, b, c} el vértice b separa a de c"""
        separators = find_finite_complete_separators(square, within=["a", "b", "c"])
        assert [s.delta for s in separators] == [("b",)]

    def test_vertex_bound(self, square):
        with pytest.raises(VertexBoundExceededError):
            find_finite_complete_separators(square, max_vertices=3)

    def test_parts_cover_complement(self, square):
        """Las partes particionan Γ ∖ Δ"""
        parts = separation_parts(square, ["a", "c"])
        assert parts == [("b",), ("d",)]

    def test_matches_brute_force(self):
        """Comparación exhaustiva contra la enumeración de todos los subconjuntos"""
        checked = 0
        for shape in connected_shapes(5):
            n = shape.number_of_nodes()
            for statuses in itertools.product(("finite", "one_ended"), repeat=n):
                g = annotate(shape, statuses)
                expected = brute_force_separators(g)
                found = find_finite_complete_separators(g)
                assert sorted(s.delta for s in found) == sorted(expected), g.names
                for s in found:
                    assert s.parts == tuple(separation_parts(g, s.delta))
                checked += 1
        assert checked > 100

    @pytest.mark.slow
    def test_matches_brute_force_large(self):
        for shape in connected_shapes(7, min_vertices=6):
            for statuses in itertools.product(("finite", "one_ended"), repeat=shape.number_of_nodes()):
                g = annotate(shape, statuses)
                found = find_finite_complete_separators(g)
                assert sorted(s.delta for s in found) == sorted(brute_force_separators(g))

    def test_matches_brute_force_disconnected(self):
        """Grafos disconexos del atlas: Δ=∅ más los Δ que aumentan las componentes"""
        checked = 0
        for shape in nx.graph_atlas_g():
            n = shape.number_of_nodes()
            if n < 2 or n > 5 or nx.is_connected(shape):
                continue
            for statuses in itertools.product(("finite", "one_ended"), repeat=n):
                g = annotate(shape, statuses)
                found = find_finite_complete_separators(g)
                assert sorted(s.delta for s in found) == sorted(brute_force_separators(g)), g.names
                assert found[0].delta == ()
                checked += 1
        assert checked > 100

    def test_disconnected_with_cut_vertex(self):
        """Camino a–b–c junto a d aislado: ∅ y {b} separan"""
        g = table_graph("abcd", [("a", "b"), ("b", "c")])
        separators = find_finite_complete_separators(g)
        assert [s.delta for s in separators] == [(), ("b",)]
        assert separators[0].parts == (("a", "b", "c"), ("d",))
        assert separators[1].parts == (("a",), ("c",), ("d",))

    def test_matches_brute_force_eight_vertices(self):
        """Grafos aleatorios de 8 vértices, conexos o no"""
        rng = np.random.default_rng(8)
        for seed in range(24):
            shape = nx.gnp_random_graph(8, 0.2 + 0.02 * seed, seed=seed)
            for _ in range(6):
                statuses = [("finite", "one_ended")[k] for k in rng.integers(0, 2, size=8)]
                g = annotate(shape, statuses)
                found = find_finite_complete_separators(g)
                assert sorted(s.delta for s in found) == sorted(brute_force_separators(g)), (seed, statuses)

    def test_disjoint_union_of_eight(self):
        """Dos cuadrados disjuntos con diagonal: 8 vértices, todos finitos"""
        square = nx.cycle_graph(4)
        square.add_edge(0, 2)
        shape = nx.disjoint_union(square, square)
        g = annotate(shape, ["finite"] * 8)
        found = find_finite_complete_separators(g)
        assert sorted(s.delta for s in found) == sorted(brute_force_separators(g))
        assert [s.delta for s in found] == [(), ("a", "c"), ("e", "g")]

    @pytest.mark.slow
    def test_matches_brute_force_eight_vertices_exhaustive_palette(self):
        for seed in range(8):
            shape = nx.gnp_random_graph(8, 0.3 + 0.05 * seed, seed=100 + seed)
            for statuses in itertools.product(("finite", "one_ended"), repeat=8):
                g = annotate(shape, statuses)
                found = find_finite_complete_separators(g)
                assert sorted(s.delta for s in found) == sorted(brute_force_separators(g))
