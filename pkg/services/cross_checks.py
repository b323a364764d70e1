"""
Re-implementaciones independientes usadas para contrastar los clasificadores y
el oráculo. Trabajan directamente sobre la adyacencia y las tablas, sin pasar
por networkx ni por las funciones de graph_core, classify u oracle.
"""

import itertools
from typing import List, Optional, Sequence

from networkx.utils import UnionFind

from services.classify import EndsKind, SemistabilityStatus
from services.graph_core import Ends, ProductGraph, SubgraphRef, Tri


def _finite_clique(g: ProductGraph, members: Sequence[str]) -> bool:
    return all(g.vertex(v).is_finite for v in members) and all(
        w in g.adjacency[u] for u, w in itertools.combinations(members, 2)
    )


def count_components(g: ProductGraph, members: Sequence[str]) -> int:
    """Componentes conexas por DFS sobre la adyacencia"""
    remaining = set(members)
    count = 0
    while remaining:
        count += 1
        stack = [remaining.pop()]
        while stack:
            u = stack.pop()
            for w in g.adjacency[u] & remaining:
                remaining.discard(w)
                stack.append(w)
    return count


def brute_force_separators(g: ProductGraph) -> List[SubgraphRef]:
    """Todos los Δ completos y finitos que separan, probando cada subconjunto"""
    names = g.names
    base = count_components(g, names)
    found = []
    for size in range(len(names) + 1):
        for delta in itertools.combinations(names, size):
            if not _finite_clique(g, delta):
                continue
            count = count_components(g, [v for v in names if v not in delta])
            if (not delta and count >= 2) or (delta and count > base):
                found.append(delta)
    return found


def independent_bad_vertex(g: ProductGraph) -> Optional[str]:
    """Primer vértice con anotación No cuyo link es un clique de grupos finitos"""
    for v in g.names:
        if g.vertex(v).semistable is Tri.NO and _finite_clique(g, sorted(g.adjacency[v])):
            return v
    return None


def independent_semistability(g: ProductGraph) -> SemistabilityStatus:
    statuses = {g.vertex(v).semistable for v in g.names if _finite_clique(g, sorted(g.adjacency[v]))}
    if Tri.NO in statuses:
        return SemistabilityStatus.NOT_SEMISTABLE
    if Tri.UNKNOWN in statuses:
        return SemistabilityStatus.UNKNOWN
    return SemistabilityStatus.SEMISTABLE


def independent_ends(g: ProductGraph) -> EndsKind:
    names = g.names
    if not names:
        return EndsKind.ZERO
    if _complete(g, names):
        infinite = [v for v in names if not g.vertex(v).is_finite]
        if not infinite:
            return EndsKind.ZERO
        if len(infinite) >= 2:
            return EndsKind.ONE
        ends = g.vertex(infinite[0]).ends
        if ends is Ends.ONE:
            return EndsKind.ONE
        if ends in (Ends.TWO, Ends.MANY):
            return EndsKind.MORE_THAN_ONE
        return EndsKind.UNKNOWN
    return EndsKind.MORE_THAN_ONE if brute_force_separators(g) else EndsKind.ONE


def _complete(g: ProductGraph, names: Sequence[str]) -> bool:
    return all(w in g.adjacency[u] for u, w in itertools.combinations(names, 2))


def rewriting_ball_size(g: ProductGraph, radius: int) -> int:
    """
    Elementos de longitud <= radius contados por clausura de congruencia sobre
    palabras crudas. Sólo se aplican las relaciones de la presentación
    estándar: productos dentro de cada tabla y conmutación entre vértices
    adyacentes. Ninguna relación alarga una palabra, así que basta cerrar el
    conjunto finito de palabras de longitud <= radius.
    """
    tables = {v.name: v.table for v in g.vertices}
    gens = [(v.name, e) for v in g.vertices for e in v.table.non_identity()]
    words = [()]
    for length in range(1, radius + 1):
        words.extend(itertools.product(gens, repeat=length))

    classes = UnionFind()
    for word in words:
        classes[word]
        for i in range(len(word) - 1):
            (u, x), (w, y) = word[i], word[i + 1]
            if u == w:
                merged = tables[u].mult(x, y)
                middle = () if merged == 0 else ((u, merged),)
                classes.union(word, word[:i] + middle + word[i + 2:])
            elif w in g.adjacency[u]:
                classes.union(word, word[:i] + (word[i + 1], word[i]) + word[i + 2:])
    return len({classes[word] for word in words})
