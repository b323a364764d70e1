"""
Presentaciones de productos de grafos.

Construye la presentación estándar (unión disjunta de las presentaciones de
vértice más un conmutador por cada par de generadores de vértices adyacentes),
las presentaciones de una descomposición visual como amalgama sobre un
subgrafo separador y la presentación de un retracto por eliminación de
generadores (movimientos de Tietze).

Las palabras son elementos de grupos libres de sympy sobre los símbolos
calificados 'v.x'; sympy se encarga de la reducción libre.
"""

import re
from collections import Counter
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from sympy import Symbol
from sympy.combinatorics.free_groups import FreeGroup, FreeGroupElement

from services.graph_core import (
    GENERATOR_PATTERN,
    AnalysisError,
    ProductGraph,
    SubgraphRef,
    VertexGroupInfo,
    full_subgraph,
    separation_parts,
)
from utils.logging_config import get_logger

logger = get_logger("presentations")

_TOKEN = re.compile(r"^([^\s\^]+)(?:\^(-?\d+))?$")

# Letra expandida: (símbolo, ±1)
Letter = Tuple[str, int]


class MissingPresentationError(AnalysisError, ValueError):
    """Un vértice no tiene presentación ni tabla de multiplicación"""


class SeparationError(AnalysisError, ValueError):
    """El subgrafo dado no separa el grafo en dos lados no vacíos"""


class RetractionMismatchError(AnalysisError):
    """La eliminación de Tietze no reprodujo la presentación estándar del subgrafo"""


class PresentationFormatError(AnalysisError, ValueError):
    """Texto de presentación o palabra mal formada"""


# ---------------------------------------------------------------------------
# Palabras
# ---------------------------------------------------------------------------

def free_group_on(symbols: Sequence[str]) -> FreeGroup:
    """Grupo libre sobre los nombres dados (sympy reutiliza la instancia por símbolos)"""
    return FreeGroup(tuple(Symbol(s) for s in symbols))


def _generator_map(group: FreeGroup) -> Dict[str, FreeGroupElement]:
    return {symbol.name: gen for symbol, gen in zip(group.symbols, group.generators)}


def parse_word(text: str, group: FreeGroup, prefix: str = "") -> FreeGroupElement:
    """
    Lee una palabra como 'x^2 y x^-1' en `group`. Cada símbolo se busca como
    prefix + símbolo; el producto queda libremente reducido por sympy.
    """
    generators = _generator_map(group)
    word = group.identity
    for token in text.split():
        match = _TOKEN.match(token)
        if not match:
            raise PresentationFormatError(f"Token inválido en palabra: {token!r}")
        symbol = prefix + match.group(1)
        if symbol not in generators:
            raise PresentationFormatError(f"Símbolo no declarado en palabra: {match.group(1)!r}")
        exp = 1 if match.group(2) is None else int(match.group(2))
        word = word * generators[symbol] ** exp
    return word


def word_letters(word: FreeGroupElement) -> Tuple[Letter, ...]:
    """array_form expandido en letras ±1"""
    return tuple(
        (symbol.name, 1 if exp > 0 else -1)
        for symbol, exp in word.array_form
        for _ in range(abs(exp))
    )


def format_word(word: FreeGroupElement) -> str:
    return " ".join(f"{symbol}^{exp}" for symbol, exp in word_letters(word))


def relator_sort_key(word: FreeGroupElement) -> Tuple[int, Tuple[Letter, ...]]:
    return (len(word), word_letters(word))


def rehome(word: FreeGroupElement, group: FreeGroup) -> FreeGroupElement:
    """Lleva una palabra a otro grupo libre que contiene todos sus símbolos"""
    return group.dtype(word.array_form)


def qualify(vertex: str, local: str) -> str:
    return f"{vertex}.{local}"


# ---------------------------------------------------------------------------
# Tipos
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Presentation:
    """Generadores etiquetados por vértice dueño y relatores en el grupo libre sobre ellos"""
    generators: Tuple[Tuple[str, str], ...] = ()
    relators: Tuple[FreeGroupElement, ...] = ()

    @property
    def symbols(self) -> Tuple[str, ...]:
        return tuple(symbol for symbol, _ in self.generators)

    @property
    def group(self) -> FreeGroup:
        return free_group_on(self.symbols)

    def symbols_of(self, vertex: str) -> Tuple[str, ...]:
        return tuple(symbol for symbol, owner in self.generators if owner == vertex)

    def relator_multiset(self) -> Counter:
        """Multiconjunto de relatores comparable entre grupos libres distintos"""
        return Counter(word_letters(r) for r in self.relators)

    def canonical(self) -> "Presentation":
        return Presentation(self.generators, tuple(sorted(self.relators, key=relator_sort_key)))

    def to_text(self) -> str:
        lines = [f"gen {owner} {symbol}" for symbol, owner in self.generators]
        lines.extend(f"rel {format_word(word)}" for word in self.canonical().relators)
        return "\n".join(lines) + "\n" if lines else ""

    @classmethod
    def from_text(cls, text: str) -> "Presentation":
        generators: List[Tuple[str, str]] = []
        relator_lines: List[Tuple[int, str]] = []
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            keyword, _, rest = line.partition(" ")
            if keyword == "gen":
                parts = rest.split()
                if len(parts) != 2:
                    raise PresentationFormatError(f"Línea {lineno}: se esperaba 'gen <vértice> <símbolo>'")
                generators.append((parts[1], parts[0]))
            elif keyword == "rel":
                relator_lines.append((lineno, rest))
            else:
                raise PresentationFormatError(f"Línea {lineno}: palabra clave desconocida {keyword!r}")

        group = free_group_on([symbol for symbol, _ in generators])
        relators = []
        for lineno, rest in relator_lines:
            try:
                relators.append(parse_word(rest, group))
            except PresentationFormatError as e:
                raise PresentationFormatError(f"Línea {lineno}: {e}") from e
        return cls(tuple(generators), tuple(relators))


@dataclass(frozen=True)
class AmalgamDecomposition:
    """Descomposición visual G = G_A *_{G_Δ} G_B"""
    graph_A: SubgraphRef
    graph_B: SubgraphRef
    graph_Delta: SubgraphRef
    pres_A: Presentation
    pres_B: Presentation
    pres_Delta: Presentation

    def generators_intersect_correctly(self) -> bool:
        """S_A ∩ S_B = S_Δ"""
        return set(self.pres_A.symbols) & set(self.pres_B.symbols) == set(self.pres_Delta.symbols)

    def relator_identity_holds(self, standard: Presentation) -> bool:
        """R_A + R_B - R_Δ = R_Γ como multiconjuntos"""
        combined = self.pres_A.relator_multiset() + self.pres_B.relator_multiset()
        combined.subtract(self.pres_Delta.relator_multiset())
        combined = Counter({k: v for k, v in combined.items() if v != 0})
        return combined == standard.relator_multiset()


# ---------------------------------------------------------------------------
# Operaciones
# ---------------------------------------------------------------------------

def vertex_presentation(info: VertexGroupInfo) -> Presentation:
    """Fragmento de un vértice con símbolos calificados 'v.x'"""
    if info.presentation is not None:
        local = info.presentation.generators
        bad = [s for s in local if not GENERATOR_PATTERN.fullmatch(s)]
        if bad or len(set(local)) != len(local):
            raise PresentationFormatError(
                f"{info.name}: generadores locales inválidos o repetidos {list(local)}"
            )
        symbols = [qualify(info.name, s) for s in local]
        group = free_group_on(symbols)
        relators = []
        for text in info.presentation.relators:
            try:
                word = parse_word(text, group, prefix=f"{info.name}.")
            except PresentationFormatError as e:
                raise MissingPresentationError(f"{info.name}: relator {text!r}: {e}") from e
            if not word.is_identity:
                relators.append(word)
        return Presentation(tuple((s, info.name) for s in symbols), tuple(relators))

    if info.table is not None:
        return _presentation_from_table(info)

    raise MissingPresentationError(
        f"El vértice {info.name} no tiene presentación ni tabla de multiplicación"
    )


def _presentation_from_table(info: VertexGroupInfo) -> Presentation:
    # Todos los elementos no triviales como generadores, la tabla completa como relatores
    table = info.table
    for name in table.elements:
        if not _TOKEN.match(name) or "^" in name:
            raise PresentationFormatError(f"{info.name}: nombre de elemento no representable {name!r}")
    names = {i: qualify(info.name, table.elements[i]) for i in table.non_identity()}
    group = free_group_on([names[i] for i in table.non_identity()])
    gen = _generator_map(group)
    relators = []
    for i in table.non_identity():
        for j in table.non_identity():
            k = table.mult(i, j)
            word = gen[names[i]] * gen[names[j]]
            if k != 0:
                word = word * gen[names[k]] ** -1
            if not word.is_identity:
                relators.append(word)
    return Presentation(tuple((names[i], info.name) for i in table.non_identity()), tuple(relators))


def standard_presentation(g: ProductGraph) -> Presentation:
    """
    Presentación estándar del producto de grafos.

    Relatores: los de cada vértice más [a, b] = a b a^-1 b^-1 para cada
    a en S_u, b en S_w con (u, w) arista, vértice menor primero.
    """
    pieces = {v.name: vertex_presentation(v) for v in g.vertices}
    generators: List[Tuple[str, str]] = []
    for v in g.vertices:
        generators.extend(pieces[v.name].generators)

    group = free_group_on([symbol for symbol, _ in generators])
    gen = _generator_map(group)
    relators: List[FreeGroupElement] = []
    for v in g.vertices:
        relators.extend(rehome(word, group) for word in pieces[v.name].relators)

    edges = sorted(
        {tuple(sorted((u, w), key=g.index.__getitem__)) for u, w in g.edges if u != w},
        key=lambda e: (g.index[e[0]], g.index[e[1]]),
    )
    for u, w in edges:
        for a in pieces[u].symbols:
            for b in pieces[w].symbols:
                relators.append(gen[a] * gen[b] * gen[a] ** -1 * gen[b] ** -1)

    return Presentation(tuple(generators), tuple(relators)).canonical()


def amalgam_presentations(g: ProductGraph, delta: Iterable[str],
                          parts: Optional[Sequence[SubgraphRef]] = None) -> AmalgamDecomposition:
    """
    Presentaciones de G_A, G_B y G_Δ para la escisión visual sobre delta.
    A = Δ ∪ primera componente de Γ - Δ, B = Δ ∪ el resto. Delta no necesita
    ser completo.
    """
    delta_ref = g.ordered(delta)
    if parts is None:
        parts = separation_parts(g, delta_ref)
    if len(parts) < 2 or any(not p for p in parts):
        raise SeparationError(
            f"Δ={list(delta_ref)} no separa el grafo: {len(parts)} componente(s) al retirarlo"
        )

    first = set(parts[0])
    rest = {v for part in parts[1:] for v in part}
    for u in first:
        if g.adjacency[u] & rest:
            raise SeparationError(f"Hay aristas entre los dos lados de la escisión sobre Δ={list(delta_ref)}")

    side_a = g.ordered(set(delta_ref) | first)
    side_b = g.ordered(set(delta_ref) | rest)
    decomposition = AmalgamDecomposition(
        graph_A=side_a,
        graph_B=side_b,
        graph_Delta=delta_ref,
        pres_A=standard_presentation(full_subgraph(g, side_a)),
        pres_B=standard_presentation(full_subgraph(g, side_b)),
        pres_Delta=standard_presentation(full_subgraph(g, delta_ref)),
    )
    logger.debug("Descomposición visual construida", delta=list(delta_ref), A=list(side_a), B=list(side_b))
    return decomposition


def retract_presentation(g: ProductGraph, s: Iterable[str],
                         full: Optional[Presentation] = None) -> Presentation:
    """
    Presentación de ⟨s⟩ por eliminación de generadores: cada generador de un
    vértice fuera de s se reemplaza por la identidad (eliminate_words), los
    relatores triviales o repetidos se descartan. El resultado debe coincidir
    con la presentación estándar del subgrafo pleno.
    """
    keep = g.ordered(s)
    keep_set = set(keep)
    if full is None:
        full = standard_presentation(g)
    gen = _generator_map(full.group)
    killed_names = {symbol for symbol, owner in full.generators if owner not in keep_set}
    killed = [gen[symbol] for symbol in full.symbols if symbol in killed_names]

    generators = tuple(item for item in full.generators if item[1] in keep_set)
    target = free_group_on([symbol for symbol, _ in generators])
    relators: List[FreeGroupElement] = []
    seen = set()
    for word in full.relators:
        if any(symbol.name in killed_names for symbol, _ in word.array_form):
            word = word.eliminate_words(killed, _all=True)
            if word.is_identity or rehome(word, target) in seen:
                continue
        word = rehome(word, target)
        relators.append(word)
        seen.add(word)

    retracted = Presentation(generators, tuple(relators)).canonical()
    expected = standard_presentation(full_subgraph(g, keep))
    if retracted != expected:
        raise RetractionMismatchError(
            f"La retracción sobre {list(keep)} no coincide con la presentación estándar del subgrafo"
        )
    return retracted


def check_finitely_presented(g: ProductGraph) -> bool:
    """El producto es f.p. si y sólo si cada grupo de vértice lo es (el grafo es finito)"""
    return all(v.finitely_presented for v in g.vertices)
