"""
Interfaz de línea de comandos del toolkit.

Lee la descripción JSON del grafo anotado, despacha el análisis pedido y
escribe el resultado en stdout. Diagnósticos y logs van a stderr.
Códigos de salida: 0 resultado definido, 1 error de entrada, 2 veredicto
desconocido o inconcluso, 3 límite interno excedido.
"""

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple, Union

import click
from pydantic import BaseModel, ConfigDict, StrictInt, ValidationError
from rich.console import Console

from services.certify import (
    CertSearchExhausted,
    UnknownVerdictError,
    build_certificate,
    certificate_to_json,
    export_certificate_dot,
)
from services.classify import (
    AnalysisSession,
    EndsKind,
    EndsVerdict,
    NotFinitelyPresentedError,
    SemistabilityStatus,
    SemistabilityVerdict,
)
from services.graph_core import (
    AnalysisError,
    Ends,
    ProductGraph,
    Separator,
    Tri,
    UnknownVertexError,
    VertexBoundExceededError,
    VertexGroupInfo,
    VertexPresentation,
    find_finite_complete_separators,
    full_subgraph,
    validate_graph,
)
from services.group_tables import FiniteGroupTable, GroupTableError
from services.oracle import BallCapExceededError, EstimateKind, GraphProductOracle
from services.presentations import format_word, standard_presentation, vertex_presentation
from utils.config import config
from utils.logging_config import analysis_logger, get_logger

logger = get_logger("cli")
console = Console(stderr=True)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNKNOWN = 2
EXIT_BOUND = 3

COMMANDS = ("analyze", "ends", "certify", "present", "oracle-ends", "separators")
FORMATS = {
    "analyze": ("json",),
    "ends": ("json",),
    "separators": ("json",),
    "certify": ("json", "dot"),
    "present": ("text", "json"),
    "oracle-ends": ("json",),
}


# ---------------------------------------------------------------------------
# Modelos de entrada
# ---------------------------------------------------------------------------

class TableModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    elements: List[str]
    mul: List[List[StrictInt]]


class PresentationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    generators: List[str]
    relators: List[str] = []


class VertexModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    order: Optional[Union[Literal["infinite"], StrictInt]] = None
    ends: Optional[Literal["zero", "one", "two", "many", "unknown"]] = None
    semistable: Optional[Literal["yes", "no", "unknown"]] = None
    fp: bool = True
    presentation: Optional[PresentationModel] = None
    table: Optional[TableModel] = None


class GraphModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    vertices: List[VertexModel]
    edges: List[Tuple[str, str]] = []


@dataclass(frozen=True)
class Diagnostic:
    location: str
    message: str

    def __str__(self) -> str:
        return f"{self.location}: {self.message}"


class InputError(AnalysisError, ValueError):
    """Entrada inválida; lleva diagnósticos con línea o campo"""

    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))


# ---------------------------------------------------------------------------
# Parseo y serialización
# ---------------------------------------------------------------------------

def _loc(parts: Sequence[Any]) -> str:
    return ".".join(str(p) for p in parts)


def parse_input(data: bytes) -> ProductGraph:
    """JSON → ProductGraph validado, completando los valores derivados"""
    try:
        document = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as e:
        raise InputError([Diagnostic("input", f"no es UTF-8 válido: {e.reason}")])
    except json.JSONDecodeError as e:
        raise InputError([Diagnostic(f"line {e.lineno}, column {e.colno}", e.msg)])

    try:
        model = GraphModel.model_validate(document)
    except ValidationError as e:
        raise InputError([Diagnostic(_loc(err["loc"]) or "document", err["msg"]) for err in e.errors()])

    diagnostics: List[Diagnostic] = []
    vertices = []
    for i, vm in enumerate(model.vertices):
        vertex = _vertex_from_model(vm, f"vertices.{i}", diagnostics)
        if vertex is not None:
            vertices.append(vertex)
    if diagnostics:
        raise InputError(diagnostics)

    graph = ProductGraph(tuple(vertices), tuple(model.edges))
    violations = validate_graph(graph)
    if violations:
        raise InputError([Diagnostic(f"vertex {v.vertex}" if v.vertex else "graph", f"[{v.code}] {v.message}")
                          for v in violations])
    return graph


def _vertex_from_model(vm: VertexModel, location: str,
                       diagnostics: List[Diagnostic]) -> Optional[VertexGroupInfo]:
    table = None
    if vm.table is not None:
        try:
            table = FiniteGroupTable(vm.table.elements, vm.table.mul)
        except GroupTableError as e:
            diagnostics.append(Diagnostic(f"{location}.table", str(e)))
            return None

    presentation = None
    if vm.presentation is not None:
        presentation = VertexPresentation(tuple(vm.presentation.generators), tuple(vm.presentation.relators))

    if vm.order is None:
        if table is None:
            diagnostics.append(Diagnostic(f"{location}.order", "se requiere 'order' si no hay tabla"))
            return None
        order: Optional[int] = len(table)
    else:
        order = None if vm.order == "infinite" else vm.order

    finite = order is not None
    ends = Ends(vm.ends) if vm.ends else (Ends.ZERO if finite else Ends.UNKNOWN)
    semistable = Tri(vm.semistable) if vm.semistable else (Tri.YES if finite else Tri.UNKNOWN)
    vertex = VertexGroupInfo(vm.name, order, ends, semistable, vm.fp, presentation, table)
    if presentation is not None:
        try:
            vertex_presentation(vertex)
        except ValueError as e:
            diagnostics.append(Diagnostic(f"{location}.presentation", str(e)))
            return None
    return vertex


def serialize_graph(g: ProductGraph) -> Dict[str, Any]:
    """Forma explícita (sin valores derivados) que parse_input reconstruye"""
    vertices = []
    for v in g.vertices:
        entry: Dict[str, Any] = {
            "name": v.name,
            "order": "infinite" if v.order is None else v.order,
            "ends": v.ends.value,
            "semistable": v.semistable.value,
            "fp": v.finitely_presented,
        }
        if v.presentation is not None:
            entry["presentation"] = {
                "generators": list(v.presentation.generators),
                "relators": list(v.presentation.relators),
            }
        if v.table is not None:
            entry["table"] = v.table.to_dict()
        vertices.append(entry)
    return {"vertices": vertices, "edges": [list(e) for e in g.edges]}


def dump_json(data: Any) -> bytes:
    text = json.dumps(data, sort_keys=True, indent=config.output.json_indent, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# Reportes
# ---------------------------------------------------------------------------

def separator_to_dict(separator: Separator) -> Dict[str, Any]:
    return {
        "delta": list(separator.delta),
        "parts": [list(p) for p in separator.parts],
        "minimal": separator.minimal,
    }


def ends_to_dict(verdict: EndsVerdict) -> Dict[str, Any]:
    witness = None
    if verdict.separator is not None:
        witness = {"type": "separator", "separator": separator_to_dict(verdict.separator)}
    elif verdict.vertex is not None:
        witness = {"type": "complete_graph_vertex", "vertex": verdict.vertex}
    return {"verdict": verdict.kind.value, "witness": witness, "note": verdict.note}


def semistability_to_dict(verdict: SemistabilityVerdict) -> Dict[str, Any]:
    return {
        "verdict": verdict.status.value,
        "witness": verdict.witness,
        "bad_vertices": list(verdict.bad_vertices),
        "potential_bad_vertices": list(verdict.potential_bad_vertices),
        "componentwise_extension": verdict.componentwise,
        "component_count": verdict.component_count,
    }


def _report(command: str, g: ProductGraph, **fields: Any) -> Dict[str, Any]:
    return {"schema": config.output.report_schema, "command": command, "subject": list(g.names), **fields}


# ---------------------------------------------------------------------------
# Solicitud y despacho
# ---------------------------------------------------------------------------

@dataclass
class AnalysisRequest:
    input_path: Path
    command: str
    output_format: Optional[str] = None
    inner: Optional[int] = None
    outer: Optional[int] = None
    stability: Optional[int] = None
    ball_cap: Optional[int] = None
    vertices: Optional[Tuple[str, ...]] = None

    @property
    def format(self) -> str:
        if self.output_format:
            return self.output_format
        return FORMATS.get(self.command, ("json",))[0]

    def problems(self) -> List[Diagnostic]:
        found = []
        if self.command not in COMMANDS:
            return [Diagnostic("command", f"comando desconocido {self.command!r}")]
        if self.format not in FORMATS[self.command]:
            found.append(Diagnostic("format", f"{self.command} no admite el formato {self.format!r}"))
        oracle_params = (self.inner, self.outer, self.stability, self.ball_cap)
        if self.command != "oracle-ends" and any(p is not None for p in oracle_params):
            found.append(Diagnostic("oracle", "los parámetros del oráculo sólo aplican a oracle-ends"))
        if self.command == "oracle-ends":
            inner = config.oracle.inner if self.inner is None else self.inner
            outer = config.oracle.outer if self.outer is None else self.outer
            stability = config.oracle.stability if self.stability is None else self.stability
            if not 0 <= inner < outer:
                found.append(Diagnostic("oracle", "se requiere 0 <= inner < outer"))
            elif not 1 <= stability <= outer - inner:
                found.append(Diagnostic("oracle", "stability debe estar entre 1 y outer - inner"))
            if self.ball_cap is not None and self.ball_cap < 1:
                found.append(Diagnostic("oracle", "ball_cap debe ser positivo"))
        return found


def _analyze(g: ProductGraph) -> Tuple[int, bytes]:
    session = AnalysisSession(g)
    report = session.classify()
    status = report.semistability.status
    certificate = None
    if status is not SemistabilityStatus.UNKNOWN and len(g):
        certificate = certificate_to_json(build_certificate(g, session))

    analysis_logger.log_verdict("analyze", len(g), status.value, ends=report.ends.kind.value)
    unknown = status is SemistabilityStatus.UNKNOWN or report.ends.kind is EndsKind.UNKNOWN
    payload = _report(
        "analyze", g,
        ends=ends_to_dict(report.ends),
        semistability=semistability_to_dict(report.semistability),
        notes=list(report.notes),
        certificate=certificate,
    )
    return (EXIT_UNKNOWN if unknown else EXIT_OK), dump_json(payload)


def _ends(g: ProductGraph) -> Tuple[int, bytes]:
    verdict = AnalysisSession(g).ends_of()
    analysis_logger.log_verdict("ends", len(g), verdict.kind.value)
    code = EXIT_UNKNOWN if verdict.kind is EndsKind.UNKNOWN else EXIT_OK
    return code, dump_json(_report("ends", g, ends=ends_to_dict(verdict)))


def _separators(g: ProductGraph) -> Tuple[int, bytes]:
    separators = find_finite_complete_separators(g)
    return EXIT_OK, dump_json(_report("separators", g, separators=[separator_to_dict(s) for s in separators]))


def _certify(g: ProductGraph, output_format: str) -> Tuple[int, bytes]:
    certificate = build_certificate(g)
    if output_format == "dot":
        return EXIT_OK, export_certificate_dot(certificate).encode("utf-8")
    return EXIT_OK, dump_json(certificate_to_json(certificate))


def _present(g: ProductGraph, output_format: str) -> Tuple[int, bytes]:
    presentation = standard_presentation(g)
    if output_format == "text":
        return EXIT_OK, presentation.to_text().encode("utf-8")
    return EXIT_OK, dump_json(_report(
        "present", g,
        generators=[[symbol, owner] for symbol, owner in presentation.generators],
        relators=[format_word(w) for w in presentation.relators],
    ))


_AGREEMENT = {
    EndsKind.ZERO: {EstimateKind.ZERO},
    EndsKind.ONE: {EstimateKind.ONE},
    EndsKind.MORE_THAN_ONE: {EstimateKind.TWO, EstimateKind.MANY},
}


def _oracle_ends(g: ProductGraph, req: AnalysisRequest) -> Tuple[int, bytes]:
    inner = config.oracle.inner if req.inner is None else req.inner
    outer = config.oracle.outer if req.outer is None else req.outer
    stability = config.oracle.stability if req.stability is None else req.stability
    estimate = GraphProductOracle(g).estimate_ends(inner, outer, stability, cap=req.ball_cap)
    analytic = AnalysisSession(g).ends_of().kind

    agreement = None
    if analytic in _AGREEMENT and estimate.kind is not EstimateKind.INCONCLUSIVE:
        agreement = estimate.kind in _AGREEMENT[analytic]

    payload = _report(
        "oracle-ends", g,
        estimate={
            "kind": estimate.kind.value,
            "order": estimate.order,
            "counts": [list(c) for c in estimate.counts],
            "parameters": {"inner": inner, "outer": outer, "stability": stability},
        },
        analytic_ends=analytic.value,
        agreement=agreement,
    )
    code = EXIT_UNKNOWN if estimate.kind is EstimateKind.INCONCLUSIVE else EXIT_OK
    return code, dump_json(payload)


def _dispatch(g: ProductGraph, req: AnalysisRequest) -> Tuple[int, bytes]:
    if req.command == "analyze":
        return _analyze(g)
    if req.command == "ends":
        return _ends(g)
    if req.command == "separators":
        return _separators(g)
    if req.command == "certify":
        return _certify(g, req.format)
    if req.command == "present":
        return _present(g, req.format)
    return _oracle_ends(g, req)


def _report_error(error: Exception, req: AnalysisRequest, diagnostics: Sequence[Any] = ()):
    analysis_logger.log_error_with_context(error, req.command, {"input": str(req.input_path)})
    for item in diagnostics or [error]:
        console.print(f"[bold red]error[/bold red] {item}", highlight=False)


def run(req: AnalysisRequest) -> Tuple[int, bytes]:
    """Ejecuta una solicitud; nunca devuelve salida parcial junto a un error"""
    problems = req.problems()
    if problems:
        error = InputError(problems)
        _report_error(error, req, error.diagnostics)
        return EXIT_INPUT, b""

    try:
        data = Path(req.input_path).read_bytes()
    except OSError as e:
        _report_error(e, req, [Diagnostic(str(req.input_path), e.strerror or str(e))])
        return EXIT_INPUT, b""

    try:
        graph = parse_input(data)
        if req.vertices:
            graph = full_subgraph(graph, req.vertices)
        return _dispatch(graph, req)
    except InputError as e:
        _report_error(e, req, e.diagnostics)
        return EXIT_INPUT, b""
    except UnknownVerdictError as e:
        _report_error(e, req)
        return EXIT_UNKNOWN, b""
    except (VertexBoundExceededError, CertSearchExhausted, BallCapExceededError) as e:
        _report_error(e, req)
        return EXIT_BOUND, b""
    except (UnknownVertexError, NotFinitelyPresentedError, AnalysisError) as e:
        _report_error(e, req)
        return EXIT_INPUT, b""


# ---------------------------------------------------------------------------
# Punto de entrada click
# ---------------------------------------------------------------------------

def _split_vertices(value: Optional[str]) -> Optional[Tuple[str, ...]]:
    if not value:
        return None
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _execute(ctx: click.Context, req: AnalysisRequest):
    code, output = run(req)
    if output:
        stream = click.get_binary_stream("stdout")
        stream.write(output)
        stream.flush()
    ctx.exit(code)


_input_argument = click.argument("input_path", type=click.Path(path_type=Path))
_vertices_option = click.option("--vertices", default=None,
                                help="Subgrafo pleno a analizar (nombres separados por comas)")


@click.group()
def cli():
    """Análisis de productos de grafos de grupos."""


@cli.command()
@_input_argument
@_vertices_option
@click.pass_context
def analyze(ctx, input_path, vertices):
    """Finales, semiestabilidad, vértices malos y certificado."""
    _execute(ctx, AnalysisRequest(input_path, "analyze", vertices=_split_vertices(vertices)))


@cli.command()
@_input_argument
@_vertices_option
@click.pass_context
def ends(ctx, input_path, vertices):
    """Número de finales del producto."""
    _execute(ctx, AnalysisRequest(input_path, "ends", vertices=_split_vertices(vertices)))


@cli.command()
@_input_argument
@_vertices_option
@click.option("--format", "output_format", type=click.Choice(["json", "dot"]), default="json")
@click.pass_context
def certify(ctx, input_path, vertices, output_format):
    """Certificado de semiestabilidad (cert-v1 o DOT)."""
    _execute(ctx, AnalysisRequest(input_path, "certify", output_format, vertices=_split_vertices(vertices)))


@cli.command()
@_input_argument
@_vertices_option
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text")
@click.pass_context
def present(ctx, input_path, vertices, output_format):
    """Presentación estándar del producto."""
    _execute(ctx, AnalysisRequest(input_path, "present", output_format, vertices=_split_vertices(vertices)))


@cli.command()
@_input_argument
@_vertices_option
@click.pass_context
def separators(ctx, input_path, vertices):
    """Separadores completos con grupos de vértice finitos."""
    _execute(ctx, AnalysisRequest(input_path, "separators", vertices=_split_vertices(vertices)))


@cli.command("oracle-ends")
@_input_argument
@_vertices_option
@click.option("--inner", type=int, default=None)
@click.option("--outer", type=int, default=None)
@click.option("--stability", type=int, default=None)
@click.option("--ball-cap", type=int, default=None)
@click.pass_context
def oracle_ends(ctx, input_path, vertices, inner, outer, stability, ball_cap):
    """Estimación empírica de finales sobre el grafo de Cayley."""
    _execute(ctx, AnalysisRequest(input_path, "oracle-ends", inner=inner, outer=outer, stability=stability,
                                  ball_cap=ball_cap, vertices=_split_vertices(vertices)))


def main():
    cli(prog_name="gpa")


if __name__ == "__main__":
    main()
