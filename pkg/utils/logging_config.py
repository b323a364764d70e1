"""
Configuración de logging estructurado para el toolkit.
Todo el logging va a stderr: stdout queda reservado para los reportes.
"""

import logging
import structlog
import sys
from typing import Any, Dict, Optional

from utils.config import config


def configure_logging(level: Optional[int] = None):
    """Configura el sistema de logging estructurado (level fija el umbral explícitamente)"""
    if level is None:
        level = logging.DEBUG if config.debug else logging.INFO

    logging.basicConfig(
        format="%(message)s",
        stream=sys.stderr,
        level=level,
    )

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.processors.add_log_level,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.dev.ConsoleRenderer() if config.debug else structlog.processors.JSONRenderer(),
        ],
        wrapper_class=structlog.make_filtering_bound_logger(level),
        logger_factory=structlog.PrintLoggerFactory(file=sys.stderr),
        cache_logger_on_first_use=True,
    )


def get_logger(name: str) -> structlog.BoundLogger:
    """Obtiene un logger estructurado para un componente específico"""
    return structlog.get_logger(name)


class AnalysisLogger:
    """Logger especializado para veredictos y certificados"""

    def __init__(self):
        self.logger = get_logger("analysis")

    def log_verdict(self, command: str, vertex_count: int, verdict: str, **kwargs):
        """Log de un veredicto producido por un clasificador"""
        self.logger.info(
            "analysis_verdict",
            command=command,
            vertex_count=vertex_count,
            verdict=verdict,
            **kwargs
        )

    def log_certificate(self, verdict: str, node_count: int, accepted: bool,
                        violation: Optional[Dict[str, Any]] = None):
        """Log de generación/verificación de certificado"""
        log_data = {
            "verdict": verdict,
            "node_count": node_count,
            "accepted": accepted,
        }
        if violation:
            log_data["violation"] = violation
        self.logger.debug("certificate_checked", **log_data)

    def log_error_with_context(self, error: Exception, command: str, context: Dict[str, Any]):
        """Log detallado para errores con contexto completo"""
        self.logger.error(
            "analysis_error",
            command=command,
            error_type=type(error).__name__,
            error_message=str(error),
            context=context
        )


class PerformanceLogger:
    """Logger especializado para métricas de performance"""

    def __init__(self):
        self.logger = get_logger("performance")

    def log_operation_time(self, operation: str, duration_seconds: float, **kwargs):
        """Log de tiempo de operación"""
        self.logger.debug(
            "operation_performance",
            operation=operation,
            duration_seconds=round(duration_seconds, 6),
            **kwargs
        )

    def log_enumeration(self, operation: str, explored: int, duration_seconds: float, **kwargs):
        """Log específico para enumeraciones (bolas de Cayley, separadores)"""
        self.logger.debug(
            "enumeration_performance",
            operation=operation,
            explored=explored,
            duration_seconds=round(duration_seconds, 6),
            **kwargs
        )


# Configurar logging al importar el módulo
configure_logging()

# Instancias globales de loggers especializados
analysis_logger = AnalysisLogger()
performance_logger = PerformanceLogger()
