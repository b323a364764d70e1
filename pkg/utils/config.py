"""
Configuración centralizada del toolkit de productos de grafos.
Maneja variables de entorno, límites de enumeración y parámetros del oráculo.
"""

import os
import warnings
from dataclasses import dataclass, field
from pathlib import Path
from dotenv import load_dotenv

# Cargar variables de entorno
load_dotenv()

DEFAULT_MAX_VERTICES = 24


def _env_max_vertices() -> int:
    """Lee GPA_MAX_VERTICES; valores inválidos vuelven al límite por defecto"""
    raw = os.getenv("GPA_MAX_VERTICES")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_VERTICES
    try:
        value = int(raw)
    except ValueError:
        warnings.warn(f"GPA_MAX_VERTICES={raw!r} no es un entero - usando {DEFAULT_MAX_VERTICES}", UserWarning)
        return DEFAULT_MAX_VERTICES
    if value < 1:
        warnings.warn(f"GPA_MAX_VERTICES={value} debe ser positivo - usando {DEFAULT_MAX_VERTICES}", UserWarning)
        return DEFAULT_MAX_VERTICES
    return value


@dataclass
class GraphConfig:
    """Límites para operaciones exponenciales sobre el grafo"""
    max_vertices: int = field(default_factory=_env_max_vertices)


@dataclass
class OracleConfig:
    """Configuración del oráculo de grafos de Cayley"""
    inner: int = 4
    outer: int = 12
    stability: int = 3
    ball_cap: int = 2_000_000
    subgroup_bound: int = 10_000
    assoc_exhaustive_max: int = 64  # tablas más grandes se verifican por muestreo
    assoc_samples: int = 10_000
    sample_seed: int = 0


@dataclass
class CertificateConfig:
    """Configuración del generador de certificados"""
    fallback_max_vertices: int = 10


@dataclass
class OutputConfig:
    """Configuración de salida y formatos versionados"""
    schemas_path: str = "schemas"
    catalog_path: str = "data/catalog"
    report_schema: str = "report-v1"
    certificate_schema: str = "cert-v1"
    json_indent: int = 2


class Config:
    """Configuración principal del sistema"""

    def __init__(self):
        self.environment = os.getenv("GPA_ENVIRONMENT", "local")
        self.debug = os.getenv("GPA_DEBUG", "False").lower() == "true"
        self.project_root = Path(__file__).parent.parent

        # Configuraciones por componente
        self.graph = GraphConfig()
        self.oracle = OracleConfig()
        self.certificate = CertificateConfig()
        self.output = OutputConfig()

        self._validate_config()

    def _validate_config(self):
        """Valida combinaciones de parámetros del oráculo"""
        if not 0 <= self.oracle.inner < self.oracle.outer:
            raise ValueError("OracleConfig requiere 0 <= inner < outer")
        if self.oracle.stability < 1 or self.oracle.stability > self.oracle.outer - self.oracle.inner:
            raise ValueError("OracleConfig.stability debe estar entre 1 y outer - inner")

    def get_absolute_path(self, relative_path: str) -> Path:
        """Convierte ruta relativa a absoluta desde project_root"""
        return self.project_root / relative_path


# Instancia global de configuración
config = Config()
