"""
Carga y validación de los esquemas JSON versionados (graph-v1, report-v1, cert-v1).
"""

import json
from functools import lru_cache
from typing import Any, Dict, List

from jsonschema import Draft202012Validator

from utils.config import config


class SchemaValidationError(ValueError):
    """El documento no cumple el esquema declarado"""

    def __init__(self, schema_name: str, errors: List[str]):
        self.schema_name = schema_name
        self.errors = errors
        super().__init__(f"{schema_name}: {'; '.join(errors)}")


@lru_cache(maxsize=None)
def load_schema(name: str) -> Dict[str, Any]:
    path = config.get_absolute_path(config.output.schemas_path) / f"{name}.json"
    with open(path, "r", encoding="utf-8") as f:
        schema = json.load(f)
    Draft202012Validator.check_schema(schema)
    return schema


def schema_errors(data: Any, name: str) -> List[str]:
    """Mensajes de error con la ruta JSON de cada violación"""
    validator = Draft202012Validator(load_schema(name))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    return [f"/{'/'.join(str(p) for p in error.absolute_path)}: {error.message}" for error in errors]


def validate_document(data: Any, name: str):
    errors = schema_errors(data, name)
    if errors:
        raise SchemaValidationError(name, errors)
