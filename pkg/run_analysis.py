"""
Script para ejecutar el CLI de análisis de manera independiente.
Configura el path del proyecto y delega en interfaces.cli.
Uso: python run_analysis.py analyze data/catalog/racg_path3.json
"""

import os
import sys
from pathlib import Path

# Agregar el directorio raíz al path
project_root = Path(__file__).parent
sys.path.insert(0, str(project_root))


def setup_environment():
    """Configura variables de entorno necesarias"""
    os.environ["PYTHONPATH"] = str(project_root)
    os.environ.setdefault("GPA_ENVIRONMENT", "local")


def check_dependencies() -> bool:
    """Verifica que las dependencias estén instaladas (mensajes a stderr)"""
    required_packages = {
        "networkx": "networkx>=3.0",
        "numpy": "numpy>=2.0",
        "pydantic": "pydantic>=2.0",
        "structlog": "structlog",
        "click": "click",
        "rich": "rich",
        "jsonschema": "jsonschema",
        "dotenv": "python-dotenv",
    }
    missing = []
    for package, description in required_packages.items():
        try:
            __import__(package)
        except ImportError:
            missing.append(description)

    if missing:
        print(f"❌ Dependencias faltantes: {', '.join(missing)}", file=sys.stderr)
        print("   pip install -r requirements/local.txt", file=sys.stderr)
        return False
    return True


def main():
    """Función principal"""
    setup_environment()
    if not check_dependencies():
        sys.exit(1)

    from interfaces.cli import main as cli_main
    cli_main()


if __name__ == "__main__":
    main()
