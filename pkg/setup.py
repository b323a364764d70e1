"""
Script de setup para el toolkit de productos gráficos de grupos.
Verifica Python, instala dependencias, crea el archivo .env y prueba los imports.
"""

import subprocess
import sys
from pathlib import Path

CRITICAL_PACKAGES = {
    "networkx": "networkx",
    "numpy": "numpy",
    "sympy": "sympy",
    "pydantic": "pydantic",
    "jsonschema": "jsonschema",
    "structlog": "structlog",
    "click": "click",
    "rich": "rich",
    "dotenv": "python-dotenv",
    "tqdm": "tqdm",
}


def print_banner():
    """Imprime banner del toolkit"""
    print("=" * 60)
    print("🔷 PRODUCTOS GRÁFICOS DE GRUPOS - SETUP")
    print("Finales, semiestabilidad y certificados verificables")
    print("=" * 60)


def check_python_version():
    """Verifica versión de Python"""
    version = sys.version_info
    if version.major < 3 or (version.major == 3 and version.minor < 10):
        print("❌ Error: Se requiere Python 3.10 o superior")
        print(f"   Versión actual: {version.major}.{version.minor}.{version.micro}")
        return False

    print(f"✅ Python {version.major}.{version.minor}.{version.micro} - OK")
    return True


def _missing_packages():
    missing = []
    for module, package in CRITICAL_PACKAGES.items():
        result = subprocess.run(
            [sys.executable, "-c", f"import {module}"],
            capture_output=True,
            text=True,
            check=False,
        )
        if result.returncode != 0:
            missing.append(package)
            print(f"   ❌ {package} - No disponible")
        else:
            print(f"   ✅ {package} - OK")
    return missing


def install_dependencies():
    """Instala dependencias de requirements/local.txt si faltan"""
    requirements_file = Path("requirements/local.txt")
    if not requirements_file.exists():
        print("❌ Error: archivo requirements/local.txt no encontrado")
        return False

    print("🔍 Verificando dependencias existentes...")
    missing = _missing_packages()
    if not missing:
        print("✅ Todas las dependencias críticas están instaladas")
        return True

    print(f"📦 Faltan dependencias: {', '.join(missing)}")
    pip_cmd = [sys.executable, "-m", "pip", "install"]
    for extra in ([], ["--user"]):
        try:
            print(f"   🔄 pip install {' '.join(extra + ['-r', str(requirements_file)])}")
            subprocess.run(pip_cmd + extra + ["-r", str(requirements_file)],
                           check=True, capture_output=True, text=True)
            break
        except (subprocess.CalledProcessError, PermissionError, OSError) as e:
            print(f"   ⚠️  Error instalando: {e}")
    else:
        print("❌ No se pudieron instalar las dependencias")
        print("💡 Instala manualmente: pip install -r requirements/local.txt")
        return False

    print("🔍 Verificando instalación...")
    still_missing = _missing_packages()
    if still_missing:
        print(f"❌ Aún faltantes: {', '.join(still_missing)}")
        return False
    return True


def setup_environment_file():
    """Crea un archivo .env con los valores por defecto"""
    env_file = Path(".env")
    if env_file.exists():
        print("✅ Archivo .env ya existe")
        return True

    print("📝 Creando archivo .env básico...")
    env_file.write_text(
        "# Configuración del toolkit\n"
        "GPA_ENVIRONMENT=local\n"
        "GPA_DEBUG=False\n"
        "GPA_MAX_VERTICES=24\n",
        encoding="utf-8",
    )
    print("✅ Archivo .env creado")
    return True


def verify_installation():
    """Prueba los imports del proyecto y analiza una instancia del catálogo"""
    try:
        sys.path.insert(0, str(Path.cwd()))
        print("🧪 Probando imports del proyecto...")

        from utils.config import config
        print(f"✅ Configuración del proyecto - OK (max_vertices={config.graph.max_vertices})")

        from services.catalog import builtin_catalog
        from services.classify import classify_graph
        instance = builtin_catalog()[0]
        report = classify_graph(instance.graph)
        print(f"✅ Clasificador - OK ({instance.name}: {report.ends.kind.value})")

        from interfaces.cli import cli
        print("✅ CLI - OK")
        return True
    except Exception as e:
        print(f"❌ Error en verificación del proyecto: {e}")
        return False


def print_next_steps():
    """Imprime próximos pasos"""
    print("\n" + "=" * 60)
    print("🎉 SETUP COMPLETADO")
    print("=" * 60)

    print("\n📋 PRÓXIMOS PASOS:")
    print("\n1. Analizar un grafo:")
    print("   python run_analysis.py analyze data/catalog/racg_path3.json")
    print("\n2. Ejecutar las pruebas:")
    print("   pytest            (rápidas)")
    print("   pytest -m slow    (enumeraciones de 6 vértices)")
    print("\n3. Criterios de aceptación completos:")
    print("   python run_acceptance.py")
    print("\n4. Documentación:")
    print("   - docs/README.md")
    print("   - docs/FORMATS.md")
    print("\n" + "=" * 60)


def main():
    """Función principal de setup"""
    print_banner()

    if not check_python_version():
        sys.exit(1)

    steps = [
        ("Dependencias", install_dependencies),
        ("Archivo entorno", setup_environment_file),
        ("Verificación", verify_installation),
    ]

    print(f"\n🚀 Ejecutando {len(steps)} pasos de configuración...\n")

    for step_name, step_func in steps:
        print(f"📍 {step_name}...")
        if not step_func():
            print(f"❌ Error en paso: {step_name}")
            print("🛑 Setup interrumpido")
            sys.exit(1)
        print()

    print_next_steps()


if __name__ == "__main__":
    if len(sys.argv) > 1:
        # Invocado por el backend de setuptools (pip install): metadatos en pyproject.toml
        from setuptools import setup
        setup()
    else:
        main()
