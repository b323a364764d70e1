"""
Paquete de servicios del toolkit de productos de grafos de grupos.
Contiene el modelo de grafo anotado, presentaciones, clasificadores,
certificados y el oráculo de grafos de Cayley.
"""

__version__ = "1.0.0"
__author__ = "Graph Products Team"
