"""
Tablas de multiplicación de grupos finitos.
Realización concreta de los grupos de vértice finitos que consume el oráculo.
"""

from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from utils.config import config
from utils.logging_config import get_logger

logger = get_logger("group_tables")


class GroupTableError(ValueError):
    """La tabla no define un grupo (clausura, identidad, inversos o asociatividad)"""


class FiniteGroupTable:
    """
    Grupo finito como lista de nombres de elementos y tabla de Cayley sobre índices.
    El índice 0 es siempre la identidad. Los métodos trabajan sobre índices.
    """

    def __init__(self, elements: Sequence[str], mul: Sequence[Sequence[int]], validate: bool = True):
        self.elements: Tuple[str, ...] = tuple(str(e) for e in elements)
        self.mul: Tuple[Tuple[int, ...], ...] = tuple(tuple(int(x) for x in row) for row in mul)
        if validate:
            self._validate()

    # -- construcción -------------------------------------------------

    @classmethod
    def cyclic(cls, n: int, prefix: str = "g") -> "FiniteGroupTable":
        """Grupo cíclico Z_n con elementos e, g1, ..., g(n-1)"""
        if n < 1:
            raise GroupTableError("El orden de un grupo cíclico debe ser positivo")
        names = ["e"] + [f"{prefix}{k}" for k in range(1, n)]
        if n == 2:
            names = ["e", "x"]
        mul = [[(i + j) % n for j in range(n)] for i in range(n)]
        return cls(names, mul)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FiniteGroupTable":
        """Carga el formato JSON {"elements": [...], "mul": [[...]]}"""
        if "elements" not in data or "mul" not in data:
            raise GroupTableError("La tabla requiere las claves 'elements' y 'mul'")
        return cls(data["elements"], data["mul"])

    def to_dict(self) -> Dict[str, Any]:
        return {"elements": list(self.elements), "mul": [list(row) for row in self.mul]}

    def direct_product(self, other: "FiniteGroupTable") -> "FiniteGroupTable":
        """Producto directo con nombres 'a*b'; el par (0, 0) queda en el índice 0"""
        m = len(other)
        names = [f"{a}*{b}" for a in self.elements for b in other.elements]
        mul = []
        for i in range(len(self) * m):
            a1, b1 = divmod(i, m)
            row = []
            for j in range(len(self) * m):
                a2, b2 = divmod(j, m)
                row.append(self.mul[a1][a2] * m + other.mul[b1][b2])
            mul.append(row)
        return FiniteGroupTable(names, mul)

    # -- validación ---------------------------------------------------

    def _validate(self):
        n = len(self.elements)
        if n == 0:
            raise GroupTableError("La tabla no tiene elementos")
        if len(set(self.elements)) != n:
            raise GroupTableError("Los nombres de elementos deben ser únicos")
        if len(self.mul) != n or any(len(row) != n for row in self.mul):
            raise GroupTableError(f"La tabla 'mul' debe ser {n}x{n}")

        table = self.table
        if table.min() < 0 or table.max() >= n:
            raise GroupTableError("La tabla no es cerrada: hay índices fuera de rango")

        idx = np.arange(n)
        if not (np.array_equal(table[0], idx) and np.array_equal(table[:, 0], idx)):
            raise GroupTableError("El índice 0 no actúa como identidad")

        # Inverso bilateral: cada fila y cada columna contienen la identidad
        if not all((table[i] == 0).any() for i in range(n)):
            raise GroupTableError("Hay elementos sin inverso")
        inv = self.inverses
        if not all(table[inv[i], i] == 0 for i in range(n)):
            raise GroupTableError("Hay inversos que no son bilaterales")

        self._check_associativity()

    def _check_associativity(self):
        n = len(self.elements)
        table = self.table
        if n <= config.oracle.assoc_exhaustive_max:
            # (ab)c contra a(bc) para todas las ternas
            left = table[table[:, :, None], np.arange(n)[None, None, :]]
            right = table[np.arange(n)[:, None, None], table[None, :, :]]
            bad = np.argwhere(left != right)
            if len(bad):
                a, b, c = (int(x) for x in bad[0])
                raise GroupTableError(f"No es asociativa en la terna ({self.elements[a]}, {self.elements[b]}, {self.elements[c]})")
            return

        rng = np.random.default_rng(config.oracle.sample_seed)
        triples = rng.integers(0, n, size=(config.oracle.assoc_samples, 3))
        a, b, c = triples[:, 0], triples[:, 1], triples[:, 2]
        mismatch = table[table[a, b], c] != table[a, table[b, c]]
        if mismatch.any():
            k = int(np.argmax(mismatch))
            raise GroupTableError(
                f"No es asociativa en la terna muestreada ({self.elements[a[k]]}, {self.elements[b[k]]}, {self.elements[c[k]]})"
            )
        logger.debug("Asociatividad verificada por muestreo", order=n, samples=config.oracle.assoc_samples)

    # -- aritmética ---------------------------------------------------

    @cached_property
    def table(self) -> np.ndarray:
        return np.array(self.mul, dtype=np.int64)

    @cached_property
    def inverses(self) -> Tuple[int, ...]:
        table = self.table
        return tuple(int(np.argmax(table[i] == 0)) for i in range(len(self.elements)))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def mult(self, a: int, b: int) -> int:
        return self.mul[a][b]

    def inv(self, a: int) -> int:
        return self.inverses[a]

    def index_of(self, name: str) -> Optional[int]:
        try:
            return self.elements.index(name)
        except ValueError:
            return None

    def non_identity(self) -> List[int]:
        return list(range(1, len(self.elements)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FiniteGroupTable):
            return NotImplemented
        return self.elements == other.elements and self.mul == other.mul

    def __hash__(self) -> int:
        return hash((self.elements, self.mul))

    def __repr__(self) -> str:
        return f"FiniteGroupTable(order={len(self.elements)})"
