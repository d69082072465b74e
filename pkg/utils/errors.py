"""
Excepciones del motor de equilibrio ISAC
"""

from typing import List, Optional, Sequence


class IsacError(Exception):
    """Error base del proyecto"""


class DomainError(IsacError, ValueError):
    """Argumento fuera del dominio de una función u operación"""


class ModelParamsError(DomainError):
    """Parámetro del modelo inválido; `field` nombra el campo culpable"""

    def __init__(self, field: str, value, reason: str = "debe ser estrictamente positivo"):
        self.field = field
        self.value = value
        super().__init__(f"Parámetro '{field}' inválido ({value!r}): {reason}")


class SeriesConvergenceError(IsacError, ArithmeticError):
    """La serie de Marcum no converge dentro del límite de términos"""

    def __init__(self, order: int, a: float, b: float, terms: int, last_term: float):
        self.order = order
        self.a = a
        self.b = b
        self.terms = terms
        self.last_term = last_term
        super().__init__(
            f"Serie de Marcum Q_{order}(a={a!r}, b={b!r}) sin converger tras "
            f"{terms} términos (último término {last_term:.3e})"
        )


class SolverError(IsacError, RuntimeError):
    """Fallo del optimizador"""


class ConfigError(IsacError, ValueError):
    """Error en un archivo de escenario"""

    def __init__(self, message: str, key: Optional[str] = None, line: Optional[int] = None):
        self.key = key
        self.line = line
        location = f" (línea {line})" if line is not None else ""
        super().__init__(f"{message}{location}")


class PlotColumnError(IsacError, ValueError):
    """Columna solicitada inexistente en la tabla a graficar"""

    def __init__(self, column: str, available: Sequence[str]):
        self.column = column
        self.available: List[str] = list(available)
        super().__init__(
            f"Columna '{column}' no encontrada. Columnas disponibles "
            f"({len(self.available)}): {', '.join(self.available)}"
        )
