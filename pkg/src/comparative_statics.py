"""
Estática comparativa: barre un parámetro, resuelve el equilibrio en cada punto
de la malla y resume la dirección de cada variable de salida
"""

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from itertools import repeat
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from config import SWEEP_CONFIG
from src.equilibrium_solver import Equilibrium, SolverConfig, solve_equilibrium
from utils.errors import DomainError, IsacError
from utils.market_model import ModelParams

logger = logging.getLogger(__name__)

INCREASING = "increasing"
DECREASING = "decreasing"
CONSTANT = "constant"
NON_MONOTONE = "non-monotone"


@dataclass(frozen=True)
class SweepSpec:
    """
    Barrido lineal de un parámetro del modelo.

    Args:
        parameter: Campo de ModelParams que varía (w_p, w_w o alpha)
        start: Extremo inferior (incluido)
        stop: Extremo superior (incluido)
        steps: Número de puntos de la malla (>= 2)
        base: Parámetros fijos del resto del modelo
    """
    parameter: str
    start: float
    stop: float
    steps: int
    base: ModelParams = field(default_factory=ModelParams)

    def __post_init__(self):
        if self.parameter not in SWEEP_CONFIG["parameters"]:
            raise DomainError(
                f"Parámetro de barrido '{self.parameter}' no soportado; "
                f"opciones: {', '.join(SWEEP_CONFIG['parameters'])}"
            )
        if not (0.0 < self.start < self.stop) or not math.isfinite(self.stop):
            raise DomainError(f"Rango de barrido inválido: se requiere 0 < {self.start!r} < {self.stop!r}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise DomainError(f"El barrido requiere al menos 2 puntos, recibido {self.steps!r}")

    def values(self) -> List[float]:
        return [float(v) for v in np.linspace(self.start, self.stop, int(self.steps))]


class SweepPoint(NamedTuple):
    """Punto del barrido; `equilibrium` es None si el resolvedor falló (hueco)"""
    value: float
    equilibrium: Optional[Equilibrium]
    error: Optional[str] = None


@dataclass(frozen=True)
class DirectionSummary:
    output: str
    direction: str
    strict: bool
    turning_points: Tuple[float, ...] = ()
    gaps: int = 0


@dataclass(frozen=True)
class SweepResult:
    """Resultado de un barrido, ordenado por valor del parámetro"""
    spec: SweepSpec
    points: Tuple[SweepPoint, ...]
    monotonicity: Dict[str, DirectionSummary] = field(default_factory=dict)
    validity_violations: Tuple[float, ...] = ()

    @property
    def values(self) -> List[float]:
        return [point.value for point in self.points]

    @property
    def gaps(self) -> int:
        return sum(1 for point in self.points if point.equilibrium is None)

    def column(self, name: str) -> List[Optional[float]]:
        """Serie de una variable de salida; None en los huecos"""
        series = []
        for point in self.points:
            if point.equilibrium is None:
                series.append(None)
                continue
            record = point.equilibrium.as_record()
            if name not in record:
                raise DomainError(f"Variable de salida desconocida '{name}'")
            series.append(record[name])
        return series


def classify_direction(x: Sequence[float], y: Sequence[Optional[float]],
                       tol: float = SWEEP_CONFIG["constant_tol"]) -> Tuple[str, bool, Tuple[float, ...]]:
    """
    Clasifica la dirección de una serie a partir de sus diferencias consecutivas.

    Las diferencias con magnitud menor que `tol` cuentan como nulas y los
    huecos (None) se omiten.

    Args:
        x: Valores del parámetro
        y: Valores de la salida
        tol: Tolerancia absoluta de constancia

    Returns:
        (dirección, estricta, puntos de giro)
    """
    pairs = [(xi, yi) for xi, yi in zip(x, y) if yi is not None and math.isfinite(yi)]
    signs = []
    for (_, y0), (_, y1) in zip(pairs, pairs[1:]):
        delta = y1 - y0
        signs.append(1 if delta > tol else (-1 if delta < -tol else 0))

    nonzero = [(i, s) for i, s in enumerate(signs) if s != 0]
    if not nonzero:
        return CONSTANT, True, ()

    turning_points = []
    for (_, previous), (i, current) in zip(nonzero, nonzero[1:]):
        if current != previous:
            turning_points.append(pairs[i][0])
    if turning_points:
        return NON_MONOTONE, False, tuple(turning_points)

    strict = len(nonzero) == len(signs)
    return (INCREASING if nonzero[0][1] > 0 else DECREASING), strict, ()


def summarize_monotonicity(result: SweepResult,
                           outputs: Sequence[str] = SWEEP_CONFIG["outputs"]) -> Dict[str, DirectionSummary]:
    """
    Tabla de direcciones por variable de salida.

    Args:
        result: Barrido resuelto (no vacío)
        outputs: Variables a clasificar

    Returns:
        Diccionario salida -> DirectionSummary
    """
    if not result.points:
        raise DomainError("No se puede resumir un barrido vacío")

    summary = {}
    for output in outputs:
        direction, strict, turning = classify_direction(result.values, result.column(output))
        summary[output] = DirectionSummary(output, direction, strict, turning, result.gaps)
    return summary


def _solve_point(value: float, base: ModelParams, parameter: str, cfg: SolverConfig) -> SweepPoint:
    try:
        return SweepPoint(value, solve_equilibrium(base.with_value(parameter, value), cfg))
    except (IsacError, ArithmeticError, ValueError) as e:
        logger.warning(f"Fallo del resolvedor en {parameter}={value!r}: {e}")
        return SweepPoint(value, None, str(e))


def run_sweep(spec: SweepSpec, cfg: Optional[SolverConfig] = None,
              workers: int = 1, progress: bool = False) -> SweepResult:
    """
    Resuelve el equilibrio en cada punto de la malla del barrido.

    Los puntos son independientes; con workers > 1 se reparten en un pool de
    procesos y el resultado no depende del reparto. Los fallos por punto se
    registran como huecos.

    Args:
        spec: Definición del barrido
        cfg: Configuración del resolvedor
        workers: Procesos de trabajo
        progress: Muestra una barra de progreso tqdm

    Returns:
        SweepResult con puntos, direcciones y violaciones de validez
    """
    cfg = cfg or SolverConfig()
    values = spec.values()
    logger.info(f"Barrido de {spec.parameter} en [{spec.start}, {spec.stop}] con {len(values)} puntos")

    bar = tqdm(total=len(values), desc=f"Barrido {spec.parameter}", disable=not progress)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            points = []
            for point in pool.map(_solve_point, values, repeat(spec.base), repeat(spec.parameter), repeat(cfg)):
                points.append(point)
                bar.update(1)
    else:
        points = []
        for value in values:
            points.append(_solve_point(value, spec.base, spec.parameter, cfg))
            bar.update(1)
    bar.close()

    violations = tuple(
        point.value for point in points
        if point.equilibrium is not None and not point.equilibrium.sensing_demand_valid
    )
    for value in violations:
        logger.warning(f"Validez de la demanda de detección incumplida en {spec.parameter}={value!r}")

    result = SweepResult(spec, tuple(points), validity_violations=violations)
    return replace(result, monotonicity=summarize_monotonicity(result))


def reference_sweep_spec(parameter: str, base: Optional[ModelParams] = None,
                     steps: Optional[int] = None) -> SweepSpec:
    """Barrido de referencia de un parámetro con su rango y resolución por defecto"""
    if parameter not in SWEEP_CONFIG["reference_ranges"]:
        raise DomainError(f"No hay barrido de referencia para '{parameter}'")
    start, stop, default_steps = SWEEP_CONFIG["reference_ranges"][parameter]
    return SweepSpec(parameter, start, stop, steps or default_steps, base or ModelParams())


def segment_change(result: SweepResult, output: str, lo: float, hi: float) -> float:
    """
    Cambio de una salida entre los puntos de la malla más cercanos a `lo` y `hi`.

    Raises:
        DomainError: si alguno de los dos puntos es un hueco
    """
    values = np.asarray(result.values)
    column = result.column(output)
    i_lo = int(np.argmin(np.abs(values - lo)))
    i_hi = int(np.argmin(np.abs(values - hi)))
    if column[i_lo] is None or column[i_hi] is None:
        raise DomainError(f"El segmento [{lo}, {hi}] de '{output}' contiene huecos")
    return column[i_hi] - column[i_lo]
