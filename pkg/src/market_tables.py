"""
Tabulación de las curvas de demanda inversa y de las superficies de utilidad
y beneficio del modelo
"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np
import pandas as pd

from config import DEMAND_CONFIG, SURFACE_CONFIG
from utils.errors import DomainError
from utils.market_model import (
    ModelParams,
    PriceQuote,
    inverse_demand_p1,
    inverse_demand_p2,
    profit_c,
    profit_r,
    user_utility,
)

logger = logging.getLogger(__name__)

SURFACE_KINDS = ("utility", "profit_pr_pc", "profit_pc_wc")


@dataclass(frozen=True)
class DemandGrid:
    """Mallas lineales de P_r y R_c para las curvas de demanda"""
    p_r_min: float = DEMAND_CONFIG["p_r_min"]
    p_r_max: float = DEMAND_CONFIG["p_r_max"]
    p_r_points: int = DEMAND_CONFIG["p_r_points"]
    r_c_max: float = DEMAND_CONFIG["r_c_max"]
    r_c_points: int = DEMAND_CONFIG["r_c_points"]

    def __post_init__(self):
        if not (0.0 < self.p_r_min < self.p_r_max):
            raise DomainError(f"Malla de P_r inválida: se requiere 0 < {self.p_r_min!r} < {self.p_r_max!r}")
        if not self.r_c_max > 0.0:
            raise DomainError(f"r_c_max debe ser positivo, recibido {self.r_c_max!r}")
        if int(self.p_r_points) < 2 or int(self.r_c_points) < 2:
            raise DomainError("Las mallas de demanda requieren al menos 2 puntos")

    def p_r_axis(self) -> np.ndarray:
        return np.linspace(self.p_r_min, self.p_r_max, int(self.p_r_points))

    def r_c_axis(self) -> np.ndarray:
        return np.linspace(0.0, self.r_c_max, int(self.r_c_points))


def demand_curve_p1(params: ModelParams, p_r_axis: np.ndarray) -> pd.DataFrame:
    """Tabla `P_r,p1` de la demanda inversa de potencia de detección"""
    p_r_values = [float(p) for p in p_r_axis]
    return pd.DataFrame({
        "P_r": p_r_values,
        "p1": [inverse_demand_p1(p, params) for p in p_r_values],
    })


def demand_curve_p2(params: ModelParams, r_c_axis: np.ndarray) -> pd.DataFrame:
    """Tabla `R_c,p2` de la demanda inversa de tasa"""
    r_c_values = [float(r) for r in r_c_axis]
    return pd.DataFrame({
        "R_c": r_c_values,
        "p2": [inverse_demand_p2(r, params) for r in r_c_values],
    })


def tabulate_demand(params: ModelParams, grid: Optional[DemandGrid] = None) -> Dict[str, pd.DataFrame]:
    """
    Tabula ambas curvas de demanda inversa.

    Returns:
        Diccionario {"demand_p1": tabla P_r,p1, "demand_p2": tabla R_c,p2}
    """
    grid = grid or DemandGrid()
    return {
        "demand_p1": demand_curve_p1(params, grid.p_r_axis()),
        "demand_p2": demand_curve_p2(params, grid.r_c_axis()),
    }


def tabulate_surface(kind: str, params: ModelParams, points: Optional[int] = None) -> pd.DataFrame:
    """
    Tabula una superficie del modelo en formato largo `x,y,value`.

    Tipos disponibles:
        utility: U(P_r, R_c) a precios fijos p1 y p2
        profit_pr_pc: Π(P_r, P_c) con ancho de banda fijo
        profit_pc_wc: Π(P_c, W_c) con potencia de detección fija

    Args:
        kind: Tipo de superficie
        params: Parámetros del modelo
        points: Puntos por eje (por defecto SURFACE_CONFIG["points"])

    Returns:
        DataFrame con una fila por nodo, x variando más lento
    """
    if kind not in SURFACE_KINDS:
        raise DomainError(f"Superficie '{kind}' desconocida; opciones: {', '.join(SURFACE_KINDS)}")
    points = int(points or SURFACE_CONFIG["points"])
    if points < 2:
        raise DomainError("La superficie requiere al menos 2 puntos por eje")

    settings = SURFACE_CONFIG[kind]
    x_axis = np.linspace(*settings["x_range"], points)
    y_axis = np.linspace(*settings["y_range"], points)

    if kind == "utility":
        prices = PriceQuote(settings["p1"], settings["p2"])

        def evaluate(x: float, y: float) -> float:
            return user_utility((x, y), prices, params)
    elif kind == "profit_pr_pc":
        W_c = settings["W_c"]

        def evaluate(x: float, y: float) -> float:
            return profit_r(x, params) + profit_c(y, W_c, params)
    else:
        sensing = profit_r(settings["P_r"], params)

        def evaluate(x: float, y: float) -> float:
            return sensing + profit_c(x, y, params)

    rows = [(float(x), float(y), evaluate(float(x), float(y))) for x in x_axis for y in y_axis]
    logger.info(f"Superficie '{kind}' tabulada en {points}x{points} nodos")
    return pd.DataFrame(rows, columns=["x", "y", "value"])
