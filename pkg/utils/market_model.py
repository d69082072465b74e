"""
Modelo económico del servicio ISAC: métricas de calidad, utilidad del usuario
representativo, demandas inversas, función de producción, costos y beneficios
"""

import math
from dataclasses import asdict, dataclass, fields, replace
from numbers import Real
from typing import Any, Dict, Mapping, Tuple

from config import MODEL_DEFAULTS
from utils.errors import DomainError, ModelParamsError
from utils.special_functions import marcum_q, marcum_q_complement, marcum_q_difference

LN2 = math.log(2.0)


@dataclass(frozen=True)
class ModelParams:
    """
    Parámetros exógenos del modelo.

    Args:
        gamma: Exponente de falsa alarma γ = -ln P_FA
        gamma_T: Ganancia agregada del canal de detección por unidad de potencia
        gamma_C: Ganancia agregada de comunicación (ancho de banda por unidad de potencia)
        alpha: Disposición a pagar por la calidad de detección
        beta: Disposición a pagar por la calidad de comunicación
        w_p: Precio unitario de la potencia (P_r y P_c)
        w_w: Precio unitario del ancho de banda
    """
    gamma: float = MODEL_DEFAULTS["gamma"]
    gamma_T: float = MODEL_DEFAULTS["gamma_T"]
    gamma_C: float = MODEL_DEFAULTS["gamma_C"]
    alpha: float = MODEL_DEFAULTS["alpha"]
    beta: float = MODEL_DEFAULTS["beta"]
    w_p: float = MODEL_DEFAULTS["w_p"]
    w_w: float = MODEL_DEFAULTS["w_w"]

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, Real):
                raise ModelParamsError(item.name, value, "debe ser numérico")
            if not math.isfinite(value) or value <= 0.0:
                raise ModelParamsError(item.name, value)
            object.__setattr__(self, item.name, float(value))

    @classmethod
    def from_mapping(cls, values: Mapping[str, Any]) -> "ModelParams":
        """Construye los parámetros completando con los valores por defecto"""
        known = {item.name for item in fields(cls)}
        for key in values:
            if key not in known:
                raise ModelParamsError(key, values[key], "parámetro desconocido")
        return cls(**{**MODEL_DEFAULTS, **dict(values)})

    def with_value(self, name: str, value: float) -> "ModelParams":
        """Copia con un parámetro sustituido (revalidada)"""
        if name not in {item.name for item in fields(self)}:
            raise ModelParamsError(name, value, "parámetro desconocido")
        return replace(self, **{name: value})

    def to_dict(self) -> Dict[str, float]:
        return asdict(self)


@dataclass(frozen=True)
class Allocation:
    """Cantidades de factores: potencia de detección, potencia y ancho de banda de comunicación"""
    P_r: float
    P_c: float
    W_c: float

    def __post_init__(self):
        for item in fields(self):
            value = float(getattr(self, item.name))
            if math.isnan(value) or value < 0.0:
                raise DomainError(f"La asignación '{item.name}' debe ser no negativa, recibido {value!r}")
            object.__setattr__(self, item.name, value)


@dataclass(frozen=True)
class PriceQuote:
    """Precios unitarios de las dos mercancías"""
    p1: float
    p2: float

    def __post_init__(self):
        for item in fields(self):
            value = float(getattr(self, item.name))
            if math.isnan(value) or value < 0.0:
                raise DomainError(f"El precio '{item.name}' debe ser no negativo, recibido {value!r}")
            object.__setattr__(self, item.name, value)


def _non_negative(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or value < 0.0:
        raise DomainError(f"'{name}' debe ser no negativo, recibido {value!r}")
    return value


def _marcum_arguments(P_r: float, params: ModelParams) -> Tuple[float, float]:
    return math.sqrt(2.0 * P_r * params.gamma_T), math.sqrt(2.0 * params.gamma)


# Métricas de calidad

def detection_probability(P_r: float, params: ModelParams) -> float:
    """
    Probabilidad de detección P_D = Q_1(sqrt(2 P_r γ_T), sqrt(2γ)); es también
    la métrica de detección θ(P_r). En P_r = 0 vale exactamente P_FA = e^{-γ}.
    """
    P_r = _non_negative("P_r", P_r)
    a, b = _marcum_arguments(P_r, params)
    return marcum_q(1, a, b)


def miss_probability(P_r: float, params: ModelParams) -> float:
    """1 - P_D con precisión relativa, útil cuando la detección es casi segura"""
    P_r = _non_negative("P_r", P_r)
    a, b = _marcum_arguments(P_r, params)
    return marcum_q_complement(1, a, b)


def comm_utility(R_c: float) -> float:
    """Métrica de comunicación η(R_c) = ln(1 + R_c)"""
    R_c = _non_negative("R_c", R_c)
    return math.log1p(R_c)


# Función de producción

def comm_rate(P_c: float, W_c: float, params: ModelParams) -> float:
    """
    Función de producción de Shannon R_c = W_c log2(1 + P_c γ̃_C / W_c).

    Args:
        P_c: Potencia de comunicación
        W_c: Ancho de banda; en W_c = 0 la tasa vale 0 por continuidad
        params: Parámetros del modelo

    Returns:
        Tasa de comunicación producida
    """
    P_c = _non_negative("P_c", P_c)
    W_c = _non_negative("W_c", W_c)
    if P_c == 0.0 or W_c == 0.0:
        return 0.0
    return W_c * math.log1p(P_c * params.gamma_C / W_c) / LN2


def comm_rate_gradient(P_c: float, W_c: float, params: ModelParams) -> Tuple[float, float]:
    """
    Gradiente analítico de la función de producción.

    Returns:
        (∂ρ/∂P_c, ∂ρ/∂W_c) con x = P_c γ̃_C / W_c
    """
    P_c = _non_negative("P_c", P_c)
    W_c = _non_negative("W_c", W_c)
    if W_c == 0.0:
        raise DomainError("El gradiente de la tasa requiere W_c > 0")
    x = P_c * params.gamma_C / W_c
    d_power = params.gamma_C / (LN2 * (1.0 + x))
    d_bandwidth = math.log1p(x) / LN2 - x / (LN2 * (1.0 + x))
    return d_power, d_bandwidth


# Utilidad y demandas inversas

def user_utility(alloc_quantities: Tuple[float, float], prices: PriceQuote, params: ModelParams) -> float:
    """
    Utilidad cuasilineal U = α θ(P_r) + β η(R_c) - p1 P_r - p2 R_c.

    Args:
        alloc_quantities: Par (P_r, R_c) de mercancías demandadas
        prices: Precios unitarios
        params: Parámetros del modelo
    """
    P_r, R_c = alloc_quantities
    P_r = _non_negative("P_r", P_r)
    R_c = _non_negative("R_c", R_c)
    sensing = params.alpha * detection_probability(P_r, params) - prices.p1 * P_r
    communication = params.beta * comm_utility(R_c) - prices.p2 * R_c
    return sensing + communication


def sensing_surplus(P_r: float, p1: float, params: ModelParams) -> float:
    """Beneficio neto de detección del usuario α θ(P_r) - p1 P_r"""
    return params.alpha * detection_probability(P_r, params) - p1 * P_r


def inverse_demand_p2(R_c: float, params: ModelParams) -> float:
    """Demanda inversa de tasa p2 = β / (1 + R_c)"""
    R_c = _non_negative("R_c", R_c)
    return params.beta / (1.0 + R_c)


def demand_Rc(p2: float, params: ModelParams) -> float:
    """Demanda de tasa R_c = β / p2 - 1, definida para 0 < p2 <= β"""
    p2 = float(p2)
    if math.isnan(p2) or p2 <= 0.0 or p2 > params.beta:
        raise DomainError(f"El precio p2 debe cumplir 0 < p2 <= β={params.beta!r}, recibido {p2!r}")
    return params.beta / p2 - 1.0


def inverse_demand_p1(P_r: float, params: ModelParams) -> float:
    """
    Demanda inversa de potencia de detección, igual a la utilidad marginal α dθ/dP_r:

        p1 = α γ_T [Q_2(sqrt(2 P_r γ_T), sqrt(2γ)) - Q_1(sqrt(2 P_r γ_T), sqrt(2γ))]

    Args:
        P_r: Potencia de detección estrictamente positiva
        params: Parámetros del modelo

    Returns:
        Precio p1 no negativo
    """
    P_r = float(P_r)
    if math.isnan(P_r) or P_r <= 0.0:
        raise DomainError(f"La demanda inversa p1 requiere P_r > 0, recibido {P_r!r}")
    a, b = _marcum_arguments(P_r, params)
    return params.alpha * params.gamma_T * marcum_q_difference(a, b)


# Costos y beneficios

def costs(alloc: Allocation, params: ModelParams) -> float:
    """Costos c = w_p (P_r + P_c) + w_w W_c"""
    return params.w_p * (alloc.P_r + alloc.P_c) + params.w_w * alloc.W_c


def comm_revenue(R_c: float, params: ModelParams) -> float:
    """Ingreso de comunicación p2(R_c) R_c = β R_c / (1 + R_c), acotado por β"""
    R_c = _non_negative("R_c", R_c)
    return params.beta * R_c / (1.0 + R_c)


def profit_r(P_r: float, params: ModelParams) -> float:
    """Beneficio de detección Π_r = p1(P_r) P_r - w_p P_r"""
    return inverse_demand_p1(P_r, params) * P_r - params.w_p * P_r


def profit_c(P_c: float, W_c: float, params: ModelParams) -> float:
    """Beneficio de comunicación Π_c = β ρ / (1 + ρ) - w_p P_c - w_w W_c"""
    W_c = float(W_c)
    if math.isnan(W_c) or W_c <= 0.0:
        raise DomainError(f"El beneficio de comunicación requiere W_c > 0, recibido {W_c!r}")
    rate = comm_rate(P_c, W_c, params)
    return comm_revenue(rate, params) - params.w_p * P_c - params.w_w * W_c


def profit_c_gradient(P_c: float, W_c: float, params: ModelParams) -> Tuple[float, float]:
    """
    Gradiente analítico de Π_c: ingreso marginal del producto de cada factor
    menos su precio.

    Returns:
        (∂Π_c/∂P_c, ∂Π_c/∂W_c)
    """
    rate = comm_rate(P_c, W_c, params)
    d_power, d_bandwidth = comm_rate_gradient(P_c, W_c, params)
    marginal_revenue = params.beta / (1.0 + rate) ** 2
    return marginal_revenue * d_power - params.w_p, marginal_revenue * d_bandwidth - params.w_w


def profit_total(alloc: Allocation, params: ModelParams) -> float:
    """Beneficio total Π = Π_r(P_r) + Π_c(P_c, W_c) (problema separable)"""
    return profit_r(alloc.P_r, params) + profit_c(alloc.P_c, alloc.W_c, params)
