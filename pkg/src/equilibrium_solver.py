"""
Resolvedor del equilibrio de monopolio del servicio ISAC.

El problema de maximización del beneficio es separable: la potencia de
detección P_r se decide por un lado y los factores de comunicación
(P_c, W_c) por otro. Cada subproblema se resuelve numéricamente y se
verifica contra un oráculo de fuerza bruta sobre una malla.
"""

import logging
import math
from dataclasses import asdict, dataclass, fields
from itertools import product
from typing import Callable, Dict, List, NamedTuple, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize, minimize_scalar
from scipy.special import ive

from config import SOLVER_CONFIG
from utils.errors import DomainError, SolverError
from utils.market_model import (
    LN2,
    Allocation,
    ModelParams,
    comm_rate,
    comm_utility,
    detection_probability,
    inverse_demand_p1,
    inverse_demand_p2,
    profit_c,
    profit_c_gradient,
    profit_r,
    sensing_surplus,
)

logger = logging.getLogger(__name__)

INTERIOR = "interior"
BOUNDARY = "boundary"
DEGENERATE = "degenerate"


@dataclass(frozen=True)
class SolverConfig:
    """
    Tolerancias, intervalos de búsqueda y densidades de malla del resolvedor.

    Args:
        p_r_bracket: Intervalo de búsqueda de P_r
        pc_wc_bracket: Rectángulo de búsqueda ((P_c min, P_c max), (W_c min, W_c max))
        rel_tol: Tolerancia de convergencia sobre los argumentos
        foc_tol: Residuo máximo aceptable de las condiciones de primer orden
        oracle_grid: Puntos por eje de la malla del oráculo
        coarse_scan_points: Puntos del barrido logarítmico previo sobre P_r
        simplex_grid: Semillas por eje del símplex multiarranque
        oracle_refine_grid: Puntos por eje en cada refinamiento del oráculo
        oracle_refine_levels: Niveles de refinamiento del oráculo
        max_simplex_iterations: Iteraciones máximas de Nelder-Mead por semilla
    """
    p_r_bracket: Tuple[float, float] = SOLVER_CONFIG["p_r_bracket"]
    pc_wc_bracket: Tuple[Tuple[float, float], Tuple[float, float]] = (
        SOLVER_CONFIG["pc_bracket"], SOLVER_CONFIG["wc_bracket"]
    )
    rel_tol: float = SOLVER_CONFIG["rel_tol"]
    foc_tol: float = SOLVER_CONFIG["foc_tol"]
    oracle_grid: int = SOLVER_CONFIG["oracle_grid"]
    coarse_scan_points: int = SOLVER_CONFIG["coarse_scan_points"]
    simplex_grid: int = SOLVER_CONFIG["simplex_grid"]
    oracle_refine_grid: int = SOLVER_CONFIG["oracle_refine_grid"]
    oracle_refine_levels: int = SOLVER_CONFIG["oracle_refine_levels"]
    max_simplex_iterations: int = SOLVER_CONFIG["max_simplex_iterations"]

    def __post_init__(self):
        brackets = {
            "p_r_bracket": self.p_r_bracket,
            "pc_bracket": self.pc_wc_bracket[0],
            "wc_bracket": self.pc_wc_bracket[1],
        }
        for name, (low, high) in brackets.items():
            if not (0.0 < low < high) or not math.isfinite(high):
                raise DomainError(f"Intervalo '{name}' inválido: se requiere 0 < {low!r} < {high!r}")
        for name in ("rel_tol", "foc_tol"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"La tolerancia '{name}' debe ser positiva")
        for name in ("oracle_grid", "coarse_scan_points", "oracle_refine_grid"):
            if int(getattr(self, name)) < 3:
                raise DomainError(f"'{name}' debe ser al menos 3")
        if int(self.simplex_grid) < 1 or int(self.oracle_refine_levels) < 0:
            raise DomainError("'simplex_grid' debe ser >= 1 y 'oracle_refine_levels' >= 0")

    def with_overrides(self, **overrides) -> "SolverConfig":
        values = {item.name: getattr(self, item.name) for item in fields(self)}
        values.update(overrides)
        return SolverConfig(**values)


@dataclass(frozen=True)
class SubproblemDiagnostics:
    """Diagnóstico de un subproblema de maximización"""
    status: str
    profit: float
    foc_residuals: Tuple[float, ...]
    candidates: int
    boundary: bool
    degenerate: bool


@dataclass(frozen=True)
class Equilibrium:
    """Resultado endógeno del mercado más los diagnósticos de validez"""
    P_r_star: float
    P_c_star: float
    W_c_star: float
    R_c_star: float
    p1: float
    p2: float
    theta: float
    eta: float
    profit_r: float
    profit_c: float
    profit: float
    sensing_demand_valid: bool
    foc_residuals: Tuple[float, float, float]
    sensing_demand_local: bool = True
    status_r: str = INTERIOR
    status_c: str = INTERIOR

    @property
    def degenerate(self) -> bool:
        return DEGENERATE in (self.status_r, self.status_c)

    @property
    def boundary(self) -> bool:
        return BOUNDARY in (self.status_r, self.status_c)

    @property
    def valid_label(self) -> str:
        """Etiqueta de la columna `valid` de las tablas de barrido"""
        if self.degenerate:
            return DEGENERATE
        if self.boundary:
            return BOUNDARY
        return "true" if self.sensing_demand_valid else "false"

    def as_record(self) -> Dict[str, float]:
        """Columnas de salida con los nombres del esquema CSV"""
        return {
            "P_r": self.P_r_star,
            "P_c": self.P_c_star,
            "W_c": self.W_c_star,
            "R_c": self.R_c_star,
            "p1": self.p1,
            "p2": self.p2,
            "theta": self.theta,
            "eta": self.eta,
            "profit_r": self.profit_r,
            "profit_c": self.profit_c,
            "profit": self.profit,
        }

    def to_dict(self) -> Dict:
        data = asdict(self)
        data["foc_residuals"] = list(self.foc_residuals)
        data["valid"] = self.valid_label
        return data


class CommOptimum(NamedTuple):
    P_c: float
    W_c: float
    R_c: float
    unit_cost: float


class OracleGrids(NamedTuple):
    p_r_axis: np.ndarray
    p_c_axis: np.ndarray
    w_c_axis: np.ndarray
    profit_r_values: np.ndarray
    profit_c_values: np.ndarray


def richardson_derivative(func: Callable[[float], float], x: float, step: float) -> float:
    """
    Derivada por diferencias centrales con una extrapolación de Richardson.

    Args:
        func: Función escalar
        x: Punto de evaluación
        step: Paso base h (se combinan h y h/2)
    """
    def central(h: float) -> float:
        return (func(x + h) - func(x - h)) / (2.0 * h)

    return (4.0 * central(0.5 * step) - central(step)) / 3.0


def _near_edge(x: float, low: float, high: float, tol: float) -> bool:
    return x <= low * (1.0 + tol) or x >= high * (1.0 - tol)


def _local_maxima(values: np.ndarray) -> List[int]:
    indices = []
    last = len(values) - 1
    if values[0] > values[1]:
        indices.append(0)
    for i in range(1, last):
        if values[i] > values[i - 1] and values[i] > values[i + 1]:
            indices.append(i)
    if values[last] > values[last - 1]:
        indices.append(last)
    if not indices:
        indices.append(int(np.argmax(values)))
    return indices


def _status(boundary: bool, degenerate: bool) -> str:
    if degenerate:
        return DEGENERATE
    return BOUNDARY if boundary else INTERIOR


def maximize_profit_r(params: ModelParams, cfg: SolverConfig) -> Tuple[float, SubproblemDiagnostics]:
    """
    Maximiza Π_r(P_r) = p1(P_r) P_r - w_p P_r.

    Π_r puede ser multimodal porque p1 tiene un único pico: se barre una malla
    logarítmica, se acota cada máximo local y se refina con búsqueda de sección
    áurea, devolviendo el mejor candidato refinado.

    Args:
        params: Parámetros del modelo
        cfg: Configuración del resolvedor

    Returns:
        (P_r*, diagnóstico) con el residuo de la CPO estimado por Richardson
    """
    low, high = cfg.p_r_bracket
    grid = np.geomspace(low, high, int(cfg.coarse_scan_points))
    values = np.array([profit_r(p, params) for p in grid])

    def objective(p: float) -> float:
        return -profit_r(p, params)

    candidates = _local_maxima(values)
    best_x, best_f = float(grid[candidates[0]]), float(values[candidates[0]])
    for i in candidates:
        x, f = float(grid[i]), float(values[i])
        if 0 < i < len(grid) - 1:
            try:
                result = minimize_scalar(
                    objective,
                    bracket=(grid[i - 1], grid[i], grid[i + 1]),
                    method="golden",
                    tol=cfg.rel_tol,
                )
                if -result.fun >= f:
                    x, f = float(result.x), float(-result.fun)
            except ValueError as e:
                logger.debug(f"Refinamiento áureo descartado en P_r={x:.6g}: {e}")
        logger.debug(f"Candidato P_r={x:.10g} con Π_r={f:.10g}")
        if f > best_f or (f == best_f and x < best_x):
            best_x, best_f = x, f

    step = 1e-4 * best_x
    residual = abs(richardson_derivative(lambda p: profit_r(p, params), best_x, step))
    boundary = _near_edge(best_x, low, high, cfg.rel_tol)
    degenerate = best_f <= 0.0
    diagnostics = SubproblemDiagnostics(
        status=_status(boundary, degenerate),
        profit=best_f,
        foc_residuals=(residual,),
        candidates=len(candidates),
        boundary=boundary,
        degenerate=degenerate,
    )
    if degenerate:
        logger.warning(f"Subproblema de detección degenerado: Π_r={best_f:.6g} <= 0 en todo el intervalo")
    elif boundary:
        logger.warning(f"P_r*={best_x:.6g} en el borde del intervalo {cfg.p_r_bracket}; conviene ampliarlo")
    logger.info(f"P_r*={best_x:.10g}, Π_r={best_f:.10g}, estado={diagnostics.status}")
    return best_x, diagnostics


def maximize_profit_c(params: ModelParams, cfg: SolverConfig) -> Tuple[float, float, SubproblemDiagnostics]:
    """
    Maximiza Π_c(P_c, W_c) con Nelder-Mead multiarranque en coordenadas
    logarítmicas, con semillas sobre una malla logarítmica del rectángulo.

    Los empates entre arranques se resuelven por mayor beneficio y después por
    el menor (P_c, W_c) lexicográfico.

    Args:
        params: Parámetros del modelo
        cfg: Configuración del resolvedor

    Returns:
        (P_c*, W_c*, diagnóstico) con los residuos analíticos de las CPO
    """
    (pc_low, pc_high), (wc_low, wc_high) = cfg.pc_wc_bracket
    log_bounds = [(math.log(pc_low), math.log(pc_high)), (math.log(wc_low), math.log(wc_high))]

    def to_factors(u: np.ndarray) -> Tuple[float, float]:
        P_c = min(max(math.exp(u[0]), pc_low), pc_high)
        W_c = min(max(math.exp(u[1]), wc_low), wc_high)
        return P_c, W_c

    def objective(u: np.ndarray) -> float:
        P_c, W_c = to_factors(u)
        return -profit_c(P_c, W_c, params)

    seeds_per_axis = int(cfg.simplex_grid)
    fractions = [(k + 1) / (seeds_per_axis + 1) for k in range(seeds_per_axis)]
    outcomes = []
    for frac_p, frac_w in product(fractions, fractions):
        start = np.array([
            log_bounds[0][0] + frac_p * (log_bounds[0][1] - log_bounds[0][0]),
            log_bounds[1][0] + frac_w * (log_bounds[1][1] - log_bounds[1][0]),
        ])
        result = minimize(
            objective,
            start,
            method="Nelder-Mead",
            bounds=log_bounds,
            options={
                "xatol": cfg.rel_tol,
                "fatol": 1e-15,
                "maxiter": int(cfg.max_simplex_iterations),
                "maxfev": 2 * int(cfg.max_simplex_iterations),
            },
        )
        P_c, W_c = to_factors(result.x)
        on_edge = (_near_edge(P_c, pc_low, pc_high, cfg.rel_tol)
                   or _near_edge(W_c, wc_low, wc_high, cfg.rel_tol))
        value = profit_c(P_c, W_c, params)
        logger.debug(f"Arranque {start} -> P_c={P_c:.10g}, W_c={W_c:.10g}, iteraciones={result.nit}")
        if not math.isfinite(value):
            logger.warning(f"Arranque {start} descartado: Π_c no finito ({value!r})")
            continue
        outcomes.append((value, P_c, W_c, on_edge))

    if not outcomes:
        raise SolverError("Ningún arranque del símplex produjo un beneficio finito")

    best_f, best_pc, best_wc, boundary = sorted(outcomes, key=lambda o: (-o[0], o[1], o[2]))[0]
    residuals = tuple(abs(g) for g in profit_c_gradient(best_pc, best_wc, params))
    degenerate = all(o[3] for o in outcomes) or best_f <= 0.0
    diagnostics = SubproblemDiagnostics(
        status=_status(boundary, degenerate),
        profit=best_f,
        foc_residuals=residuals,
        candidates=len(outcomes),
        boundary=boundary,
        degenerate=degenerate,
    )
    if degenerate:
        logger.warning(f"Subproblema de comunicación degenerado: Π_c={best_f:.6g}, todos los arranques en el borde={all(o[3] for o in outcomes)}")
    elif boundary:
        logger.warning(f"(P_c*, W_c*)=({best_pc:.6g}, {best_wc:.6g}) en el borde del rectángulo; conviene ampliarlo")
    logger.info(f"P_c*={best_pc:.10g}, W_c*={best_wc:.10g}, Π_c={best_f:.10g}, estado={diagnostics.status}")
    return best_pc, best_wc, diagnostics


def analytic_comm_optimum(params: ModelParams) -> CommOptimum:
    """
    Óptimo de comunicación en forma cerrada.

    Como la función de producción es homogénea de grado 1, la razón
    x = P_c γ̃_C / W_c que minimiza el costo unitario de tasa no depende de la
    escala y cumple (w_p/γ̃_C)((1+x) ln(1+x) - x) = w_w. Con costo unitario c,
    el ingreso β ρ/(1+ρ) - c ρ se maximiza en ρ* = sqrt(β/c) - 1 si β > c.

    Returns:
        CommOptimum con (P_c, W_c, R_c, costo unitario); ceros si no hay producción rentable
    """
    target = params.w_w * params.gamma_C / params.w_p

    def ratio_condition(x: float) -> float:
        return (1.0 + x) * math.log1p(x) - x - target

    upper = 1.0
    while ratio_condition(upper) < 0.0:
        upper *= 2.0
    x = brentq(ratio_condition, 0.0, upper, xtol=1e-15, rtol=1e-15)
    unit_cost = (params.w_p * x / params.gamma_C + params.w_w) * LN2 / math.log1p(x)
    if unit_cost >= params.beta:
        return CommOptimum(0.0, 0.0, 0.0, unit_cost)

    rate = math.sqrt(params.beta / unit_cost) - 1.0
    W_c = rate * LN2 / math.log1p(x)
    P_c = x * W_c / params.gamma_C
    return CommOptimum(P_c, W_c, rate, unit_cost)


def check_sensing_demand_validity(P_r_star: float, params: ModelParams) -> bool:
    """
    Comprobación a posteriori de la demanda de detección: la solución interior
    es el máximo global del usuario si su beneficio neto α θ(P_r*) - p1 P_r*
    no es inferior al de no comprar, α θ(0).
    """
    if not P_r_star > 0.0:
        raise DomainError(f"La comprobación de validez requiere P_r* > 0, recibido {P_r_star!r}")
    p1 = inverse_demand_p1(P_r_star, params)
    return sensing_surplus(P_r_star, p1, params) >= params.alpha * detection_probability(0.0, params)


def check_sensing_demand_local(P_r_star: float, params: ModelParams) -> bool:
    """Condición de segundo orden del usuario: p1 no crece en P_r*"""
    if not P_r_star > 0.0:
        raise DomainError(f"La comprobación local requiere P_r* > 0, recibido {P_r_star!r}")
    slope = richardson_derivative(lambda p: inverse_demand_p1(p, params), P_r_star, 1e-4 * P_r_star)
    return slope <= 0.0


def solve_equilibrium(params: ModelParams, cfg: Optional[SolverConfig] = None) -> Equilibrium:
    """
    Resuelve el problema de beneficio separable y completa el equilibrio.

    Args:
        params: Parámetros del modelo
        cfg: Configuración del resolvedor (por defecto SOLVER_CONFIG)

    Returns:
        Equilibrium con cantidades, precios, calidades, beneficios y diagnósticos
    """
    cfg = cfg or SolverConfig()
    P_r, diag_r = maximize_profit_r(params, cfg)
    P_c, W_c, diag_c = maximize_profit_c(params, cfg)

    R_c = comm_rate(P_c, W_c, params)
    gain_r = profit_r(P_r, params)
    gain_c = profit_c(P_c, W_c, params)
    equilibrium = Equilibrium(
        P_r_star=P_r,
        P_c_star=P_c,
        W_c_star=W_c,
        R_c_star=R_c,
        p1=inverse_demand_p1(P_r, params),
        p2=inverse_demand_p2(R_c, params),
        theta=detection_probability(P_r, params),
        eta=comm_utility(R_c),
        profit_r=gain_r,
        profit_c=gain_c,
        profit=gain_r + gain_c,
        sensing_demand_valid=check_sensing_demand_validity(P_r, params),
        foc_residuals=(diag_r.foc_residuals[0], diag_c.foc_residuals[0], diag_c.foc_residuals[1]),
        sensing_demand_local=check_sensing_demand_local(P_r, params),
        status_r=diag_r.status,
        status_c=diag_c.status,
    )
    if not equilibrium.sensing_demand_valid:
        logger.warning(
            f"La demanda de detección en P_r*={P_r:.6g} no es el máximo global del usuario "
            f"(máximo local={equilibrium.sensing_demand_local})"
        )
    return equilibrium


# Oráculo de fuerza bruta

def _profit_r_values(axis: np.ndarray, params: ModelParams) -> np.ndarray:
    a = np.sqrt(2.0 * axis * params.gamma_T)
    b = math.sqrt(2.0 * params.gamma)
    # e^{-(a²+b²)/2} I_1(ab) = e^{-(a-b)²/2} ive(1, ab)
    kernel = (b / a) * np.exp(-0.5 * (a - b) ** 2) * ive(1, a * b)
    return params.alpha * params.gamma_T * kernel * axis - params.w_p * axis


def _profit_c_values(p_c_axis: np.ndarray, w_c_axis: np.ndarray, params: ModelParams) -> np.ndarray:
    P_c, W_c = np.meshgrid(p_c_axis, w_c_axis, indexing="ij")
    rate = W_c * np.log1p(P_c * params.gamma_C / W_c) / LN2
    return params.beta * rate / (1.0 + rate) - params.w_p * P_c - params.w_w * W_c


def _grid_argmax(p_r_axis, p_c_axis, w_c_axis, params) -> Tuple[Tuple[int, int, int], float]:
    total = (_profit_r_values(p_r_axis, params)[:, None, None]
             + _profit_c_values(p_c_axis, w_c_axis, params)[None, :, :])
    index = np.unravel_index(int(np.argmax(total)), total.shape)
    return tuple(int(i) for i in index), float(total[index])


def _zoom(axis: np.ndarray, index: int, points: int) -> np.ndarray:
    low = axis[max(index - 1, 0)]
    high = axis[min(index + 1, len(axis) - 1)]
    return np.geomspace(low, high, points)


def oracle_profit_grids(params: ModelParams, cfg: SolverConfig) -> OracleGrids:
    """Mallas logarítmicas del oráculo y los beneficios de cada subproblema sobre ellas"""
    n = int(cfg.oracle_grid)
    (pc_low, pc_high), (wc_low, wc_high) = cfg.pc_wc_bracket
    p_r_axis = np.geomspace(*cfg.p_r_bracket, n)
    p_c_axis = np.geomspace(pc_low, pc_high, n)
    w_c_axis = np.geomspace(wc_low, wc_high, n)
    return OracleGrids(
        p_r_axis,
        p_c_axis,
        w_c_axis,
        _profit_r_values(p_r_axis, params),
        _profit_c_values(p_c_axis, w_c_axis, params),
    )


def brute_force_oracle(params: ModelParams, cfg: SolverConfig) -> Tuple[Allocation, float]:
    """
    Evaluación exhaustiva de Π(P_r, P_c, W_c) sobre la malla conjunta 3-D,
    seguida de refinamientos locales alrededor del mejor punto. Determinista.

    Args:
        params: Parámetros del modelo
        cfg: Configuración (malla, niveles y puntos de refinamiento)

    Returns:
        (asignación argmax, beneficio máximo)
    """
    grids = oracle_profit_grids(params, cfg)
    axes = [grids.p_r_axis, grids.p_c_axis, grids.w_c_axis]
    index, best = _grid_argmax(*axes, params)
    point = tuple(float(axis[i]) for axis, i in zip(axes, index))

    for level in range(int(cfg.oracle_refine_levels)):
        axes = [_zoom(axis, i, int(cfg.oracle_refine_grid)) for axis, i in zip(axes, index)]
        index, value = _grid_argmax(*axes, params)
        if value > best:
            best = value
            point = tuple(float(axis[i]) for axis, i in zip(axes, index))
        logger.debug(f"Refinamiento {level + 1} del oráculo: Π={value:.12g}")

    return Allocation(*point), best


def verify_equilibrium(equilibrium: Equilibrium, params: ModelParams, cfg: SolverConfig) -> Dict[str, float]:
    """
    Compara un equilibrio con el oráculo de fuerza bruta y con el óptimo de
    comunicación en forma cerrada.

    Returns:
        Diccionario con los beneficios y las discrepancias
    """
    allocation, oracle_profit = brute_force_oracle(params, cfg)
    closed_form = analytic_comm_optimum(params)
    scale = max(1.0, abs(oracle_profit))
    return {
        "solver_profit": equilibrium.profit,
        "oracle_profit": oracle_profit,
        "oracle_P_r": allocation.P_r,
        "oracle_P_c": allocation.P_c,
        "oracle_W_c": allocation.W_c,
        "profit_gap": equilibrium.profit - oracle_profit,
        "relative_gap": abs(equilibrium.profit - oracle_profit) / scale,
        "closed_form_R_c": closed_form.R_c,
        "closed_form_R_c_gap": abs(equilibrium.R_c_star - closed_form.R_c),
    }
