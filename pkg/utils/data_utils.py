"""
Utilidades de datos: archivos de escenario, tablas CSV de precisión completa y JSON
"""

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional, Union

import pandas as pd

from config import CSV_CONFIG, MODEL_DEFAULTS, SOLVER_CONFIG, SWEEP_CONFIG
from utils.errors import ConfigError, ModelParamsError
from utils.market_model import ModelParams

logger = logging.getLogger(__name__)

MODEL_KEYS = tuple(MODEL_DEFAULTS)
SOLVER_FLOAT_KEYS = ("p_r_min", "p_r_max", "pc_min", "pc_max", "wc_min", "wc_max", "rel_tol", "foc_tol")
SOLVER_INT_KEYS = ("oracle_grid", "coarse_scan_points", "oracle_refine_grid", "oracle_refine_levels")
SWEEP_KEYS = ("sweep_parameter", "sweep_start", "sweep_stop", "sweep_steps")
DEMAND_FLOAT_KEYS = ("demand_p_r_min", "demand_p_r_max", "demand_r_c_max")
DEMAND_INT_KEYS = ("demand_p_r_points", "demand_r_c_points")

INT_KEYS = set(SOLVER_INT_KEYS) | set(DEMAND_INT_KEYS) | {"sweep_steps"}
KNOWN_KEYS = set(MODEL_KEYS) | set(SOLVER_FLOAT_KEYS) | set(SOLVER_INT_KEYS) | set(SWEEP_KEYS) \
    | set(DEMAND_FLOAT_KEYS) | set(DEMAND_INT_KEYS)

# Pares de claves que forman un intervalo del resolvedor
BRACKET_KEYS = {
    "p_r_bracket": ("p_r_min", "p_r_max", SOLVER_CONFIG["p_r_bracket"]),
    "pc_bracket": ("pc_min", "pc_max", SOLVER_CONFIG["pc_bracket"]),
    "wc_bracket": ("wc_min", "wc_max", SOLVER_CONFIG["wc_bracket"]),
}


@dataclass(frozen=True)
class ScenarioConfig:
    """
    Escenario leído de un archivo `clave = valor`.

    Args:
        params: Parámetros del modelo (completados con los valores por defecto)
        solver: Ajustes del resolvedor presentes en el archivo
        sweep: Definición del barrido (parameter, start, stop, steps) o vacío
        demand: Ajustes de las mallas de demanda presentes en el archivo
        source: Ruta del archivo de origen
    """
    params: ModelParams = field(default_factory=ModelParams)
    solver: Dict[str, Any] = field(default_factory=dict)
    sweep: Dict[str, Any] = field(default_factory=dict)
    demand: Dict[str, Any] = field(default_factory=dict)
    source: Optional[str] = None

    @property
    def has_sweep(self) -> bool:
        return bool(self.sweep)

    def solver_overrides(self) -> Dict[str, Any]:
        """Argumentos para SolverConfig derivados de las claves del resolvedor"""
        overrides = {}
        brackets = {}
        for name, (low_key, high_key, default) in BRACKET_KEYS.items():
            brackets[name] = (self.solver.get(low_key, default[0]), self.solver.get(high_key, default[1]))
        if any(key in self.solver for key in ("p_r_min", "p_r_max")):
            overrides["p_r_bracket"] = brackets["p_r_bracket"]
        if any(key in self.solver for key in ("pc_min", "pc_max", "wc_min", "wc_max")):
            overrides["pc_wc_bracket"] = (brackets["pc_bracket"], brackets["wc_bracket"])
        for key in ("rel_tol", "foc_tol") + SOLVER_INT_KEYS:
            if key in self.solver:
                overrides[key] = self.solver[key]
        return overrides

    def demand_overrides(self) -> Dict[str, Any]:
        """Argumentos para DemandGrid (sin el prefijo `demand_`)"""
        return {key[len("demand_"):]: value for key, value in self.demand.items()}


def _parse_value(key: str, raw: str, line: int) -> Union[int, float, str]:
    if key == "sweep_parameter":
        if raw not in SWEEP_CONFIG["parameters"]:
            raise ConfigError(
                f"Valor '{raw}' inválido para '{key}'; opciones: {', '.join(SWEEP_CONFIG['parameters'])}",
                key, line,
            )
        return raw
    if key in INT_KEYS:
        try:
            return int(raw)
        except ValueError:
            raise ConfigError(f"La clave '{key}' requiere un entero, recibido '{raw}'", key, line)
    try:
        value = float(raw)
    except ValueError:
        raise ConfigError(f"La clave '{key}' requiere un número, recibido '{raw}'", key, line)
    if not math.isfinite(value):
        raise ConfigError(f"La clave '{key}' requiere un número finito, recibido '{raw}'", key, line)
    return value


def parse_scenario_text(text: str, source: Optional[str] = None) -> ScenarioConfig:
    """
    Interpreta un documento de escenario plano `clave = valor` con comentarios `#`.

    Args:
        text: Contenido del documento
        source: Nombre del origen para los mensajes de log

    Returns:
        ScenarioConfig validado

    Raises:
        ConfigError: clave desconocida o repetida, línea sin '=', valor no numérico
            o parámetro del modelo fuera de dominio
    """
    values: Dict[str, Any] = {}
    lines: Dict[str, int] = {}
    for number, raw_line in enumerate(text.splitlines(), start=1):
        content = raw_line.split("#", 1)[0].strip()
        if not content:
            continue
        if "=" not in content:
            raise ConfigError(f"Línea sin '=': '{content}'", None, number)
        key, raw = (part.strip() for part in content.split("=", 1))
        if not key:
            raise ConfigError("Línea sin nombre de clave", None, number)
        if key not in KNOWN_KEYS:
            raise ConfigError(f"Clave desconocida '{key}'", key, number)
        if key in values:
            raise ConfigError(f"Clave '{key}' repetida (primera aparición en la línea {lines[key]})", key, number)
        values[key] = _parse_value(key, raw, number)
        lines[key] = number

    model_values = {key: values[key] for key in MODEL_KEYS if key in values}
    try:
        params = ModelParams.from_mapping(model_values)
    except ModelParamsError as e:
        raise ConfigError(str(e), e.field, lines.get(e.field))

    sweep = {}
    if any(key in values for key in SWEEP_KEYS):
        if "sweep_parameter" not in values:
            first = min(lines[key] for key in SWEEP_KEYS if key in values)
            raise ConfigError("El barrido requiere la clave 'sweep_parameter'", "sweep_parameter", first)
        parameter = values["sweep_parameter"]
        start, stop, steps = SWEEP_CONFIG["reference_ranges"][parameter]
        sweep = {
            "parameter": parameter,
            "start": values.get("sweep_start", start),
            "stop": values.get("sweep_stop", stop),
            "steps": values.get("sweep_steps", steps),
        }

    solver = {key: values[key] for key in SOLVER_FLOAT_KEYS + SOLVER_INT_KEYS if key in values}
    demand = {key: values[key] for key in DEMAND_FLOAT_KEYS + DEMAND_INT_KEYS if key in values}
    logger.debug(f"Escenario {source or '<texto>'}: {len(values)} claves")
    return ScenarioConfig(params, solver, sweep, demand, source)


def load_scenario_config(file_path: Optional[Union[str, Path]] = None) -> ScenarioConfig:
    """
    Carga un archivo de escenario; sin ruta devuelve el escenario por defecto.

    Raises:
        ConfigError: contenido inválido
        OSError: archivo ilegible
    """
    if file_path is None:
        return ScenarioConfig()
    with open(file_path, "r", encoding="utf-8") as f:
        return parse_scenario_text(f.read(), str(file_path))


def load_json_data(file_path: Union[str, Path]) -> Dict:
    """
    Carga datos desde un archivo JSON.

    Args:
        file_path: Ruta al archivo JSON

    Returns:
        Datos cargados desde el archivo
    """
    with open(file_path, "r", encoding="utf-8") as f:
        return json.load(f)


def save_json_data(data: Dict, file_path: Union[str, Path], indent: int = 2) -> None:
    """
    Guarda datos en un archivo JSON.

    Args:
        data: Datos a guardar
        file_path: Ruta donde guardar el archivo
        indent: Nivel de indentación
    """
    Path(file_path).parent.mkdir(parents=True, exist_ok=True)
    with open(file_path, "w", encoding="utf-8") as f:
        json.dump(data, f, ensure_ascii=False, indent=indent)
        f.write("\n")


def format_float(value: Optional[float]) -> str:
    """Representación decimal más corta que recupera exactamente el flotante"""
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return ""
    return repr(float(value))


def write_table_csv(table: pd.DataFrame, file_path: Union[str, Path]) -> Path:
    """
    Escribe una tabla con los flotantes en representación de ida y vuelta.

    Args:
        table: Tabla a escribir
        file_path: Ruta del CSV

    Returns:
        Ruta escrita
    """
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    formatted = table.copy()
    for column in formatted.columns:
        if pd.api.types.is_float_dtype(formatted[column]) or formatted[column].dtype == object:
            formatted[column] = [
                format_float(v) if isinstance(v, float) or v is None else v
                for v in formatted[column]
            ]
    formatted.to_csv(path, index=False, lineterminator=CSV_CONFIG["line_terminator"])
    logger.info(f"Tabla escrita en {path} ({len(table)} filas)")
    return path


def read_table_csv(file_path: Union[str, Path]) -> pd.DataFrame:
    """Lee una tabla CSV recuperando los flotantes bit a bit"""
    header = pd.read_csv(file_path, nrows=0).columns
    text_columns = {name: str for name in ("param", "valid") if name in header}
    return pd.read_csv(file_path, float_precision="round_trip", dtype=text_columns)
