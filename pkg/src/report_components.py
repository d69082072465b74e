"""
Componentes de informe: tablas de barrido y de direcciones, y resúmenes de texto
"""

from typing import Dict, List

import pandas as pd

from config import CSV_CONFIG
from src.comparative_statics import SweepResult
from src.equilibrium_solver import Equilibrium
from utils.data_utils import format_float
from utils.market_model import ModelParams


def sweep_table(result: SweepResult) -> pd.DataFrame:
    """
    Tabla del barrido con el esquema fijo de columnas del CSV.

    Los huecos llevan celdas numéricas vacías y `valid = error`.
    """
    rows = []
    for point in result.points:
        row = {"param": result.spec.parameter, "value": point.value}
        if point.equilibrium is None:
            row.update({column: None for column in CSV_CONFIG["sweep_columns"][2:-1]})
            row["valid"] = "error"
        else:
            row.update(point.equilibrium.as_record())
            row["valid"] = point.equilibrium.valid_label
        rows.append(row)
    return pd.DataFrame(rows, columns=CSV_CONFIG["sweep_columns"])


def direction_table(result: SweepResult) -> pd.DataFrame:
    """Tabla de direcciones: una fila por variable de salida"""
    rows = []
    for output, summary in result.monotonicity.items():
        rows.append({
            "output": output,
            "direction": summary.direction,
            "strict": summary.strict,
            "turning_points": ";".join(format_float(v) for v in summary.turning_points),
            "gaps": summary.gaps,
        })
    return pd.DataFrame(rows, columns=["output", "direction", "strict", "turning_points", "gaps"])


def format_direction_table(table: pd.DataFrame) -> str:
    return table.to_string(index=False)


def format_equilibrium_report(equilibrium: Equilibrium, params: ModelParams) -> str:
    """
    Resumen legible de un equilibrio

    Args:
        equilibrium: Equilibrio resuelto
        params: Parámetros con los que se resolvió

    Returns:
        Texto multilínea
    """
    lines: List[str] = ["Parámetros:"]
    lines += [f"  {name:<8} = {value!r}" for name, value in params.to_dict().items()]
    lines.append("Equilibrio:")
    for name, value in equilibrium.as_record().items():
        lines.append(f"  {name:<8} = {format_float(value)}")
    lines.append("Diagnóstico:")
    lines.append(f"  estado detección     = {equilibrium.status_r}")
    lines.append(f"  estado comunicación  = {equilibrium.status_c}")
    lines.append(f"  residuos CPO         = {', '.join(f'{r:.3e}' for r in equilibrium.foc_residuals)}")
    lines.append(f"  demanda válida       = {str(equilibrium.sensing_demand_valid).lower()}")
    lines.append(f"  máximo local usuario = {str(equilibrium.sensing_demand_local).lower()}")
    return "\n".join(lines)


def format_verification_report(verification: Dict[str, float]) -> str:
    """Resumen de la comparación con el oráculo y con la forma cerrada"""
    lines = ["Verificación:"]
    lines += [f"  {name:<20} = {format_float(value)}" for name, value in verification.items()]
    return "\n".join(lines)


def format_violations(result: SweepResult) -> str:
    if not result.validity_violations:
        return "Sin violaciones de validez de la demanda de detección"
    values = ", ".join(format_float(v) for v in result.validity_violations)
    return (f"Violaciones de validez de la demanda de detección "
            f"({len(result.validity_violations)}) en {result.spec.parameter} = {values}")
