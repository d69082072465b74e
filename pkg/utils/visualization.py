"""
Utilidades para visualización de tablas de resultados en archivos SVG
"""

import logging
from pathlib import Path
from typing import List, Optional, Sequence, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

from config import PLOT_CONFIG
from utils.errors import PlotColumnError

logger = logging.getLogger(__name__)

SURFACE_COLUMNS = ("x", "y", "value")


def configure_plot_style() -> None:
    """Tema de seaborn y sal fija para que los SVG sean reproducibles"""
    sns.set_theme(style=PLOT_CONFIG["style"])
    plt.rcParams["svg.hashsalt"] = PLOT_CONFIG["svg_hashsalt"]


def axis_label(column: str) -> str:
    return PLOT_CONFIG["labels"].get(column, column)


def is_surface_table(table: pd.DataFrame) -> bool:
    return tuple(table.columns) == SURFACE_COLUMNS


def x_column(table: pd.DataFrame) -> str:
    """Columna de abscisas: `value` en los barridos, la primera en las demás tablas"""
    return "value" if "param" in table.columns else str(table.columns[0])


def plot_columns(table: pd.DataFrame) -> List[str]:
    """
    Columnas graficables de una tabla.

    En un barrido son todas salvo `param`; en una curva de demanda, la columna
    distinta de la abscisa.
    """
    if "param" in table.columns:
        return [str(c) for c in table.columns if c != "param"]
    x = x_column(table)
    return [str(c) for c in table.columns if c != x]


def default_plot_columns(table: pd.DataFrame) -> List[str]:
    """Columnas numéricas que se grafican cuando no se pide ninguna"""
    x = x_column(table)
    return [c for c in plot_columns(table) if c not in (x, "valid")]


def create_line_chart(x: Sequence, y: Sequence, x_label: str, y_label: str,
                      title: Optional[str] = None) -> plt.Figure:
    """
    Crea un gráfico de línea con marcadores

    Args:
        x: Valores de abscisa
        y: Valores de ordenada
        x_label: Etiqueta del eje x
        y_label: Etiqueta del eje y
        title: Título del gráfico

    Returns:
        Objeto Figure de matplotlib
    """
    fig, ax = plt.subplots(figsize=PLOT_CONFIG["figsize"])
    ax.plot(list(x), list(y), marker="o", markersize=3, linewidth=1.5)
    ax.set_xlabel(x_label)
    ax.set_ylabel(y_label)
    if title:
        ax.set_title(title, fontsize=12)
    fig.tight_layout()
    return fig


def create_surface_heatmap(table: pd.DataFrame, title: str = "Superficie",
                           cmap: str = "viridis") -> plt.Figure:
    """
    Crea un mapa de calor a partir de una tabla larga `x,y,value`

    Args:
        table: Tabla de la superficie
        title: Título del gráfico
        cmap: Mapa de colores a utilizar

    Returns:
        Objeto Figure de matplotlib
    """
    grid = table.pivot(index="y", columns="x", values="value").sort_index(ascending=False)
    grid.index = [f"{v:.3g}" for v in grid.index]
    grid.columns = [f"{v:.3g}" for v in grid.columns]

    fig, ax = plt.subplots(figsize=PLOT_CONFIG["figsize"])
    step = max(1, len(grid.columns) // 8)
    sns.heatmap(grid, cmap=cmap, xticklabels=step, yticklabels=step, ax=ax)
    ax.set_xlabel("x")
    ax.set_ylabel("y")
    ax.set_title(title, fontsize=12)
    fig.tight_layout()
    return fig


def save_svg(fig: plt.Figure, file_path: Union[str, Path]) -> Path:
    """Guarda la figura como SVG sin fecha de creación y la cierra"""
    path = Path(file_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def render_table_plots(table: pd.DataFrame, out_dir: Union[str, Path], stem: str,
                       columns: Optional[Sequence[str]] = None) -> List[Path]:
    """
    Genera un SVG por columna solicitada (o uno solo para una superficie).

    Args:
        table: Tabla leída del CSV
        out_dir: Directorio de salida
        stem: Prefijo de los nombres de archivo
        columns: Columnas a graficar; por defecto las numéricas salvo la abscisa

    Returns:
        Rutas de los archivos escritos

    Raises:
        PlotColumnError: si se pide una columna inexistente
    """
    configure_plot_style()
    out_dir = Path(out_dir)

    if is_surface_table(table):
        return [save_svg(create_surface_heatmap(table, title=stem), out_dir / f"{stem}.svg")]

    available = plot_columns(table)
    requested = list(columns) if columns else default_plot_columns(table)
    for column in requested:
        if column not in available:
            raise PlotColumnError(column, available)

    x = x_column(table)
    x_label = axis_label(str(table["param"].iloc[0])) if "param" in table.columns else axis_label(x)
    written = []
    for column in requested:
        fig = create_line_chart(table[x], table[column], x_label, axis_label(column))
        written.append(save_svg(fig, out_dir / f"{stem}_{column}.svg"))
        logger.debug(f"Gráfico de '{column}' escrito")
    logger.info(f"{len(written)} gráficos escritos en {out_dir}")
    return written
