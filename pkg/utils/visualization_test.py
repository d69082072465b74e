"""
Pruebas de la generación de gráficos SVG
"""

import pandas as pd
import pytest

from config import CSV_CONFIG
from utils.errors import PlotColumnError
from utils.visualization import default_plot_columns, plot_columns, render_table_plots, x_column


def sweep_frame(rows: int = 2) -> pd.DataFrame:
    values = [0.01 * (i + 1) for i in range(rows)]
    data = {"param": ["w_p"] * rows, "value": values}
    for offset, column in enumerate(CSV_CONFIG["sweep_columns"][2:-1]):
        data[column] = [v * (offset + 1) for v in values]
    data["valid"] = ["true"] * rows
    return pd.DataFrame(data, columns=CSV_CONFIG["sweep_columns"])


def test_plot_columns_of_each_table():
    assert len(plot_columns(sweep_frame())) == 13
    assert x_column(sweep_frame()) == "value"
    demand = pd.DataFrame({"R_c": [0.0, 9.0], "p2": [1.0, 0.1]})
    assert x_column(demand) == "R_c"
    assert plot_columns(demand) == ["p2"]


def test_unknown_column_lists_the_available_ones(tmp_path):
    with pytest.raises(PlotColumnError) as error:
        render_table_plots(sweep_frame(), tmp_path, "sweep_w_p", ["bogus"])
    assert error.value.column == "bogus"
    assert len(error.value.available) == 13
    assert "profit" in str(error.value)
    assert not list(tmp_path.iterdir())


def test_default_render_skips_the_abscissa_and_validity_columns(tmp_path):
    written = render_table_plots(sweep_frame(), tmp_path, "sweep_w_p")
    names = sorted(path.name for path in written)
    assert len(names) == 11
    assert "sweep_w_p_value.svg" not in names
    assert "sweep_w_p_valid.svg" not in names
    assert names == sorted(f"sweep_w_p_{c}.svg" for c in CSV_CONFIG["sweep_columns"][2:-1])
    assert sorted(p.name for p in tmp_path.iterdir()) == names


def test_default_columns_of_a_demand_curve():
    demand = pd.DataFrame({"P_r": [0.0, 1.0], "p1": [0.03, 0.04]})
    assert default_plot_columns(demand) == ["p1"]


def test_two_row_sweep_is_drawn(tmp_path):
    written = render_table_plots(sweep_frame(), tmp_path, "sweep_w_p", ["P_r", "profit"])
    assert [path.name for path in written] == ["sweep_w_p_P_r.svg", "sweep_w_p_profit.svg"]
    assert all(path.read_bytes().lstrip().startswith(b"<?xml") for path in written)


def test_svg_is_byte_identical_across_renders(tmp_path):
    first = render_table_plots(sweep_frame(5), tmp_path / "a", "sweep_w_p", ["p2"])[0]
    second = render_table_plots(sweep_frame(5), tmp_path / "b", "sweep_w_p", ["p2"])[0]
    assert first.read_bytes() == second.read_bytes()


def test_surface_table_becomes_one_heatmap(tmp_path):
    rows = [(float(x), float(y), float(x * y)) for x in range(4) for y in range(4)]
    table = pd.DataFrame(rows, columns=["x", "y", "value"])
    written = render_table_plots(table, tmp_path, "surface_utility")
    assert [path.name for path in written] == ["surface_utility.svg"]
    assert b"<svg" in written[0].read_bytes()
