"""
Pruebas de la línea de comandos: subcomandos, archivos escritos y códigos de salida
"""

import pytest

from app import main
from config import CSV_CONFIG, DATA_DIR, EXIT_CODES
from utils.data_utils import load_json_data, read_table_csv


def write_config(tmp_path, text: str, name: str = "escenario.cfg") -> str:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return str(path)


@pytest.fixture(scope="module")
def sweep_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("barrido") / "sweep_w_p.csv"
    code = main(["sweep", "--config", str(DATA_DIR / "sweep_w_p.cfg"), "--steps", "2",
                 "--out", str(out), "--quiet"])
    assert code == EXIT_CODES["ok"]
    return out


def test_solve_at_defaults_reports_the_validity_check(capsys):
    # La comprobación global de la demanda de detección no se cumple en el escenario base
    assert main(["solve", "--config", str(DATA_DIR / "baseline.cfg")]) == EXIT_CODES["invalid"]
    captured = capsys.readouterr()
    assert "Equilibrio:" in captured.out
    assert "validez" in captured.err


def test_solve_writes_json(tmp_path):
    out = tmp_path / "equilibrio.json"
    main(["solve", "--out", str(out)])
    record = load_json_data(out)
    assert record["params"]["w_p"] == 0.01
    assert record["equilibrium"]["valid"] in ("true", "false")
    assert record["equilibrium"]["P_r_star"] > 0.0


def test_solve_degenerate_scenario(tmp_path):
    config = write_config(tmp_path, "w_p = 10\n")
    assert main(["solve", "--config", config]) == EXIT_CODES["degenerate"]


def test_solve_with_verification(tmp_path, capsys):
    out = tmp_path / "verificado.json"
    main(["solve", "--verify", "--out", str(out)])
    assert "Verificación:" in capsys.readouterr().out
    verification = load_json_data(out)["verification"]
    assert verification["relative_gap"] <= 1e-4


@pytest.mark.parametrize("text", ["gamma_X = 1\n", "w_p = -1\n", "alpha\n"])
def test_invalid_config_exits_with_config_error(tmp_path, text, capsys):
    config = write_config(tmp_path, text)
    assert main(["solve", "--config", config]) == EXIT_CODES["config_error"]
    assert "Error" in capsys.readouterr().err


def test_missing_config_file(tmp_path):
    assert main(["solve", "--config", str(tmp_path / "no_existe.cfg")]) == EXIT_CODES["config_error"]


def test_argument_errors():
    assert main(["resolver"]) == EXIT_CODES["config_error"]
    assert main(["solve", "--format", "parquet"]) == EXIT_CODES["config_error"]


def test_sweep_without_sweep_keys(tmp_path):
    out = tmp_path / "sweep.csv"
    assert main(["sweep", "--config", str(DATA_DIR / "baseline.cfg"), "--out", str(out)]) \
        == EXIT_CODES["config_error"]
    assert not out.exists()


def test_sweep_with_too_few_steps(tmp_path):
    out = tmp_path / "sweep.csv"
    code = main(["sweep", "--config", str(DATA_DIR / "sweep_w_w.cfg"), "--steps", "1", "--out", str(out)])
    assert code == EXIT_CODES["config_error"]


def test_sweep_writes_rows_and_directions(sweep_csv):
    table = read_table_csv(sweep_csv)
    assert list(table.columns) == CSV_CONFIG["sweep_columns"]
    assert len(table) == 2
    assert table["param"].tolist() == ["w_p", "w_p"]
    assert table["value"].tolist() == [0.001, 0.055]

    directions = read_table_csv(sweep_csv.with_name("sweep_w_p.directions.csv"))
    assert len(directions) == 9
    profit = directions[directions["output"] == "profit"].iloc[0]
    assert profit["direction"] == "decreasing"


def test_sweep_csv_is_byte_identical(sweep_csv, tmp_path):
    again = tmp_path / "sweep_w_p.csv"
    main(["sweep", "--config", str(DATA_DIR / "sweep_w_p.cfg"), "--steps", "2",
          "--out", str(again), "--quiet"])
    assert again.read_bytes() == sweep_csv.read_bytes()


def test_demand_files(tmp_path):
    assert main(["demand", "--steps", "10", "--out", str(tmp_path)]) == EXIT_CODES["ok"]
    p1 = read_table_csv(tmp_path / "demand_p1.csv")
    p2 = read_table_csv(tmp_path / "demand_p2.csv")
    assert list(p1.columns) == ["P_r", "p1"] and len(p1) == 10
    assert list(p2.columns) == ["R_c", "p2"] and len(p2) == 201
    assert p1["p1"].iloc[0] == pytest.approx(3.3690e-2, rel=1e-4)


def test_plot_from_sweep_csv(sweep_csv, tmp_path, capsys):
    code = main(["plot", str(sweep_csv), "--columns", "P_r,profit", "--out", str(tmp_path)])
    assert code == EXIT_CODES["ok"]
    assert (tmp_path / "sweep_w_p_P_r.svg").exists()
    assert (tmp_path / "sweep_w_p_profit.svg").exists()


def test_plot_unknown_column(sweep_csv, tmp_path, capsys):
    code = main(["plot", str(sweep_csv), "--columns", "bogus", "--out", str(tmp_path)])
    assert code == EXIT_CODES["config_error"]
    err = capsys.readouterr().err
    assert "bogus" in err and "profit_c" in err


def test_plot_missing_csv(tmp_path):
    assert main(["plot", str(tmp_path / "no_existe.csv")]) == EXIT_CODES["io_error"]


def test_surface_writes_csv_and_svg(tmp_path):
    out = tmp_path / "superficie.csv"
    assert main(["surface", "--kind", "profit_pc_wc", "--steps", "5", "--out", str(out)]) == EXIT_CODES["ok"]
    table = read_table_csv(out)
    assert list(table.columns) == ["x", "y", "value"]
    assert len(table) == 25
    assert out.with_suffix(".svg").exists()
