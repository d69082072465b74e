"""
Línea de comandos del motor de equilibrio de mercado ISAC.

Subcomandos: solve, sweep, demand, plot y surface. Los códigos de salida
siguen EXIT_CODES de config.py.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

# Añadir el directorio del proyecto al path para importar módulos locales
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from config import EXIT_CODES, LOGGING_CONFIG, OUTPUT_DIR, ensure_directories
from src.comparative_statics import SweepSpec, run_sweep
from src.equilibrium_solver import SolverConfig, solve_equilibrium, verify_equilibrium
from src.market_tables import SURFACE_KINDS, DemandGrid, tabulate_demand, tabulate_surface
from src.report_components import (
    direction_table,
    format_direction_table,
    format_equilibrium_report,
    format_verification_report,
    format_violations,
    sweep_table,
)
from utils.data_utils import (
    ScenarioConfig,
    load_scenario_config,
    read_table_csv,
    save_json_data,
    write_table_csv,
)
from utils.errors import ConfigError, DomainError, IsacError, PlotColumnError
from utils.visualization import configure_plot_style, create_surface_heatmap, render_table_plots, save_svg

logger = logging.getLogger(__name__)


class CommandError(Exception):
    """Fallo de un subcomando con su código de salida"""

    def __init__(self, message: str, exit_code: int):
        self.exit_code = exit_code
        super().__init__(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=str, default=None, help="Archivo de escenario clave = valor")
    common.add_argument("--out", type=str, default=None, help="Ruta de salida")
    common.add_argument("--verify", action="store_true", help="Compara con el oráculo de fuerza bruta (solve)")
    common.add_argument("--steps", type=int, default=None,
                        help="Puntos del barrido, de la malla de P_r (demand) o por eje (surface)")
    common.add_argument("--format", type=str, default="csv", choices=["csv"], help="Formato de las tablas")
    common.add_argument("--workers", type=int, default=1, help="Procesos para los barridos")
    common.add_argument("--log-level", type=str, default=LOGGING_CONFIG["level"],
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Nivel de logging")
    common.add_argument("--quiet", action="store_true", help="Oculta las barras de progreso")

    parser = argparse.ArgumentParser(description="Motor de equilibrio de mercado ISAC (monopolio)")
    subparsers = parser.add_subparsers(dest="command", required=True)

    subparsers.add_parser("solve", parents=[common], help="Resuelve un equilibrio")
    subparsers.add_parser("sweep", parents=[common], help="Barrido de estática comparativa")
    subparsers.add_parser("demand", parents=[common], help="Tabula las curvas de demanda inversa")

    plot = subparsers.add_parser("plot", parents=[common], help="Genera SVG a partir de un CSV")
    plot.add_argument("csv", type=str, help="CSV producido por sweep, demand o surface")
    plot.add_argument("--columns", type=str, default=None, help="Columnas separadas por comas")

    surface = subparsers.add_parser("surface", parents=[common], help="Tabula una superficie del modelo")
    surface.add_argument("--kind", type=str, default="utility", choices=list(SURFACE_KINDS),
                         help="Superficie a tabular")
    return parser


def load_scenario(args) -> ScenarioConfig:
    try:
        return load_scenario_config(args.config)
    except ConfigError as e:
        raise CommandError(f"Error de configuración en {args.config}: {e}", EXIT_CODES["config_error"])
    except OSError as e:
        raise CommandError(f"No se pudo leer el escenario {args.config}: {e}", EXIT_CODES["config_error"])


def build_solver_config(scenario: ScenarioConfig) -> SolverConfig:
    try:
        return SolverConfig().with_overrides(**scenario.solver_overrides())
    except DomainError as e:
        raise CommandError(f"Error de configuración del resolvedor: {e}", EXIT_CODES["config_error"])


def cmd_solve(args) -> int:
    """Resuelve el equilibrio del escenario y aplica el contrato de códigos de salida"""
    scenario = load_scenario(args)
    cfg = build_solver_config(scenario)
    equilibrium = solve_equilibrium(scenario.params, cfg)
    print(format_equilibrium_report(equilibrium, scenario.params))

    record = {"params": scenario.params.to_dict(), "equilibrium": equilibrium.to_dict()}
    if args.verify:
        verification = verify_equilibrium(equilibrium, scenario.params, cfg)
        print(format_verification_report(verification))
        record["verification"] = verification

    if args.out:
        try:
            save_json_data(record, args.out)
        except OSError as e:
            raise CommandError(f"No se pudo escribir {args.out}: {e}", EXIT_CODES["io_error"])

    if equilibrium.boundary:
        logger.warning("El óptimo está en el borde de los intervalos de búsqueda; conviene ampliarlos")
    if equilibrium.degenerate:
        print("Equilibrio degenerado: no hay solución interior con beneficio positivo", file=sys.stderr)
        return EXIT_CODES["degenerate"]
    if not equilibrium.sensing_demand_valid:
        print("La comprobación de validez de la demanda de detección falla en P_r*", file=sys.stderr)
        return EXIT_CODES["invalid"]
    return EXIT_CODES["ok"]


def cmd_sweep(args) -> int:
    """Ejecuta el barrido del escenario, escribe el CSV y la tabla de direcciones"""
    scenario = load_scenario(args)
    if not scenario.has_sweep:
        raise CommandError("El escenario no define un barrido (falta 'sweep_parameter')", EXIT_CODES["config_error"])
    cfg = build_solver_config(scenario)
    settings = dict(scenario.sweep)
    if args.steps is not None:
        settings["steps"] = args.steps
    try:
        spec = SweepSpec(base=scenario.params, **settings)
    except DomainError as e:
        raise CommandError(f"Barrido inválido: {e}", EXIT_CODES["config_error"])

    result = run_sweep(spec, cfg, workers=args.workers, progress=not args.quiet)
    directions = direction_table(result)
    out = Path(args.out) if args.out else OUTPUT_DIR / f"sweep_{spec.parameter}.csv"
    try:
        write_table_csv(sweep_table(result), out)
        write_table_csv(directions, out.with_name(f"{out.stem}.directions.csv"))
    except OSError as e:
        raise CommandError(f"No se pudo escribir {out}: {e}", EXIT_CODES["io_error"])

    print(format_direction_table(directions))
    print(format_violations(result))
    if result.gaps:
        print(f"Puntos sin solución: {result.gaps}")
    return EXIT_CODES["ok"]


def cmd_demand(args) -> int:
    """Tabula p1(P_r) y p2(R_c) en dos archivos del directorio de salida"""
    scenario = load_scenario(args)
    overrides = scenario.demand_overrides()
    if args.steps is not None:
        overrides["p_r_points"] = args.steps
    try:
        grid = DemandGrid(**overrides)
    except DomainError as e:
        raise CommandError(f"Malla de demanda inválida: {e}", EXIT_CODES["config_error"])

    out_dir = Path(args.out) if args.out else OUTPUT_DIR / "demand"
    try:
        for name, table in tabulate_demand(scenario.params, grid).items():
            write_table_csv(table, out_dir / f"{name}.csv")
    except OSError as e:
        raise CommandError(f"No se pudo escribir en {out_dir}: {e}", EXIT_CODES["io_error"])
    print(f"Curvas de demanda escritas en {out_dir}")
    return EXIT_CODES["ok"]


def cmd_plot(args) -> int:
    """Dibuja las columnas de un CSV sin volver a resolver nada"""
    csv_path = Path(args.csv)
    try:
        table = read_table_csv(csv_path)
    except (OSError, ValueError) as e:
        raise CommandError(f"No se pudo leer {csv_path}: {e}", EXIT_CODES["io_error"])

    columns = [c.strip() for c in args.columns.split(",") if c.strip()] if args.columns else None
    out_dir = Path(args.out) if args.out else csv_path.parent
    try:
        written = render_table_plots(table, out_dir, csv_path.stem, columns)
    except PlotColumnError as e:
        raise CommandError(str(e), EXIT_CODES["config_error"])
    except OSError as e:
        raise CommandError(f"No se pudo escribir en {out_dir}: {e}", EXIT_CODES["io_error"])
    for path in written:
        print(path)
    return EXIT_CODES["ok"]


def cmd_surface(args) -> int:
    """Tabula una superficie en formato largo y la dibuja como mapa de calor"""
    scenario = load_scenario(args)
    try:
        table = tabulate_surface(args.kind, scenario.params, args.steps)
    except DomainError as e:
        raise CommandError(f"Superficie inválida: {e}", EXIT_CODES["config_error"])

    out = Path(args.out) if args.out else OUTPUT_DIR / f"surface_{args.kind}.csv"
    try:
        write_table_csv(table, out)
        configure_plot_style()
        save_svg(create_surface_heatmap(table, title=args.kind), out.with_suffix(".svg"))
    except OSError as e:
        raise CommandError(f"No se pudo escribir {out}: {e}", EXIT_CODES["io_error"])
    print(f"Superficie '{args.kind}' escrita en {out}")
    return EXIT_CODES["ok"]


COMMANDS = {
    "solve": cmd_solve,
    "sweep": cmd_sweep,
    "demand": cmd_demand,
    "plot": cmd_plot,
    "surface": cmd_surface,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CODES["ok"] if e.code == 0 else EXIT_CODES["config_error"]

    logging.basicConfig(level=args.log_level, format=LOGGING_CONFIG["format"], stream=sys.stderr)
    logging.getLogger().setLevel(args.log_level)
    ensure_directories()

    try:
        return COMMANDS[args.command](args)
    except CommandError as e:
        print(f"Error: {e}", file=sys.stderr)
        return e.exit_code
    except IsacError as e:
        logger.debug("Detalle del error", exc_info=True)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CODES["degenerate"]


if __name__ == "__main__":
    sys.exit(main())
