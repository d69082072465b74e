"""
Configuración global del motor de equilibrio de mercado ISAC
"""

from pathlib import Path

# Rutas del proyecto
PROJECT_ROOT = Path(__file__).parent
DATA_DIR = PROJECT_ROOT / "data"
OUTPUT_DIR = PROJECT_ROOT / "output"

# Parámetros por defecto del modelo (escenario base de los resultados numéricos)
MODEL_DEFAULTS = {
    "gamma": 5.0,
    "gamma_T": 1.0,
    "gamma_C": 1.0,
    "alpha": 1.0,
    "beta": 1.0,
    "w_p": 0.01,
    "w_w": 0.01
}

# Configuración de las funciones especiales
SPECFUN_CONFIG = {
    "series_tol": 1e-14,
    "series_max_terms": 10_000
}

# Configuración del resolvedor
SOLVER_CONFIG = {
    "p_r_bracket": (1e-3, 200.0),
    "pc_bracket": (1e-4, 500.0),
    "wc_bracket": (1e-4, 500.0),
    "rel_tol": 1e-9,
    "foc_tol": 1e-6,
    "oracle_grid": 200,
    "coarse_scan_points": 1000,
    "simplex_grid": 3,
    "oracle_refine_grid": 21,
    "oracle_refine_levels": 6,
    "max_simplex_iterations": 20_000
}

# Configuración de la estática comparativa
SWEEP_CONFIG = {
    "parameters": ("w_p", "w_w", "alpha"),
    "reference_ranges": {
        "w_p": (0.001, 0.055, 55),
        "w_w": (0.001, 0.055, 55),
        "alpha": (0.1, 2.0, 39)
    },
    "outputs": ("P_r", "P_c", "W_c", "R_c", "p1", "p2", "theta", "eta", "profit"),
    "constant_tol": 1e-9
}

# Mallas por defecto para las curvas de demanda inversa
DEMAND_CONFIG = {
    "p_r_min": 1e-9,
    "p_r_max": 50.0,
    "p_r_points": 200,
    "r_c_max": 20.0,
    "r_c_points": 201
}

# Escenarios de las superficies de utilidad y beneficio
SURFACE_CONFIG = {
    "utility": {"p1": 0.1, "p2": 0.1, "x_range": (0.0, 20.0), "y_range": (0.0, 20.0)},
    "profit_pr_pc": {"W_c": 1.0, "x_range": (0.01, 20.0), "y_range": (0.0, 20.0)},
    "profit_pc_wc": {"P_r": 10.0, "x_range": (0.0, 20.0), "y_range": (0.01, 20.0)},
    "points": 41
}

# Configuración de gráficos
PLOT_CONFIG = {
    "figsize": (7, 4.5),
    "svg_hashsalt": "isac-market",
    "style": "whitegrid",
    "labels": {
        "w_p": "Precio unitario de potencia $w_p$",
        "w_w": "Precio unitario de ancho de banda $w_w$",
        "alpha": r"Peso de la detección $\alpha$",
        "P_r": "Potencia de detección $P_r$",
        "P_c": "Potencia de comunicación $P_c$",
        "W_c": "Ancho de banda $W_c$",
        "R_c": "Tasa de comunicación $R_c$",
        "p1": "Precio $p_1$",
        "p2": "Precio $p_2$",
        "theta": r"Calidad de detección $\theta$",
        "eta": r"Calidad de comunicación $\eta$",
        "profit_r": r"Beneficio $\Pi_r$",
        "profit_c": r"Beneficio $\Pi_c$",
        "profit": r"Beneficio $\Pi$"
    }
}

# Formato de las tablas CSV
CSV_CONFIG = {
    "sweep_columns": [
        "param", "value", "P_r", "P_c", "W_c", "R_c", "p1", "p2",
        "theta", "eta", "profit_r", "profit_c", "profit", "valid"
    ],
    "line_terminator": "\n"
}

# Códigos de salida de la línea de comandos
EXIT_CODES = {
    "ok": 0,
    "config_error": 2,
    "degenerate": 3,
    "invalid": 4,
    "io_error": 5
}

# Configuración de logging
LOGGING_CONFIG = {
    "level": "INFO",
    "format": "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
}


def ensure_directories():
    """Crea los directorios necesarios si no existen"""
    directories = [DATA_DIR, OUTPUT_DIR]
    for directory in directories:
        directory.mkdir(exist_ok=True)
