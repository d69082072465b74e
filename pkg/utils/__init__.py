"""
Paquete de utilidades del motor de equilibrio de mercado ISAC

Contiene las funciones especiales, el modelo económico, la lectura de
escenarios y tablas, y la generación de gráficos.
"""

# Importar funciones principales para facilitar su acceso
from .errors import (
    IsacError,
    DomainError,
    ModelParamsError,
    SeriesConvergenceError,
    SolverError,
    ConfigError,
    PlotColumnError
)

from .special_functions import (
    log_modified_bessel_i,
    upper_regularized_gamma,
    marcum_q,
    marcum_q_complement,
    marcum_q_difference
)

from .market_model import (
    ModelParams,
    Allocation,
    PriceQuote,
    detection_probability,
    comm_rate,
    inverse_demand_p1,
    inverse_demand_p2,
    profit_total
)

from .data_utils import (
    ScenarioConfig,
    load_scenario_config,
    load_json_data,
    save_json_data,
    write_table_csv,
    read_table_csv
)

# Versión del módulo
__version__ = '0.1.0'
