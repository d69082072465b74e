"""
Pruebas del resolvedor de equilibrio y de sus oráculos
"""

import math

import numpy as np
import pytest

from config import CSV_CONFIG, MODEL_DEFAULTS
from src.equilibrium_solver import (
    BOUNDARY,
    DEGENERATE,
    INTERIOR,
    SolverConfig,
    analytic_comm_optimum,
    brute_force_oracle,
    check_sensing_demand_local,
    check_sensing_demand_validity,
    maximize_profit_c,
    maximize_profit_r,
    oracle_profit_grids,
    richardson_derivative,
    solve_equilibrium,
    verify_equilibrium,
)
from utils.errors import DomainError, SolverError
from utils.market_model import (
    ModelParams,
    comm_rate,
    detection_probability,
    inverse_demand_p1,
    profit_c,
    profit_r,
    sensing_surplus,
)

CFG = SolverConfig()
DEFAULTS = ModelParams()


def random_draws(count: int = 20, seed: int = 314):
    """Parámetros dentro de ±50% de los valores por defecto"""
    rng = np.random.default_rng(seed)
    names = list(MODEL_DEFAULTS)
    for factors in rng.uniform(0.5, 1.5, size=(count, len(names))):
        yield ModelParams(**{name: MODEL_DEFAULTS[name] * f for name, f in zip(names, factors)})


@pytest.fixture(scope="module")
def equilibrium():
    return solve_equilibrium(DEFAULTS, CFG)


def within_one_cell(value: float, axis: np.ndarray, index: int) -> bool:
    """El valor dista a lo sumo una celda logarítmica del nodo `index`"""
    step = math.log(axis[1] / axis[0])
    return abs(math.log(value) - math.log(axis[index])) <= step * (1.0 + 1e-9)


def grid_argmax(grids):
    i_r = int(np.argmax(grids.profit_r_values))
    j_c, k_c = np.unravel_index(int(np.argmax(grids.profit_c_values)), grids.profit_c_values.shape)
    return i_r, int(j_c), int(k_c)


def test_solver_config_validation():
    with pytest.raises(DomainError):
        SolverConfig(p_r_bracket=(5.0, 1.0))
    with pytest.raises(DomainError):
        SolverConfig(pc_wc_bracket=((0.0, 1.0), (1e-4, 500.0)))
    with pytest.raises(DomainError):
        SolverConfig(rel_tol=0.0)
    with pytest.raises(DomainError):
        SolverConfig(oracle_grid=2)
    assert CFG.with_overrides(foc_tol=1e-5).foc_tol == 1e-5


def test_richardson_derivative():
    assert richardson_derivative(math.sin, 0.3, 1e-2) == pytest.approx(math.cos(0.3), rel=1e-10)


def test_equilibrium_invariants_at_defaults(equilibrium):
    assert equilibrium.profit == equilibrium.profit_r + equilibrium.profit_c
    assert equilibrium.p2 == DEFAULTS.beta / (1.0 + equilibrium.R_c_star)
    assert equilibrium.p1 == inverse_demand_p1(equilibrium.P_r_star, DEFAULTS)
    assert equilibrium.R_c_star == comm_rate(equilibrium.P_c_star, equilibrium.W_c_star, DEFAULTS)
    assert equilibrium.theta == detection_probability(equilibrium.P_r_star, DEFAULTS)
    assert equilibrium.eta == math.log1p(equilibrium.R_c_star)
    assert equilibrium.status_r == INTERIOR and equilibrium.status_c == INTERIOR
    assert not equilibrium.degenerate and not equilibrium.boundary
    assert all(r <= CFG.foc_tol for r in equilibrium.foc_residuals)
    assert equilibrium.profit > 0.0


def test_record_matches_csv_schema(equilibrium):
    assert list(equilibrium.as_record()) == CSV_CONFIG["sweep_columns"][2:-1]
    data = equilibrium.to_dict()
    assert data["valid"] == equilibrium.valid_label
    assert len(data["foc_residuals"]) == 3


def test_sensing_validity_is_reported_as_evaluated(equilibrium):
    surplus = sensing_surplus(equilibrium.P_r_star, equilibrium.p1, DEFAULTS)
    anchor = DEFAULTS.alpha * detection_probability(0.0, DEFAULTS)
    assert equilibrium.sensing_demand_valid == (surplus >= anchor)
    assert equilibrium.valid_label == ("true" if surplus >= anchor else "false")
    assert equilibrium.sensing_demand_local


def test_sensing_validity_check_cases():
    # En la rama decreciente alta el precio p1 es casi nulo
    assert check_sensing_demand_validity(40.0, DEFAULTS)
    # Cerca de cero θ es convexa y comprar no compensa
    assert not check_sensing_demand_validity(1e-3, DEFAULTS)
    with pytest.raises(DomainError):
        check_sensing_demand_validity(0.0, DEFAULTS)


def test_sensing_local_condition():
    assert not check_sensing_demand_local(0.5, DEFAULTS)
    assert check_sensing_demand_local(10.0, DEFAULTS)
    with pytest.raises(DomainError):
        check_sensing_demand_local(-1.0, DEFAULTS)


def test_comm_optimum_matches_closed_form(equilibrium):
    closed = analytic_comm_optimum(DEFAULTS)
    assert equilibrium.P_c_star == pytest.approx(closed.P_c, rel=1e-5)
    assert equilibrium.W_c_star == pytest.approx(closed.W_c, rel=1e-5)
    assert equilibrium.R_c_star == pytest.approx(closed.R_c, rel=1e-5)
    assert equilibrium.profit_c == pytest.approx(profit_c(closed.P_c, closed.W_c, DEFAULTS), rel=1e-10)


def test_closed_form_optimum_conditions():
    closed = analytic_comm_optimum(DEFAULTS)
    x = closed.P_c * DEFAULTS.gamma_C / closed.W_c
    lhs = (DEFAULTS.w_p / DEFAULTS.gamma_C) * ((1.0 + x) * math.log1p(x) - x)
    assert lhs == pytest.approx(DEFAULTS.w_w, rel=1e-10)
    assert closed.R_c == pytest.approx(math.sqrt(DEFAULTS.beta / closed.unit_cost) - 1.0, rel=1e-12)
    assert comm_rate(closed.P_c, closed.W_c, DEFAULTS) == pytest.approx(closed.R_c, rel=1e-10)

    expensive = analytic_comm_optimum(DEFAULTS.with_value("w_w", 1e3))
    assert expensive.unit_cost > DEFAULTS.beta
    assert (expensive.P_c, expensive.W_c, expensive.R_c) == (0.0, 0.0, 0.0)


def test_profit_r_argmax_invariant_to_common_scaling():
    base, _ = maximize_profit_r(DEFAULTS, CFG)
    scaled_params = ModelParams(alpha=2.5, w_p=2.5 * DEFAULTS.w_p)
    scaled, _ = maximize_profit_r(scaled_params, CFG)
    assert scaled == pytest.approx(base, rel=1e-6)


def test_profit_r_refinement_beats_coarse_scan():
    power, diagnostics = maximize_profit_r(DEFAULTS, CFG)
    coarse = max(profit_r(p, DEFAULTS) for p in np.geomspace(*CFG.p_r_bracket, CFG.coarse_scan_points))
    assert diagnostics.profit >= coarse
    assert diagnostics.profit == profit_r(power, DEFAULTS)
    assert diagnostics.candidates >= 1


def test_degenerate_when_power_is_too_expensive():
    params = DEFAULTS.with_value("w_p", 10.0)
    result = solve_equilibrium(params, CFG)
    assert result.status_r == DEGENERATE
    assert result.status_c == DEGENERATE
    assert result.degenerate
    assert result.valid_label == DEGENERATE


def test_unaffordable_bandwidth_hits_the_lower_bound():
    params = DEFAULTS.with_value("w_w", 1e3)
    _, bandwidth, diagnostics = maximize_profit_c(params, CFG)
    assert bandwidth == pytest.approx(CFG.pc_wc_bracket[1][0], rel=1e-6)
    assert diagnostics.boundary
    assert diagnostics.status in (BOUNDARY, DEGENERATE)


def test_non_finite_profit_from_every_start_is_a_solver_error(monkeypatch):
    monkeypatch.setattr("src.equilibrium_solver.profit_c", lambda P_c, W_c, params: math.nan)
    with pytest.raises(SolverError):
        maximize_profit_c(DEFAULTS, CFG)


def test_doubling_prices_never_increases_profit(equilibrium):
    doubled = ModelParams(w_p=2 * DEFAULTS.w_p, w_w=2 * DEFAULTS.w_w)
    assert solve_equilibrium(doubled, CFG).profit <= equilibrium.profit


def test_solver_is_deterministic(equilibrium):
    assert solve_equilibrium(DEFAULTS, CFG) == equilibrium


def test_oracle_equivalence_at_defaults(equilibrium):
    allocation, best = brute_force_oracle(DEFAULTS, CFG)
    assert best <= equilibrium.profit + CFG.foc_tol
    assert abs(equilibrium.profit - best) <= 1e-4 * max(1.0, abs(best))
    assert allocation.P_r == pytest.approx(equilibrium.P_r_star, rel=0.1)


def test_oracle_is_deterministic():
    assert brute_force_oracle(DEFAULTS, CFG) == brute_force_oracle(DEFAULTS, CFG)


def test_oracle_reports_negative_best_when_nothing_pays():
    params = ModelParams(w_p=50.0, w_w=50.0)
    _, best = brute_force_oracle(params, CFG)
    assert best < 0.0


def test_oracle_max_does_not_decrease_on_nested_grids():
    coarse_cfg = CFG.with_overrides(oracle_grid=60, oracle_refine_levels=0)
    fine_cfg = CFG.with_overrides(oracle_grid=119, oracle_refine_levels=0)
    _, coarse = brute_force_oracle(DEFAULTS, coarse_cfg)
    _, fine = brute_force_oracle(DEFAULTS, fine_cfg)
    assert fine >= coarse - 1e-12


def test_separability_of_the_oracle(equilibrium):
    grids = oracle_profit_grids(DEFAULTS, CFG)
    total = grids.profit_r_values[:, None, None] + grids.profit_c_values[None, :, :]
    joint = np.unravel_index(int(np.argmax(total)), total.shape)
    i_r, j_c, k_c = grid_argmax(grids)
    assert abs(joint[0] - i_r) <= 1 and abs(joint[1] - j_c) <= 1 and abs(joint[2] - k_c) <= 1
    assert within_one_cell(equilibrium.P_r_star, grids.p_r_axis, i_r)
    assert within_one_cell(equilibrium.P_c_star, grids.p_c_axis, j_c)
    assert within_one_cell(equilibrium.W_c_star, grids.w_c_axis, k_c)


def test_verify_equilibrium_report(equilibrium):
    report = verify_equilibrium(equilibrium, DEFAULTS, CFG)
    assert report["relative_gap"] <= 1e-4
    assert report["closed_form_R_c_gap"] <= 1e-4 * max(1.0, equilibrium.R_c_star)


@pytest.mark.slow
def test_oracle_equivalence_and_separability_on_random_draws():
    for params in random_draws():
        result = solve_equilibrium(params, CFG)
        allocation, best = brute_force_oracle(params, CFG)
        assert best <= result.profit + CFG.foc_tol, params
        assert abs(result.profit - best) <= 1e-4 * max(1.0, abs(best)), params

        grids = oracle_profit_grids(params, CFG)
        i_r, j_c, k_c = grid_argmax(grids)
        assert within_one_cell(result.P_r_star, grids.p_r_axis, i_r), params
        assert within_one_cell(result.P_c_star, grids.p_c_axis, j_c), params
        assert within_one_cell(result.W_c_star, grids.w_c_axis, k_c), params
        assert abs(result.profit - (profit_r(result.P_r_star, params)
                                    + profit_c(result.P_c_star, result.W_c_star, params))) <= 1e-12
        assert result.sensing_demand_local, params
        if result.status_r == INTERIOR and result.status_c == INTERIOR:
            assert all(r <= CFG.foc_tol for r in result.foc_residuals), (params, result.foc_residuals)
