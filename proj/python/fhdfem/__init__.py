"""Decoupled finite element solver for stationary ferrohydrodynamics."""

from ._core import (
    CSV_HEADER,
    ConfigError,
    IterationGap,
    LevelRow,
    MaterialParams,
    OrderFit,
    PropertyResult,
    RunConfig,
    SolverError,
    StudyReport,
    alpha,
    beta,
    beta_prime,
    check_properties,
    convergence_orders,
    inf_sup_constant,
    iteration_gap,
    langevin,
    load_config,
    magnetization,
    mesh_counts,
    parse_config,
    run_config,
    run_study,
    solve_manufactured,
    to_json,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
