"""Real-coded NSGA-II for production/consumption power trade-offs."""

from polycell.evolve.nsga2 import (
    GENERATOR,
    Individual,
    ObjectiveSpec,
    ParetoResult,
    Population,
    evaluate,
    front_report,
    front_to_csv,
    run,
)
from polycell.evolve.operators import (
    Bounds,
    GAConfig,
    init_population,
    polynomial_mutation,
    sbx_crossover,
    tournament_select,
)
from polycell.evolve.sorting import crowding_distance, dominates, fast_nondominated_sort

__all__ = [
    "GENERATOR",
    "Individual",
    "ObjectiveSpec",
    "ParetoResult",
    "Population",
    "evaluate",
    "front_report",
    "front_to_csv",
    "run",
    "Bounds",
    "GAConfig",
    "init_population",
    "polynomial_mutation",
    "sbx_crossover",
    "tournament_select",
    "crowding_distance",
    "dominates",
    "fast_nondominated_sort",
]
