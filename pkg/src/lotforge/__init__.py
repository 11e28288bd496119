"""Exhaustive lot sizing with quantity discounts and deterioration costs."""
from .enumerator import (
    HorizonError,
    Landscape,
    OptimumResult,
    enumerate_strategies,
    exhaustive_optimize,
    index_to_strategy,
    strategy_count,
    strategy_to_index,
)
from .model import (
    CostBreakdown,
    CostEvaluator,
    CostParams,
    DiscountSchedule,
    EvaluationCounter,
    ModelError,
    Requirements,
    acquisition_cost,
    binary_to_counts,
    counts_to_binary,
    deterioration_cost,
    holding_cost,
    lot_quantities,
    ordering_cost,
    simulate_inventory,
    total_cost,
    unit_acquisition_cost,
)
from .tabu import (
    ExperimentStats,
    InstanceTooSmallError,
    TabuConfig,
    TabuResult,
    experiment_rng,
    neighbor_move,
    random_initial,
    run_experiments,
    tabu_search,
)

__version__ = "0.1.0"
