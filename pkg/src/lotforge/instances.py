"""Reference instances with hand-checked results."""
from decimal import Decimal

from .model import CostParams, DiscountSchedule, Requirements

THREE_PERIOD = Requirements((10, 20, 15))
THREE_PERIOD_PARAMS = CostParams(
    setup_cost=Decimal(100),
    holding_cost=Decimal(1),
    deterioration_cost=Decimal(10),
    discounts=DiscountSchedule(((0, Decimal(5)), (30, Decimal("4.5")))),
    max_stay=1,
)

# (CP, CM, CA, CD, CT) for strategies j = 1..4
THREE_PERIOD_COSTS = {
    1: ("300", "0", "225", "0", "525"),
    2: ("200", "15", "207.5", "0", "422.5"),
    3: ("200", "20", "225", "0", "445"),
    4: ("100", "50", "202.5", "150", "502.5"),
}
THREE_PERIOD_BEST = 2

TWELVE_PERIOD = Requirements((10, 20, 10, 35, 40, 40, 35, 10, 5, 5, 35, 40))
TWELVE_PERIOD_PARAMS = CostParams(
    setup_cost=Decimal(100),
    holding_cost=Decimal(1),
    deterioration_cost=Decimal(10),
    discounts=DiscountSchedule(((0, Decimal(5)), (60, Decimal("4.5")))),
    max_stay=4,
)
TWELVE_PERIOD_BEST = 1726
TWELVE_PERIOD_BEST_COUNTS = (3, 0, 0, 2, 0, 5, 0, 0, 0, 0, 2, 0)
TWELVE_PERIOD_BEST_LOTS = [(1, 40), (4, 75), (6, 95), (11, 75)]
TWELVE_PERIOD_BEST_COST = Decimal("1912.5")
