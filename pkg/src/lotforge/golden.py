"""Self-check against the hand-verified reference instances."""
from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal

from . import instances as ref
from .enumerator import exhaustive_optimize, index_to_strategy
from .model import binary_to_counts, fmt_money, lot_quantities, total_cost

_TERMS = ("CP", "CM", "CA", "CD", "CT")


@dataclass(frozen=True)
class Check:
    label: str
    expected: str
    actual: str

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


def _m(d: Decimal) -> str:
    return fmt_money(d)


def golden_checks() -> list[Check]:
    checks = []
    req, params = ref.THREE_PERIOD, ref.THREE_PERIOD_PARAMS
    for j, expected in ref.THREE_PERIOD_COSTS.items():
        counts = binary_to_counts(index_to_strategy(j, req.horizon))
        got = total_cost(counts, req, params).as_tuple()
        for term, exp, act in zip(_TERMS, expected, got):
            checks.append(Check(f"N=3 j_{j} {term}", exp, _m(act)))
    best = exhaustive_optimize(req, params)
    checks.append(Check("N=3 optimum index", str(ref.THREE_PERIOD_BEST), str(best.index)))

    req, params = ref.TWELVE_PERIOD, ref.TWELVE_PERIOD_PARAMS
    best = exhaustive_optimize(req, params)
    checks += [
        Check("N=12 optimum index", str(ref.TWELVE_PERIOD_BEST), str(best.index)),
        Check("N=12 optimum coverage", str(list(ref.TWELVE_PERIOD_BEST_COUNTS)), str(list(best.counts))),
        Check("N=12 optimum lots", str(ref.TWELVE_PERIOD_BEST_LOTS), str(lot_quantities(best.counts, req))),
        Check("N=12 optimum CT", _m(ref.TWELVE_PERIOD_BEST_COST), _m(best.breakdown.total)),
        Check("N=12 evaluations", "2048", str(best.evaluations)),
    ]
    return checks
