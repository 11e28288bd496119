"""Problem files (JSON) and run reports."""
from __future__ import annotations

import json
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path

from .enumerator import OptimumResult
from .model import (
    CostBreakdown,
    CostParams,
    DiscountSchedule,
    ModelError,
    Requirements,
    fmt_money,
    lot_quantities,
    to_money,
)


class ProblemFileError(ModelError):
    pass


def _int(value, name):
    if isinstance(value, bool) or not isinstance(value, int):
        if isinstance(value, Decimal) and value == value.to_integral_value():
            return int(value)
        raise ProblemFileError(f"{name} must be an integer, got {value!r}")
    return value


def parse_problem(doc: dict) -> tuple[Requirements, CostParams]:
    """Build model inputs from a decoded problem document.

    Layout::

        {"horizon": 3, "requirements": [10, 20, 15],
         "costs": {"setup": 100, "holding": 1, "deterioration": 10, "max_stay": 1,
                   "discounts": [{"over": 0, "unit_cost": 5}, {"over": 30, "unit_cost": "4.5"}]}}

    Monetary fields accept numbers or decimal strings.
    """
    try:
        horizon = _int(doc["horizon"], "horizon")
        demand = [_int(a, "requirements entry") for a in doc["requirements"]]
        costs = doc["costs"]
        if len(demand) != horizon:
            raise ProblemFileError(f"horizon is {horizon} but {len(demand)} requirements were given")
        brackets = []
        for entry in costs.get("discounts") or []:
            brackets.append((_int(entry["over"], "discount threshold"), to_money(entry["unit_cost"])))
        if not brackets:
            if "unit_cost" not in costs:
                raise ProblemFileError("costs need either 'discounts' or 'unit_cost'")
            brackets = [(0, to_money(costs["unit_cost"]))]
        params = CostParams(
            setup_cost=to_money(costs["setup"]),
            holding_cost=to_money(costs["holding"]),
            deterioration_cost=to_money(costs.get("deterioration", 0)),
            discounts=DiscountSchedule(tuple(brackets)),
            max_stay=_int(costs.get("max_stay", 0), "max_stay"),
        )
        return Requirements(tuple(demand)), params
    except ProblemFileError:
        raise
    except ModelError as exc:
        raise ProblemFileError(str(exc)) from None
    except (KeyError, TypeError, AttributeError) as exc:
        raise ProblemFileError(f"malformed problem file: {exc!r}") from None


def load_problem(path: str | Path) -> tuple[Requirements, CostParams]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ProblemFileError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ProblemFileError(f"{path}: invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ProblemFileError(f"{path}: top level must be an object")
    return parse_problem(doc)


def dump_problem(req: Requirements, params: CostParams) -> dict:
    return {
        "horizon": req.horizon,
        "requirements": list(req.demand),
        "costs": {
            "setup": fmt_money(params.setup_cost),
            "holding": fmt_money(params.holding_cost),
            "deterioration": fmt_money(params.deterioration_cost),
            "max_stay": params.max_stay,
            "discounts": [{"over": q, "unit_cost": fmt_money(c)} for q, c in params.discounts.brackets],
        },
    }


@dataclass(frozen=True)
class RunReport:
    horizon: int
    index: int
    flags: tuple[int, ...]
    counts: tuple[int, ...]
    lots: tuple[tuple[int, int], ...]
    breakdown: CostBreakdown
    evaluations: int
    wall_time: float | None = None

    @classmethod
    def from_result(cls, result: OptimumResult, req: Requirements, wall_time: float | None = None) -> RunReport:
        return cls(
            horizon=req.horizon,
            index=result.index,
            flags=result.flags,
            counts=result.counts,
            lots=tuple(lot_quantities(result.counts, req)),
            breakdown=result.breakdown,
            evaluations=result.evaluations,
            wall_time=wall_time,
        )

    def to_dict(self, timing: bool = False) -> dict:
        b = self.breakdown
        d = {
            "horizon": self.horizon,
            "index": self.index,
            "flags": list(self.flags),
            "counts": list(self.counts),
            "lots": [{"period": p, "quantity": q} for p, q in self.lots],
            "costs": {
                "ordering": fmt_money(b.ordering),
                "holding": fmt_money(b.holding),
                "acquisition": fmt_money(b.acquisition),
                "deterioration": fmt_money(b.deterioration),
                "total": fmt_money(b.total),
            },
            "evaluations": self.evaluations,
        }
        if timing and self.wall_time is not None:
            d["wall_time_s"] = self.wall_time
        return d

    @classmethod
    def from_dict(cls, d: dict) -> RunReport:
        c = d["costs"]
        breakdown = CostBreakdown(
            Decimal(c["ordering"]), Decimal(c["holding"]), Decimal(c["acquisition"]), Decimal(c["deterioration"])
        )
        if breakdown.total != Decimal(c["total"]):
            raise ProblemFileError("report total does not equal the sum of its components")
        return cls(
            horizon=d["horizon"],
            index=d["index"],
            flags=tuple(d["flags"]),
            counts=tuple(d["counts"]),
            lots=tuple((e["period"], e["quantity"]) for e in d["lots"]),
            breakdown=breakdown,
            evaluations=d["evaluations"],
            wall_time=d.get("wall_time_s"),
        )

    def render(self) -> str:
        b = self.breakdown
        lines = [
            f"horizon        {self.horizon} periods",
            f"optimum        j = {self.index}",
            f"order flags    {list(self.flags)}",
            f"coverage       {list(self.counts)}",
            "lots           " + ", ".join(f"period {p}: {q}" for p, q in self.lots),
            f"ordering  CP   {fmt_money(b.ordering)}",
            f"holding   CM   {fmt_money(b.holding)}",
            f"purchase  CA   {fmt_money(b.acquisition)}",
            f"decay     CD   {fmt_money(b.deterioration)}",
            f"total     CT   {fmt_money(b.total)}",
            f"evaluations    {self.evaluations}",
        ]
        return "\n".join(lines)
