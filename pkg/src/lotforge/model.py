"""Domain types and the exact cost engine.

Money is carried as :class:`decimal.Decimal`.  Inputs are checked to be
representable at a fixed number of fractional digits (``MONEY_SCALE``), which
keeps every product and sum in the cost model exact.

Strategies come in two encodings, both plain tuples of ints:

* binary flags -- ``flags[i] == 1`` means an order is placed in period ``i+1``;
* coverage counts -- ``counts[i]`` is the number of consecutive periods covered
  by the order placed in period ``i+1`` (0 means no order).
"""
from __future__ import annotations

import threading
from bisect import bisect_left
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Sequence

MONEY_SCALE = 4

Flags = tuple[int, ...]
Counts = tuple[int, ...]


class ModelError(ValueError):
    """Invalid model input (demand, parameters or strategy)."""


def to_money(value, scale: int = MONEY_SCALE) -> Decimal:
    """Convert ``value`` to an exact Decimal with at most ``scale`` fractional digits.

    Floats are accepted through their shortest repr (``4.5`` -> ``Decimal('4.5')``).
    """
    if isinstance(value, Decimal):
        d = value
    elif isinstance(value, bool):
        raise ModelError(f"not a monetary value: {value!r}")
    elif isinstance(value, (int, str)):
        try:
            d = Decimal(value)
        except InvalidOperation:
            raise ModelError(f"not a monetary value: {value!r}") from None
    elif isinstance(value, float):
        d = Decimal(repr(value))
    else:
        raise ModelError(f"not a monetary value: {value!r}")
    if not d.is_finite():
        raise ModelError(f"monetary value must be finite: {value!r}")
    exponent = d.as_tuple().exponent
    if exponent < -scale and d != d.quantize(Decimal(1).scaleb(-scale)):
        raise ModelError(f"{value!r} has more than {scale} fractional digits")
    return d


def fmt_money(d: Decimal) -> str:
    """Plain (non-exponent) string without trailing zeros: 1912.5000 -> '1912.5'."""
    s = format(d.normalize(), "f")
    return "0" if s in ("-0", "") else s


@dataclass(frozen=True)
class Requirements:
    demand: tuple[int, ...]

    def __post_init__(self):
        demand = tuple(self.demand)
        if len(demand) < 1:
            raise ModelError("horizon must be at least 1 period")
        for a in demand:
            if isinstance(a, bool) or not isinstance(a, int) or a < 0:
                raise ModelError(f"demand entries must be non-negative integers, got {a!r}")
        object.__setattr__(self, "demand", demand)

    @property
    def horizon(self) -> int:
        return len(self.demand)


@dataclass(frozen=True)
class DiscountSchedule:
    """Stepwise price list.

    ``brackets`` is a sequence of ``(over, unit_cost)`` pairs.  The first
    threshold must be 0.  A quantity pays the unit cost of the last bracket
    whose threshold it *strictly* exceeds, so a lot of exactly ``over`` units
    still pays the previous (higher) price.
    """

    brackets: tuple[tuple[int, Decimal], ...]

    def __post_init__(self):
        brackets = tuple((int(q), to_money(c)) for q, c in self.brackets)
        if not brackets:
            raise ModelError("discount schedule needs at least one bracket")
        if brackets[0][0] != 0:
            raise ModelError("first discount threshold must be 0")
        for (q0, c0), (q1, c1) in zip(brackets, brackets[1:]):
            if q1 <= q0:
                raise ModelError("discount thresholds must be strictly increasing")
            if c1 >= c0:
                raise ModelError("discounted unit costs must be strictly decreasing")
        if brackets[-1][1] < 0:
            raise ModelError("unit costs must be non-negative")
        object.__setattr__(self, "brackets", brackets)
        object.__setattr__(self, "_thresholds", tuple(q for q, _ in brackets))

    @classmethod
    def flat(cls, unit_cost) -> DiscountSchedule:
        return cls(((0, unit_cost),))

    def unit_cost(self, quantity: int) -> Decimal:
        idx = bisect_left(self._thresholds, quantity) - 1
        return self.brackets[max(idx, 0)][1]

    def scaled(self, factor: Decimal) -> DiscountSchedule:
        return DiscountSchedule(tuple((q, c * factor) for q, c in self.brackets))


@dataclass(frozen=True)
class CostParams:
    setup_cost: Decimal
    holding_cost: Decimal
    deterioration_cost: Decimal
    discounts: DiscountSchedule
    max_stay: int

    def __post_init__(self):
        for name in ("setup_cost", "holding_cost", "deterioration_cost"):
            v = to_money(getattr(self, name))
            if v < 0:
                raise ModelError(f"{name} must be >= 0")
            object.__setattr__(self, name, v)
        if isinstance(self.max_stay, bool) or not isinstance(self.max_stay, int) or self.max_stay < 0:
            raise ModelError("max_stay must be a non-negative integer")


@dataclass(frozen=True)
class CostBreakdown:
    ordering: Decimal
    holding: Decimal
    acquisition: Decimal
    deterioration: Decimal

    @property
    def total(self) -> Decimal:
        return self.ordering + self.holding + self.acquisition + self.deterioration

    def __add__(self, other: CostBreakdown) -> CostBreakdown:
        return CostBreakdown(
            self.ordering + other.ordering,
            self.holding + other.holding,
            self.acquisition + other.acquisition,
            self.deterioration + other.deterioration,
        )

    def as_tuple(self) -> tuple[Decimal, Decimal, Decimal, Decimal, Decimal]:
        return self.ordering, self.holding, self.acquisition, self.deterioration, self.total


ZERO = CostBreakdown(Decimal(0), Decimal(0), Decimal(0), Decimal(0))


# --- encodings -------------------------------------------------------------

def check_flags(flags: Sequence[int]) -> Flags:
    flags = tuple(flags)
    if not flags:
        raise ModelError("empty strategy")
    if any(f not in (0, 1) for f in flags):
        raise ModelError(f"flags must be 0/1: {flags}")
    if flags[0] != 1:
        raise ModelError("first period must place an order (no shortages)")
    return flags


def check_counts(counts: Sequence[int]) -> Counts:
    counts = tuple(counts)
    if not counts:
        raise ModelError("empty strategy")
    n = len(counts)
    i = 0
    while i < n:
        c = counts[i]
        if c < 1 or i + c > n:
            raise ModelError(f"counts violate the partition property at period {i + 1}: {counts}")
        if any(counts[i + 1:i + c]):
            raise ModelError(f"overlapping orders inside the lot at period {i + 1}: {counts}")
        i += c
    return counts


def binary_to_counts(flags: Sequence[int]) -> Counts:
    flags = check_flags(flags)
    n = len(flags)
    starts = [i for i, f in enumerate(flags) if f] + [n]
    counts = [0] * n
    for a, b in zip(starts, starts[1:]):
        counts[a] = b - a
    return tuple(counts)


def counts_to_binary(counts: Sequence[int]) -> Flags:
    return tuple(1 if c else 0 for c in check_counts(counts))


def _lots(counts: Counts):
    for i, c in enumerate(counts):
        if c:
            yield i, c


def _check_dims(counts: Sequence[int], req: Requirements) -> Counts:
    counts = check_counts(counts)
    if len(counts) != req.horizon:
        raise ModelError(f"strategy has {len(counts)} periods, requirements have {req.horizon}")
    return counts


def lot_quantities(counts: Sequence[int], req: Requirements) -> list[tuple[int, int]]:
    """(period, quantity) for each order, 1-based periods in ascending order."""
    counts = _check_dims(counts, req)
    a = req.demand
    return [(i + 1, sum(a[i:i + c])) for i, c in _lots(counts)]


# --- cost terms ------------------------------------------------------------

def _excess_stay(stay: int, max_stay: int) -> int:
    # only stay beyond the allowed maximum is charged
    return max(0, stay - max_stay)


def ordering_cost(counts: Sequence[int], params: CostParams) -> Decimal:
    counts = check_counts(counts)
    return params.setup_cost * sum(1 for c in counts if c)


def holding_cost(counts: Sequence[int], req: Requirements, params: CostParams) -> Decimal:
    counts = _check_dims(counts, req)
    a = req.demand
    unit_periods = sum(a[l] * (l - i) for i, c in _lots(counts) for l in range(i, i + c))
    return params.holding_cost * unit_periods


def unit_acquisition_cost(quantity: int, discounts: DiscountSchedule) -> Decimal:
    return discounts.unit_cost(quantity)


def acquisition_cost(counts: Sequence[int], req: Requirements, params: CostParams) -> Decimal:
    total = Decimal(0)
    for _, qty in lot_quantities(counts, req):
        total += qty * unit_acquisition_cost(qty, params.discounts)
    return total


def deterioration_cost(counts: Sequence[int], req: Requirements, params: CostParams) -> Decimal:
    counts = _check_dims(counts, req)
    a = req.demand
    mu = params.max_stay
    excess = sum(a[l] * _excess_stay(l - i, mu) for i, c in _lots(counts) for l in range(i, i + c))
    return params.deterioration_cost * excess


class EvaluationCounter:
    """Thread-safe tally of objective-function evaluations."""

    def __init__(self, start: int = 0):
        self._value = start
        self._lock = threading.Lock()

    def add(self, n: int = 1) -> None:
        with self._lock:
            self._value += n

    @property
    def value(self) -> int:
        return self._value


def total_cost(counts: Sequence[int], req: Requirements, params: CostParams,
               counter: EvaluationCounter | None = None) -> CostBreakdown:
    breakdown = CostBreakdown(
        ordering_cost(counts, params),
        holding_cost(counts, req, params),
        acquisition_cost(counts, req, params),
        deterioration_cost(counts, req, params),
    )
    if counter is not None:
        counter.add()
    return breakdown


def lot_breakdown(start: int, length: int, req: Requirements, params: CostParams) -> CostBreakdown:
    """Cost of one lot ordered in 0-based period ``start`` covering ``length`` periods."""
    sub = Requirements(req.demand[start:start + length])
    single = (length,) + (0,) * (length - 1)
    return CostBreakdown(
        ordering_cost(single, params),
        holding_cost(single, sub, params),
        acquisition_cost(single, sub, params),
        deterioration_cost(single, sub, params),
    )


class CostEvaluator:
    """Fast evaluator over a precomputed table of per-lot costs.

    Every cost term is separable by lot, so the cost of a strategy is the sum
    of its lots' costs.  The table holds each lot's total in fixed-point
    integer units (``10**-scale``) so the hot path is plain int addition.
    """

    def __init__(self, req: Requirements, params: CostParams, scale: int = MONEY_SCALE):
        self.req = req
        self.params = params
        self.scale = scale
        self.unit = Decimal(1).scaleb(-scale)
        n = req.horizon
        self.lots = [[None] * (n - i + 1) for i in range(n)]
        self.lot_units = [[0] * (n - i + 1) for i in range(n)]
        for i in range(n):
            for c in range(1, n - i + 1):
                b = lot_breakdown(i, c, req, params)
                self.lots[i][c] = b
                self.lot_units[i][c] = int(b.total.scaleb(scale))
        self.counter = EvaluationCounter()

    def breakdown(self, counts: Sequence[int]) -> CostBreakdown:
        counts = _check_dims(counts, self.req)
        self.counter.add()
        out = ZERO
        for i, c in _lots(counts):
            out = out + self.lots[i][c]
        return out

    def mask_units(self, mask: int) -> int:
        """Total cost (fixed-point units) of a bitmask strategy; bit p = order in period p+1.

        Does not touch the shared counter; callers keep their own tally.
        """
        lot = self.lot_units
        n = self.req.horizon
        total = 0
        start = 0
        for p in range(1, n):
            if mask >> p & 1:
                total += lot[start][p - start]
                start = p
        return total + lot[start][n - start]

    def to_money(self, units: int) -> Decimal:
        return Decimal(units).scaleb(-self.scale)


def flags_to_mask(flags: Sequence[int]) -> int:
    return sum(1 << p for p, f in enumerate(flags) if f)


def mask_to_flags(mask: int, horizon: int) -> Flags:
    return tuple(mask >> p & 1 for p in range(horizon))


# --- independent oracle ----------------------------------------------------

def simulate_inventory(counts: Sequence[int], req: Requirements, params: CostParams) -> CostBreakdown:
    """Recompute the cost breakdown by stepping through the horizon.

    Stock is kept as batches tagged with the period they arrived.  Each period
    the due lot (if any) arrives, the period's demand is drawn from the
    batches reserved for it, and every unit still on hand at the end of the
    period is charged one period of holding, plus deterioration if its age at
    the next period exceeds the allowed stay.
    """
    counts = _check_dims(counts, req)
    a = req.demand
    n = req.horizon
    cp = cm = ca = cd = Decimal(0)
    # (arrival_period, consume_period) -> units; a lot is bought as one block
    # but each unit is earmarked for the period whose demand it serves
    on_hand: dict[tuple[int, int], int] = {}
    for t in range(n):
        c = counts[t]
        if c:
            cp += params.setup_cost
            qty = 0
            for l in range(t, t + c):
                on_hand[(t, l)] = a[l]
                qty += a[l]
            price = params.discounts.brackets[0][1]
            for over, unit_cost in params.discounts.brackets:
                if qty > over:
                    price = unit_cost
            ca += price * qty
        for key in [k for k in on_hand if k[1] == t]:
            del on_hand[key]
        for (arrived, _), units in on_hand.items():
            cm += params.holding_cost * units
            age_next = t + 1 - arrived
            if age_next > params.max_stay:
                cd += params.deterioration_cost * units
    if on_hand:
        raise AssertionError("stock left over at end of horizon")
    return CostBreakdown(cp, cm, ca, cd)
