"""Index-stable enumeration of every supply strategy and the exhaustive optimizer.

Strategy ``j`` (1-based) for horizon ``N`` is built from ``v = 2**(N-1) - j``:
the ``N-1`` bits of ``v``, most significant first, are the order flags of
periods 2..N; period 1 always orders.  So ``j = 1`` orders every period and
``j = 2**(N-1)`` places a single order covering the whole horizon.
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from typing import Iterator, Sequence

from .model import (
    CostBreakdown,
    CostEvaluator,
    CostParams,
    Counts,
    Flags,
    ModelError,
    Requirements,
    binary_to_counts,
    check_flags,
)

MAX_HORIZON = 63
SOFT_HORIZON = 30


class HorizonError(ModelError):
    """Horizon too large to enumerate (hard limit, or soft limit without ``force``)."""


def strategy_count(n: int) -> int:
    if n < 1:
        raise ModelError("horizon must be at least 1 period")
    if n - 1 >= 63:
        raise OverflowError(f"2**{n - 1} strategies exceeds the 64-bit range")
    return 1 << (n - 1)


def check_horizon(n: int, force: bool = False) -> None:
    if n > MAX_HORIZON:
        raise HorizonError(f"horizon {n} exceeds the hard limit of {MAX_HORIZON} periods")
    if n > SOFT_HORIZON and not force:
        raise HorizonError(
            f"horizon {n} means {strategy_count(n)} strategies; pass force=True to enumerate"
        )


def index_to_mask(j: int, n: int) -> int:
    """Bitmask (bit p = order in period p+1) of strategy ``j``."""
    total = strategy_count(n)
    if not 1 <= j <= total:
        raise ModelError(f"strategy index {j} outside [1, {total}]")
    return _free_bits_to_mask(total - j, n)


def _free_bits_to_mask(v: int, n: int) -> int:
    # bit k of v (LSB = 0) is the flag of period N-k, i.e. mask bit N-1-k
    mask = 1
    for k in range(n - 1):
        if v >> k & 1:
            mask |= 1 << (n - 1 - k)
    return mask


def index_to_strategy(j: int, n: int) -> Flags:
    total = strategy_count(n)
    if not 1 <= j <= total:
        raise ModelError(f"strategy index {j} outside [1, {total}]")
    v = total - j
    return (1,) + tuple(int(b) for b in format(v, f"0{n - 1}b")) if n > 1 else (1,)


def strategy_to_index(flags: Sequence[int]) -> int:
    flags = check_flags(flags)
    n = len(flags)
    v = 0
    for f in flags[1:]:
        v = v << 1 | f
    return strategy_count(n) - v


def enumerate_strategies(n: int, start: int = 1, stop: int | None = None) -> Iterator[tuple[int, Flags]]:
    """Yield ``(j, flags)`` for ``j`` in ``[start, stop]`` in ascending order."""
    total = strategy_count(n)
    stop = total if stop is None else stop
    for j in range(start, stop + 1):
        yield j, index_to_strategy(j, n)


@dataclass(frozen=True)
class Landscape:
    """Total cost of every strategy; ``costs[j - 1]`` belongs to strategy ``j``."""

    costs: tuple[Decimal, ...]
    best_index: int
    min_cost: Decimal

    def records(self) -> Iterator[tuple[int, Decimal]]:
        return enumerate(self.costs, start=1)


@dataclass(frozen=True)
class OptimumResult:
    index: int
    counts: Counts
    breakdown: CostBreakdown
    evaluations: int
    landscape: Landscape | None = None

    @property
    def flags(self) -> Flags:
        return tuple(1 if c else 0 for c in self.counts)


def _scan(req: Requirements, params: CostParams, start: int, stop: int, keep: bool):
    """Scan indices ``start..stop``; returns (best_j, best_units, evaluations, units or None)."""
    ev = CostEvaluator(req, params)
    n = req.horizon
    total = 1 << (n - 1)
    best_j, best_units = 0, None
    units = [] if keep else None
    evaluations = 0
    for j in range(start, stop + 1):
        u = ev.mask_units(_free_bits_to_mask(total - j, n))
        evaluations += 1
        if best_units is None or u < best_units:
            best_j, best_units = j, u
        if keep:
            units.append(u)
    return best_j, best_units, evaluations, units


def _scan_job(args):
    return _scan(*args)


def _partition(total: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, total))
    size, extra = divmod(total, parts)
    out, lo = [], 1
    for p in range(parts):
        hi = lo + size - 1 + (1 if p < extra else 0)
        out.append((lo, hi))
        lo = hi + 1
    return out


def default_workers() -> int:
    env = os.environ.get("LOTFORGE_WORKERS")
    return int(env) if env else 1


def exhaustive_optimize(req: Requirements, params: CostParams, emit_landscape: bool = False,
                        workers: int = 1, force: bool = False) -> OptimumResult:
    """Evaluate every strategy and return the cheapest (smallest index on ties).

    With ``workers > 1`` the index range is split into contiguous chunks that
    are scanned in separate processes; chunks are merged in index order so
    the result does not depend on the worker count.
    """
    n = req.horizon
    check_horizon(n, force)
    total = strategy_count(n)
    chunks = _partition(total, workers)
    jobs = [(req, params, lo, hi, emit_landscape) for lo, hi in chunks]
    if len(jobs) == 1:
        parts = [_scan(*jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=len(jobs)) as pool:
            parts = list(pool.map(_scan_job, jobs))

    best_j, best_units, evaluations = 0, None, 0
    all_units: list[int] = []
    for j, u, count, units in parts:
        evaluations += count
        if best_units is None or u < best_units:
            best_j, best_units = j, u
        if emit_landscape:
            all_units.extend(units)

    ev = CostEvaluator(req, params)
    counts = binary_to_counts(index_to_strategy(best_j, n))
    breakdown = ev.breakdown(counts)
    landscape = None
    if emit_landscape:
        landscape = Landscape(tuple(ev.to_money(u) for u in all_units), best_j, breakdown.total)
    return OptimumResult(best_j, counts, breakdown, evaluations, landscape)
