"""Tabu search over binary strategies and the repeated-experiment harness.

One move negates a window of three consecutive order flags (period 1 is
never touched).  Each iteration samples a single random window; the move is
taken if the window is not tabu, or if it beats the best cost found so far
(aspiration).  Accepted moves are applied even when they raise the cost.

Randomness: every run owns a ``numpy.random.Generator`` over PCG64, seeded
with ``SeedSequence(base_seed, spawn_key=(k, experiment))``.  Window starts
are drawn with ``Generator.integers`` in blocks, so a run is fully determined
by ``(instance, config, base_seed, k, experiment)``.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from decimal import Decimal
from typing import Sequence

import numpy as np

from .model import (
    CostEvaluator,
    CostParams,
    Flags,
    ModelError,
    Requirements,
    check_flags,
    flags_to_mask,
    mask_to_flags,
)

PAPER_ITERATIONS = (10, 100, 1000, 5000, 10000)
_BLOCK = 1024


class InstanceTooSmallError(ModelError):
    """Fewer than four periods: no three-position window avoids period 1."""


@dataclass(frozen=True)
class TabuConfig:
    """Search settings.

    ``edge_windows`` lets the window start run up to period N, truncating the
    window at the end of the horizon.  With it off, starts are limited to
    ``[2, N-2]``; the N-3 window flips then span only a quarter of the
    strategy space, so from most random starts the optimum is unreachable.
    ``tabu_attribute`` is ``"window"`` (store the window start) or
    ``"solution"`` (store the strategy produced by the move).
    """

    iterations: int = 1000
    tenure: int = 5
    experiments: int = 1000
    base_seed: int = 0
    window_width: int = 3
    max_resample: int | None = None
    aspiration: bool = True
    edge_windows: bool = True
    tabu_attribute: str = "window"

    def __post_init__(self):
        if self.tenure < 0:
            raise ModelError("tenure must be >= 0")
        if self.iterations < 1:
            raise ModelError("iterations must be >= 1")
        if self.experiments < 1:
            raise ModelError("experiments must be >= 1")
        if self.window_width != 3:
            raise ModelError("window_width is fixed at 3")
        if self.max_resample is not None and self.max_resample < 1:
            raise ModelError("max_resample must be >= 1")
        if self.tabu_attribute not in ("window", "solution"):
            raise ModelError(f"unknown tabu attribute {self.tabu_attribute!r}")


def experiment_rng(base_seed: int, k: int, experiment: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(base_seed, spawn_key=(k, experiment))))


def random_initial(n: int, rng: np.random.Generator) -> Flags:
    if n < 1:
        raise ModelError("horizon must be at least 1 period")
    return (1,) + tuple(int(b) for b in rng.integers(0, 2, size=n - 1))


def _window_range(n: int, edge_windows: bool) -> tuple[int, int]:
    return 2, (n if edge_windows else n - 2)


def neighbor_move(flags: Sequence[int], start: int, clip: bool = False) -> Flags:
    """Negate flags at periods ``start .. start+2`` (1-based).

    Without ``clip`` the whole window must fit (``2 <= start <= N-2``); with it
    the window may run past period N and is cut short there.
    """
    flags = check_flags(flags)
    n = len(flags)
    lo, hi = _window_range(n, clip)
    if not lo <= start <= hi:
        raise ModelError(f"window start {start} outside [{lo}, {hi}]")
    out = list(flags)
    for p in range(start - 1, min(start + 2, n)):
        out[p] ^= 1
    return tuple(out)


@dataclass(frozen=True)
class Move:
    iteration: int
    start: int
    aspiration: bool


@dataclass(frozen=True)
class TabuResult:
    flags: Flags
    cost: Decimal
    evaluations: int
    trace: tuple[Decimal, ...] | None = None
    moves: tuple[Move, ...] | None = None
    skipped: int = 0


def tabu_search(req: Requirements, params: CostParams, cfg: TabuConfig, rng: np.random.Generator,
                evaluator: CostEvaluator | None = None, initial: Sequence[int] | None = None,
                record: bool = True) -> TabuResult:
    n = req.horizon
    if n < 4:
        raise InstanceTooSmallError(f"tabu search needs at least 4 periods, got {n}")
    ev = evaluator if evaluator is not None else CostEvaluator(req, params)
    lo, hi = _window_range(n, cfg.edge_windows)
    window = {s: sum(1 << p for p in range(s - 1, min(s + 2, n))) for s in range(lo, hi + 1)}
    max_resample = cfg.max_resample or n
    by_window = cfg.tabu_attribute == "window"
    aspiration = cfg.aspiration
    tenure = cfg.tenure
    cost = ev.mask_units

    start = check_flags(initial) if initial is not None else random_initial(n, rng)
    if len(start) != n:
        raise ModelError("initial strategy length does not match the horizon")
    cur = flags_to_mask(start)
    cur_u = cost(cur)
    evaluations = 1
    best, best_u = cur, cur_u
    tabu: dict[int, int] = {}
    trace = [] if record else None
    moves = [] if record else None
    skipped = 0

    draws = rng.integers(lo, hi + 1, size=_BLOCK).tolist()
    pos = 0
    for it in range(cfg.iterations):
        for _ in range(max_resample):
            if pos == _BLOCK:
                draws = rng.integers(lo, hi + 1, size=_BLOCK).tolist()
                pos = 0
            s = draws[pos]
            pos += 1
            nb = cur ^ window[s]
            key = s if by_window else nb
            is_tabu = tabu.get(key, -1) > it
            if is_tabu and not aspiration:
                continue
            u = cost(nb)
            evaluations += 1
            if not is_tabu or u < best_u:
                break
        else:
            skipped += 1
            if record:
                trace.append(best_u)
            continue
        cur, cur_u = nb, u
        tabu[key] = it + tenure
        if u < best_u:
            best, best_u = nb, u
        if record:
            trace.append(best_u)
            moves.append(Move(it, s, is_tabu))

    return TabuResult(
        flags=mask_to_flags(best, n),
        cost=ev.to_money(best_u),
        evaluations=evaluations,
        trace=tuple(ev.to_money(u) for u in trace) if record else None,
        moves=tuple(moves) if record else None,
        skipped=skipped,
    )


@dataclass(frozen=True)
class KRecord:
    """Aggregate over ``experiments`` runs of ``k`` iterations each."""

    k: int
    experiments: int
    avg_min_cost: Decimal
    min_cost: Decimal
    max_cost: Decimal
    hit_count: int
    evaluations: int
    frequency: tuple[int, ...]

    @property
    def hit_rate(self) -> Decimal:
        return Decimal(self.hit_count) / Decimal(self.experiments)


@dataclass(frozen=True)
class ExperimentStats:
    records: tuple[KRecord, ...]
    optimum_cost: Decimal | None

    @property
    def frequency(self) -> tuple[int, ...]:
        """Order frequency per period for the largest k."""
        return max(self.records, key=lambda r: r.k).frequency

    @property
    def evaluations(self) -> int:
        return sum(r.evaluations for r in self.records)

    def record(self, k: int) -> KRecord:
        for r in self.records:
            if r.k == k:
                return r
        raise KeyError(k)


def _run_batch(args):
    req, params, cfg, k, first, last, optimum_units = args
    ev = CostEvaluator(req, params)
    cfg = replace(cfg, iterations=k)
    n = req.horizon
    total_u = 0
    lo_u = hi_u = None
    hits = 0
    evaluations = 0
    freq = [0] * n
    for e in range(first, last):
        res = tabu_search(req, params, cfg, experiment_rng(cfg.base_seed, k, e), evaluator=ev, record=False)
        u = int(res.cost.scaleb(ev.scale))
        total_u += u
        lo_u = u if lo_u is None else min(lo_u, u)
        hi_u = u if hi_u is None else max(hi_u, u)
        if optimum_units is not None and u == optimum_units:
            hits += 1
        evaluations += res.evaluations
        for p, f in enumerate(res.flags):
            freq[p] += f
    return total_u, lo_u, hi_u, hits, evaluations, freq


def _chunks(z: int, parts: int) -> list[tuple[int, int]]:
    parts = max(1, min(parts, z))
    size, extra = divmod(z, parts)
    out, lo = [], 0
    for p in range(parts):
        hi = lo + size + (1 if p < extra else 0)
        out.append((lo, hi))
        lo = hi
    return out


def run_experiments(req: Requirements, params: CostParams, k_values: Sequence[int] = PAPER_ITERATIONS,
                    experiments: int = 1000, base_seed: int = 0, cfg: TabuConfig | None = None,
                    optimum_cost: Decimal | None = None, workers: int = 1) -> ExperimentStats:
    """Run ``experiments`` independent searches for every k in ``k_values``.

    ``optimum_cost`` is the reference for hit counting; when omitted and the
    horizon is at most 20 it is computed by exhaustive enumeration.
    """
    cfg = replace(cfg or TabuConfig(), experiments=experiments, base_seed=base_seed)
    if req.horizon < 4:
        raise InstanceTooSmallError(f"tabu search needs at least 4 periods, got {req.horizon}")
    if optimum_cost is None and req.horizon <= 20:
        from .enumerator import exhaustive_optimize

        optimum_cost = exhaustive_optimize(req, params).breakdown.total
    ev = CostEvaluator(req, params)
    optimum_units = int(optimum_cost.scaleb(ev.scale)) if optimum_cost is not None else None

    records = []
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    try:
        for k in k_values:
            jobs = [(req, params, cfg, k, lo, hi, optimum_units) for lo, hi in _chunks(experiments, workers)]
            parts = list(pool.map(_run_batch, jobs)) if pool else [_run_batch(jobs[0])]
            total_u = sum(p[0] for p in parts)
            freq = [sum(col) for col in zip(*(p[5] for p in parts))]
            records.append(KRecord(
                k=k,
                experiments=experiments,
                avg_min_cost=ev.to_money(total_u) / experiments,
                min_cost=ev.to_money(min(p[1] for p in parts)),
                max_cost=ev.to_money(max(p[2] for p in parts)),
                hit_count=sum(p[3] for p in parts),
                evaluations=sum(p[4] for p in parts),
                frequency=tuple(freq),
            ))
    finally:
        if pool:
            pool.shutdown()
    return ExperimentStats(tuple(records), optimum_cost)
