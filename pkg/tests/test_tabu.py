from dataclasses import replace
from decimal import Decimal

import numpy as np
import pytest

from lotforge import instances as ref
from lotforge.enumerator import exhaustive_optimize
from lotforge.model import CostEvaluator, CostParams, DiscountSchedule, ModelError, Requirements
from lotforge.tabu import (
    InstanceTooSmallError,
    TabuConfig,
    experiment_rng,
    neighbor_move,
    random_initial,
    run_experiments,
    tabu_search,
)

OPT = ref.TWELVE_PERIOD_BEST_COST


class CountingEvaluator(CostEvaluator):
    def __init__(self, *args):
        super().__init__(*args)
        self.calls = 0
        self.seen = []

    def mask_units(self, mask):
        self.calls += 1
        self.seen.append(mask)
        return super().mask_units(mask)


class TestMoves:
    def test_random_initial(self):
        assert random_initial(1, np.random.default_rng(0)) == (1,)
        assert random_initial(12, experiment_rng(42, 0, 0)) == (1, 0, 1, 0, 0, 0, 1, 0, 0, 0, 0, 0)
        assert random_initial(12, np.random.default_rng(123)) == (1, 0, 1, 1, 0, 1, 0, 0, 0, 0, 0, 0)

    def test_random_initial_is_uniform(self):
        rng = np.random.default_rng(99)
        draws = np.array([random_initial(12, rng) for _ in range(10000)])
        assert (draws[:, 0] == 1).all()
        ones = draws[:, 1:].sum(axis=0)
        assert ((ones >= 4800) & (ones <= 5200)).all()

    def test_neighbor_move(self):
        assert neighbor_move((1, 1, 1, 1), 2) == (1, 0, 0, 0)
        b = (1, 0, 0, 1, 0, 1, 0, 0, 0, 0, 1, 0)
        assert neighbor_move(b, 2) == (1, 1, 1, 0, 0, 1, 0, 0, 0, 0, 1, 0)
        for s in range(2, 11):
            assert neighbor_move(neighbor_move(b, s), s) == b

    def test_neighbor_move_range(self):
        b = (1, 0, 1, 0, 1)
        for s in (1, 4, 5):
            with pytest.raises(ModelError):
                neighbor_move(b, s)
        assert neighbor_move(b, 4, clip=True) == (1, 0, 1, 1, 0)
        assert neighbor_move(b, 5, clip=True) == (1, 0, 1, 0, 0)
        with pytest.raises(ModelError):
            neighbor_move(b, 6, clip=True)
        with pytest.raises(ModelError):
            neighbor_move(b, 1, clip=True)

    def test_config_validation(self):
        for kwargs in ({"tenure": -1}, {"iterations": 0}, {"experiments": 0}, {"window_width": 4},
                       {"tabu_attribute": "hash"}, {"max_resample": 0}):
            with pytest.raises(ModelError):
                TabuConfig(**kwargs)


def _strict_reachable(n, start):
    seen = {start}
    frontier = [start]
    while frontier:
        b = frontier.pop()
        for s in range(2, n - 1):
            nb = neighbor_move(b, s)
            if nb not in seen:
                seen.add(nb)
                frontier.append(nb)
    return seen


def test_strict_windows_reach_a_quarter_of_the_space():
    # the reason edge windows are on by default
    cosets = []
    remaining = {(1,) + tuple(int(b) for b in format(v, "011b")) for v in range(2 ** 11)}
    while remaining:
        reach = _strict_reachable(12, min(remaining))
        assert len(reach) == 2 ** 9
        remaining -= reach
        cosets.append(reach)
    assert len(cosets) == 4


class TestSearch:
    def test_too_small(self):
        p = ref.THREE_PERIOD_PARAMS
        with pytest.raises(InstanceTooSmallError):
            tabu_search(ref.THREE_PERIOD, p, TabuConfig(), np.random.default_rng(0))

    @pytest.mark.parametrize("seed", range(6))
    def test_trace_and_bounds(self, twelve, seed):
        r, p = twelve
        res = tabu_search(r, p, TabuConfig(iterations=300), experiment_rng(seed, 300, 0))
        assert len(res.trace) == 300
        assert all(a >= b for a, b in zip(res.trace, res.trace[1:]))
        assert res.trace[-1] == res.cost
        assert res.cost >= OPT
        assert res.flags[0] == 1
        assert CostEvaluator(r, p).to_money(CostEvaluator(r, p).mask_units(
            sum(1 << i for i, f in enumerate(res.flags) if f))) == res.cost

    def test_evaluation_accounting(self, twelve):
        r, p = twelve
        for cfg in (TabuConfig(iterations=500), TabuConfig(iterations=500, aspiration=False),
                    TabuConfig(iterations=500, tabu_attribute="solution")):
            ev = CountingEvaluator(r, p)
            res = tabu_search(r, p, cfg, experiment_rng(1, 500, 3), evaluator=ev)
            assert res.evaluations == ev.calls
            assert all(m & 1 for m in ev.seen)

    @pytest.mark.parametrize("tenure", [0, 1, 5, 8])
    def test_tabu_discipline(self, twelve, tenure):
        r, p = twelve
        res = tabu_search(r, p, TabuConfig(iterations=2000, tenure=tenure), experiment_rng(5, 2000, tenure))
        last = {}
        for mv in res.moves:
            if mv.start in last and mv.iteration < last[mv.start] + tenure:
                assert mv.aspiration
            else:
                assert not mv.aspiration
            last[mv.start] = mv.iteration

    def test_no_aspiration_never_takes_tabu_moves(self, twelve):
        r, p = twelve
        res = tabu_search(r, p, TabuConfig(iterations=2000, aspiration=False), experiment_rng(5, 2000, 0))
        assert not any(m.aspiration for m in res.moves)

    def test_skips_when_everything_is_tabu(self):
        # N=4 with strict windows has a single move; after taking it the window stays tabu
        r = Requirements((5, 5, 5, 5))
        p = CostParams(Decimal(10), Decimal(1), Decimal(0), DiscountSchedule.flat(1), 3)
        cfg = TabuConfig(iterations=6, tenure=3, edge_windows=False, aspiration=False)
        res = tabu_search(r, p, cfg, np.random.default_rng(0), initial=(1, 0, 0, 0))
        assert [m.iteration for m in res.moves] == [0, 3]
        assert res.skipped == 4

    def test_determinism(self, twelve):
        r, p = twelve
        cfg = TabuConfig(iterations=1000)
        a = tabu_search(r, p, cfg, experiment_rng(11, 1000, 7))
        b = tabu_search(r, p, cfg, experiment_rng(11, 1000, 7))
        assert a == b
        c = tabu_search(r, p, cfg, experiment_rng(12, 1000, 7))
        assert c.trace != a.trace or c.moves != a.moves

    def test_long_runs_find_optimum(self, twelve):
        r, p = twelve
        hits = sum(
            tabu_search(r, p, TabuConfig(iterations=10000), experiment_rng(3, 10000, e), record=False).cost == OPT
            for e in range(20)
        )
        assert hits >= 17

    def test_strict_windows_still_valid(self, twelve):
        r, p = twelve
        res = tabu_search(r, p, TabuConfig(iterations=2000, edge_windows=False), experiment_rng(0, 1, 1))
        assert res.cost >= OPT
        assert {m.start for m in res.moves} <= set(range(2, 11))


@pytest.mark.parametrize("n", [4, 6, 9])
def test_best_never_beats_exhaustive(n):
    rng = np.random.default_rng(n)
    r = Requirements(tuple(int(x) for x in rng.integers(0, 50, size=n)))
    p = CostParams(Decimal(80), Decimal("1.5"), Decimal(6), DiscountSchedule(((0, 5), (40, "4.25"))), 2)
    opt = exhaustive_optimize(r, p).breakdown.total
    for e in range(10):
        assert tabu_search(r, p, TabuConfig(iterations=200), experiment_rng(0, 200, e)).cost >= opt


class TestExperiments:
    def test_small_harness(self, twelve):
        r, p = twelve
        stats = run_experiments(r, p, [10, 200], experiments=30, base_seed=4)
        assert stats.optimum_cost == OPT
        for rec in stats.records:
            assert rec.frequency[0] == 30
            assert all(f <= 30 for f in rec.frequency)
            assert rec.min_cost >= OPT
            assert rec.min_cost <= rec.avg_min_cost <= rec.max_cost
            assert 0 <= rec.hit_count <= 30
        assert stats.frequency == stats.record(200).frequency
        assert stats.evaluations == sum(r.evaluations for r in stats.records)

    def test_harness_deterministic_and_worker_independent(self, twelve):
        r, p = twelve
        a = run_experiments(r, p, [50], experiments=12, base_seed=9)
        assert a == run_experiments(r, p, [50], experiments=12, base_seed=9)
        assert a == run_experiments(r, p, [50], experiments=12, base_seed=9, workers=3)

    def test_harness_uses_config(self, twelve):
        r, p = twelve
        base = run_experiments(r, p, [50], experiments=5, base_seed=1)
        other = run_experiments(r, p, [50], experiments=5, base_seed=1, cfg=replace(TabuConfig(), tenure=0))
        assert base != other
