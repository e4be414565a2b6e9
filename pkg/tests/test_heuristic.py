"""Greedy construction, local search and the gap formula."""

import pytest

from apc.errors import InfeasibleStartError, NonpositiveOptError
from apc.heuristic import (
    LSConfig,
    construct_greedy,
    gap_percent,
    local_search,
    run_heuristic,
)
from apc.instance import ConflictPair, Edge, Instance, generate_instance
from apc.model import check_feasible
from apc.oracle import brute_force
from apc.solution import Solution, SolveStatus

DIAG = Instance.from_costs([[1, 10], [10, 1]], [((0, 0), (1, 1))])
BOTH_BLOCKED = Instance.from_costs(
    [[1, 10], [10, 1]], [((0, 0), (1, 1)), ((0, 1), (1, 0))]
)


def feasible_solution(inst, assignment):
    from apc.model import evaluate

    return Solution(
        assignment=tuple(assignment),
        value=evaluate(inst, assignment),
        status=SolveStatus.FEASIBLE,
    )


def test_greedy_without_conflicts_hits_cheap_diagonal():
    inst = Instance.from_costs([[1, 10], [10, 1]])
    sol = construct_greedy(inst, rng_seed=0)
    assert sol.assignment == (0, 1)
    assert sol.value == 2


def test_greedy_respects_conflicts():
    # the only feasible matching is the expensive anti-diagonal
    sol = construct_greedy(DIAG, rng_seed=0)
    assert sol is not None
    assert sol.value == 20
    assert check_feasible(DIAG, sol.assignment).feasible


def test_greedy_gives_up_when_nothing_is_feasible():
    for seed in range(6):
        assert construct_greedy(BOTH_BLOCKED, rng_seed=seed) is None


def test_greedy_feasibility_sweep():
    for seed in range(40):
        inst = generate_instance(6, 80, 1, 60, seed=seed)
        sol = construct_greedy(inst, rng_seed=seed)
        if sol is not None:
            assert check_feasible(inst, sol.assignment).feasible
            assert sol.status is SolveStatus.FEASIBLE


def test_greedy_is_deterministic():
    inst = generate_instance(7, 150, 1, 90, seed=5)
    a = construct_greedy(inst, rng_seed=17)
    b = construct_greedy(inst, rng_seed=17)
    assert a.assignment == b.assignment


def test_local_search_fixpoint_is_returned_unchanged():
    inst = Instance.from_costs([[1, 10], [10, 1]])
    start = feasible_solution(inst, [0, 1])  # already optimal
    out = local_search(inst, start, LSConfig())
    assert out.assignment == (0, 1)
    assert out.value == start.value


def test_local_search_single_swap_reaches_optimum():
    inst = Instance.from_costs([[1, 10], [10, 1]])
    start = feasible_solution(inst, [1, 0])  # value 20
    out = local_search(inst, start, LSConfig())
    assert out.assignment == (0, 1)
    assert out.value == 2


def test_local_search_rejects_infeasible_start():
    bad = feasible_solution(DIAG, [0, 1])  # violates the conflict
    with pytest.raises(InfeasibleStartError):
        local_search(DIAG, bad, LSConfig())


def test_local_search_never_worse_and_stays_feasible():
    for seed in range(25):
        inst = generate_instance(6, 60, 1, 70, seed=100 + seed)
        start = construct_greedy(inst, rng_seed=seed)
        if start is None:
            continue
        out = local_search(inst, start, LSConfig())
        assert out.value <= start.value
        assert check_feasible(inst, out.assignment).feasible


def test_heuristic_never_beats_the_oracle():
    gaps = []
    for seed in range(20):
        inst = generate_instance(6, 40, 1, 80, seed=300 + seed)
        opt = brute_force(inst)
        sol = run_heuristic(inst, LSConfig(restarts=3, rng_seed=seed))
        if opt.status is SolveStatus.INFEASIBLE:
            assert sol is None or check_feasible(inst, sol.assignment).feasible
            continue
        if sol is not None:
            assert sol.value >= opt.value
            gaps.append(gap_percent(sol.value, opt.value))
    assert gaps and all(g >= 0 for g in gaps)


def test_run_heuristic_is_deterministic():
    inst = generate_instance(8, 200, 1, 90, seed=8)
    cfg = LSConfig(restarts=4, rng_seed=99)
    a = run_heuristic(inst, cfg)
    b = run_heuristic(inst, cfg)
    assert a.assignment == b.assignment and a.value == b.value


def test_restart_dominance():
    inst = generate_instance(8, 150, 1, 90, seed=15)
    values = []
    for k in range(1, 6):
        sol = run_heuristic(inst, LSConfig(restarts=k, rng_seed=7))
        values.append(sol.value)
    assert values == sorted(values, reverse=True) or all(
        values[i] >= values[i + 1] for i in range(len(values) - 1)
    )


def test_gap_percent():
    assert gap_percent(110, 100) == pytest.approx(10.0)
    assert gap_percent(137, 137) == 0.0
    assert gap_percent(90, 100) == pytest.approx(-10.0)  # upstream bug signal
    with pytest.raises(NonpositiveOptError):
        gap_percent(5, 0)


def test_lsconfig_rejects_bad_limits():
    with pytest.raises(ValueError):
        LSConfig(max_passes=0)
    with pytest.raises(ValueError):
        LSConfig(time_limit=0)
    with pytest.raises(ValueError):
        LSConfig(restarts=0)


def test_greedy_repair_can_recover():
    # whichever row goes first grabs its cheap column, which blocks the other
    # row's only conflict-free choice; repair must still find the one feasible
    # matching from every processing order
    conflicts = {ConflictPair(Edge(0, 0), Edge(1, 1))}
    inst = Instance.from_costs([[1, 50], [50, 1]], conflicts)
    for seed in range(10):
        sol = construct_greedy(inst, rng_seed=seed)
        assert sol is not None
        assert sol.assignment == (1, 0)
        assert sol.value == 100
