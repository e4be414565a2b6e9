"""Proven-optimal solving by branch-and-bound on the conflict-free relaxation.

Every node solves the assignment problem under its edge masks as the lower
bound. Best-first node selection means the first conflict-feasible relaxation
popped is globally optimal. The search splits on a violated conflict pair
into two disjoint children: one child forbids the first edge, the other
commits to it, which forbids the partner edge of every conflict the committed
edge appears in. Only solutions violating the branched pair are dropped, and
those are infeasible anyway.
"""

import heapq
import itertools
import time
from dataclasses import dataclass, replace

from .errors import NotAPermutationError
from .heuristic import LSConfig, run_heuristic
from .hungarian import MaskedCosts, solve_ap
from .instance import ConflictPair, Edge, Instance
from .model import check_feasible, evaluate
from .solution import Solution, SolveStatus


@dataclass(frozen=True)
class SearchNode:
    """Branch-and-bound node: edge masks plus the bound proven so far.

    The bound is inherited from the parent on creation and refined by the
    solver once the node's own relaxation is solved, so it never decreases
    from parent to child.
    """

    forbidden: frozenset
    forced: frozenset
    bound: int
    depth: int


def find_violated_conflict(assignment, inst: Instance) -> ConflictPair | None:
    """The conflict pair worth branching on, or None if none is violated.

    Among pairs with both edges selected by the assignment, picks the one
    with the largest combined edge cost, breaking ties by canonical order.
    Returns None exactly when the feasibility checker reports no violated
    conflicts.
    """
    n = inst.n
    if len(assignment) != n or sorted(assignment) != list(range(n)):
        raise NotAPermutationError(
            f"assignment {list(assignment)!r} is not a permutation of 0..{n - 1}"
        )
    costs = inst.costs
    best_pair = None
    best_cost = -1
    for pair in inst.conflicts:
        e1, e2 = pair.e1, pair.e2
        if assignment[e1.a] == e1.b and assignment[e2.a] == e2.b:
            combined = costs[e1.a][e1.b] + costs[e2.a][e2.b]
            if combined > best_cost or (
                combined == best_cost and pair < best_pair
            ):
                best_pair = pair
                best_cost = combined
    return best_pair


def branch(node: SearchNode, pair: ConflictPair) -> tuple[SearchNode, SearchNode]:
    """Split a node on a violated conflict: forbid e1 in one child, e2 in the
    other.

    Only solutions using both edges are dropped, and those are infeasible
    anyway, so no feasible solution is lost. Caller contract: both edges are
    used by the node's relaxation solution.
    """
    assert pair.e1 not in node.forbidden and pair.e2 not in node.forbidden
    child1 = SearchNode(
        forbidden=node.forbidden | {pair.e1},
        forced=node.forced,
        bound=node.bound,
        depth=node.depth + 1,
    )
    child2 = SearchNode(
        forbidden=node.forbidden | {pair.e2},
        forced=node.forced,
        bound=node.bound,
        depth=node.depth + 1,
    )
    return child1, child2


def _conflict_adjacency(inst: Instance) -> dict[Edge, tuple[Edge, ...]]:
    adj: dict[Edge, list[Edge]] = {}
    for pair in inst.conflicts:
        adj.setdefault(pair.e1, []).append(pair.e2)
        adj.setdefault(pair.e2, []).append(pair.e1)
    return {e: tuple(partners) for e, partners in adj.items()}


def _commit_edge(node: SearchNode, edge: Edge, adjacency) -> SearchNode | None:
    """Child that commits to `edge`: force it and forbid all its conflict
    partners. None when the commitment contradicts the node's masks."""
    partners = adjacency.get(edge, ())
    forced = node.forced
    if edge in node.forbidden or any(p in forced for p in partners):
        return None
    for f in forced:
        if f.a == edge.a or f.b == edge.b:
            return None
    return SearchNode(
        forbidden=node.forbidden | set(partners),
        forced=forced | {edge},
        bound=node.bound,
        depth=node.depth + 1,
    )


def solve_exact(
    inst: Instance,
    *,
    time_limit: float = 3600.0,
    node_limit: int | None = None,
    initial_incumbent: Solution | None = None,
    seed_incumbent: bool = True,
    heuristic_seed: int = 0,
) -> Solution:
    """Prove the optimal value (or infeasibility) by branch-and-bound.

    Node selection is best-first on the relaxation bound, tie-broken by depth
    (deeper first) then insertion order, so runs are deterministic whenever no
    limit triggers. With `seed_incumbent` the root incumbent comes from a
    short greedy+descent run. Statuses: Optimal / Infeasible when the search
    completes, TimeLimit / Feasible (node limit) with the best incumbent and
    the best open bound otherwise.
    """
    if time_limit <= 0:
        raise ValueError(f"time_limit must be positive, got {time_limit}")
    start = time.perf_counter()
    deadline = start + time_limit

    inc_assignment: tuple[int, ...] | None = None
    inc_value: int | None = None
    sec_best = 0.0

    def consider(assignment, value: int) -> None:
        nonlocal inc_assignment, inc_value, sec_best
        if inc_value is None or value < inc_value:
            inc_assignment = tuple(assignment)
            inc_value = value
            sec_best = time.perf_counter() - start

    if initial_incumbent is not None:
        if initial_incumbent.assignment is None or not check_feasible(
            inst, initial_incumbent.assignment
        ).feasible:
            raise ValueError("initial incumbent is not conflict-feasible")
        consider(
            initial_incumbent.assignment,
            evaluate(inst, initial_incumbent.assignment),
        )
    elif seed_incumbent and inst.conflicts:
        budget = max(0.05, min(1.0, 0.05 * time_limit))
        seeded = run_heuristic(
            inst,
            LSConfig(
                max_passes=200, time_limit=budget, restarts=2, rng_seed=heuristic_seed
            ),
        )
        if seeded is not None:
            consider(seeded.assignment, seeded.value)

    adjacency = _conflict_adjacency(inst)
    nodes = 0
    tiebreak = itertools.count()
    heap: list[tuple] = []
    root_res = solve_ap(MaskedCosts(inst.costs))
    if root_res is not None:
        root_assignment, root_value = root_res
        root = SearchNode(frozenset(), frozenset(), root_value, 0)
        heapq.heappush(heap, (root_value, 0, next(tiebreak), root, root_assignment))

    status = None
    open_bound: int | None = None
    while heap:
        if node_limit is not None and nodes >= node_limit:
            status = SolveStatus.FEASIBLE
            open_bound = heap[0][0]
            break
        if time.perf_counter() > deadline:
            status = SolveStatus.TIME_LIMIT
            open_bound = heap[0][0]
            break
        bound, _, _, node, relaxed = heapq.heappop(heap)
        nodes += 1
        if inc_value is not None and bound >= inc_value:
            # Best-first: every open node is at least this bound, so the
            # incumbent is proven optimal.
            status = SolveStatus.OPTIMAL
            open_bound = inc_value
            break
        pair = find_violated_conflict(relaxed, inst)
        if pair is None:
            consider(relaxed, bound)
            status = SolveStatus.OPTIMAL
            open_bound = inc_value
            break
        # Disjoint dichotomy on the violated pair: drop e1 entirely, or
        # commit to e1 (which excludes every edge it conflicts with, e2
        # included). Committing prunes far harder than a second forbid on
        # dense conflict sets.
        avoid = SearchNode(
            forbidden=node.forbidden | {pair.e1},
            forced=node.forced,
            bound=bound,
            depth=node.depth + 1,
        )
        commit = _commit_edge(replace(node, bound=bound), pair.e1, adjacency)
        for child in (avoid, commit):
            if child is None:
                continue
            res = solve_ap(MaskedCosts(inst.costs, child.forbidden, child.forced))
            if res is None:
                continue
            child_assignment, child_value = res
            assert child_value >= bound
            if inc_value is not None and child_value >= inc_value:
                continue
            heapq.heappush(
                heap,
                (
                    child_value,
                    -child.depth,
                    next(tiebreak),
                    replace(child, bound=child_value),
                    child_assignment,
                ),
            )
    else:
        if inc_value is None:
            status = SolveStatus.INFEASIBLE
        else:
            status = SolveStatus.OPTIMAL
            open_bound = inc_value

    sec_total = time.perf_counter() - start
    if status in (SolveStatus.TIME_LIMIT, SolveStatus.FEASIBLE) and inc_value is not None:
        open_bound = min(open_bound, inc_value)
    return Solution(
        assignment=inc_assignment,
        value=inc_value,
        status=status,
        sec_best=min(sec_best, sec_total),
        sec_total=sec_total,
        nodes=nodes,
        lower_bound=open_bound,
    )
