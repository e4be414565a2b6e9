"""Exhaustive ground-truth solver for small instances.

Deliberately dumb: direct enumeration of all permutations with a literal
both-edges-selected conflict test. Everything else in the package is judged
against this module, so it shares no solver code with anything.
"""

import itertools
import time

from .errors import InstanceTooLargeError
from .instance import Instance
from .solution import Solution, SolveStatus

BRUTE_FORCE_MAX_N = 10
ENUMERATE_MAX_N = 8


def _conflict_rows(inst: Instance) -> tuple[tuple[int, int, int, int], ...]:
    return tuple(
        (p.e1.a, p.e1.b, p.e2.a, p.e2.b) for p in sorted(inst.conflicts)
    )


def brute_force(inst: Instance) -> Solution:
    """Optimal solution by enumerating every permutation in lexicographic order.

    Returns the first permutation attaining the minimum conflict-feasible
    cost, or an Infeasible solution when every permutation violates some
    conflict. Guarded to n <= 10.
    """
    if inst.n > BRUTE_FORCE_MAX_N:
        raise InstanceTooLargeError(
            f"brute force is guarded to n <= {BRUTE_FORCE_MAX_N}, got n = {inst.n}"
        )
    start = time.perf_counter()
    conflicts = _conflict_rows(inst)
    costs = inst.costs
    best_perm = None
    best_value = None
    count = 0
    for perm in itertools.permutations(range(inst.n)):
        count += 1
        feasible = True
        for a1, b1, a2, b2 in conflicts:
            if perm[a1] == b1 and perm[a2] == b2:
                feasible = False
                break
        if not feasible:
            continue
        value = 0
        for i, j in enumerate(perm):
            value += costs[i][j]
        if best_value is None or value < best_value:
            best_perm = perm
            best_value = value
    elapsed = time.perf_counter() - start
    if best_perm is None:
        return Solution(
            assignment=None,
            value=None,
            status=SolveStatus.INFEASIBLE,
            sec_best=elapsed,
            sec_total=elapsed,
            nodes=count,
        )
    return Solution(
        assignment=best_perm,
        value=best_value,
        status=SolveStatus.OPTIMAL,
        sec_best=elapsed,
        sec_total=elapsed,
        nodes=count,
        lower_bound=best_value,
    )


def enumerate_feasible(inst: Instance) -> list[tuple[tuple[int, ...], int]]:
    """All conflict-feasible permutations with their values, lexicographic.

    Guarded to n <= 8. The brute-force answer equals the minimum of this list,
    and an empty list means the instance is infeasible.
    """
    if inst.n > ENUMERATE_MAX_N:
        raise InstanceTooLargeError(
            f"enumeration is guarded to n <= {ENUMERATE_MAX_N}, got n = {inst.n}"
        )
    conflicts = _conflict_rows(inst)
    costs = inst.costs
    out: list[tuple[tuple[int, ...], int]] = []
    for perm in itertools.permutations(range(inst.n)):
        feasible = True
        for a1, b1, a2, b2 in conflicts:
            if perm[a1] == b1 and perm[a2] == b2:
                feasible = False
                break
        if feasible:
            out.append((perm, sum(costs[i][j] for i, j in enumerate(perm))))
    return out
