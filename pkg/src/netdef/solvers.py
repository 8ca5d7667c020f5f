"""Defending algorithms.

Each solver returns a :class:`SolveReport` whose ``alpha`` is the result
level it claims and whose ``evaluated_result`` comes from
:func:`netdef.model.defending_result` on the returned strategy.

* :func:`solve_single_threshold` - exact when ``LB == UB`` everywhere
  (feasibility LP + binary search over the result space).
* :func:`solve_isolated` - exact when every edge weight is 0 (min cut).
* :func:`solve_approx` - general case; ``alpha`` is at most the optimum
  with half the budget (LP relaxation + doubling).
* :func:`solve_greedy` - keep defending the currently most profitable target.
* :func:`solve_exact_bruteforce` - exponential oracle over crucial subsets.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable

from netdef import lp as lpmod
from netdef import maxflow as mf
from netdef.errors import ModelMismatch, RoundingInfeasible, SizeLimit
from netdef.model import (
    TOL,
    DefenseNetwork,
    DefendingStrategy,
    crucial_set,
    defending_result,
    result_space,
    vulnerable_set,
)

RESULT_TOL = 1e-6


@dataclass
class SolveReport:
    algorithm: str
    alpha: float
    strategy: DefendingStrategy
    evaluated_result: float
    budget_used: float
    notes: str = ""
    certificate: dict = field(default_factory=dict)


@dataclass
class Verdict:
    """Outcome of testing one target level ``alpha``."""

    achievable: bool
    strategy: DefendingStrategy | None = None
    detail: dict = field(default_factory=dict)


def _report(net: DefenseNetwork, algorithm: str, alpha: float, strategy: DefendingStrategy,
            notes: str = "", certificate: dict | None = None) -> SolveReport:
    evaluated = defending_result(net, strategy).result
    return SolveReport(algorithm, alpha, strategy, evaluated, strategy.total(), notes,
                       certificate or {})


def min_achievable(space: list[float], achievable: Callable[[float], Verdict]) -> tuple[float, Verdict]:
    """Binary search for the smallest value in ``space`` that is achievable.

    Assumes achievability is monotone and that ``space[-1]`` is achievable.
    """
    lo, hi = 0, len(space) - 1
    best = achievable(space[hi])
    if not best.achievable:
        raise RuntimeError(f"largest result level {space[hi]} not achievable")
    while lo < hi:
        mid = (lo + hi) // 2
        verdict = achievable(space[mid])
        if verdict.achievable:
            hi, best = mid, verdict
        else:
            lo = mid + 1
    return space[hi], best


def _fill_leftover(net: DefenseNetwork, alloc: dict[str, float]) -> dict[str, float]:
    left = net.resource - math.fsum(alloc.values())
    if left > 0 and net.nodes:
        first = min(net.ids)
        alloc[first] = alloc.get(first, 0.0) + left
    return alloc


def _power_terms(net: DefenseNetwork, i: int) -> list[tuple[int, float]]:
    """LP terms for the defending power of node ``i`` over the r variables."""
    terms = [(i, 1.0)]
    for j, w in net.adjacency[i]:
        if w != 0.0:
            terms.append((j, w))
    return terms


def _budget_row(lp: lpmod.LinearProgram, n: int, budget: float) -> None:
    lp.add([(j, 1.0) for j in range(n)], "<=", budget)


# --- single threshold ------------------------------------------------------

def _require_single_threshold(net: DefenseNetwork) -> None:
    bad = [nd.id for nd in net.nodes if abs(nd.ub - nd.lb) > TOL]
    if bad:
        raise ModelMismatch(f"single-threshold solver needs lb == ub; violated at {bad[:5]}")


def achievable_single_threshold(net: DefenseNetwork, alpha: float, fill: bool = False) -> Verdict:
    """Can every node with ``g > alpha`` reach its threshold within budget?"""
    _require_single_threshold(net)
    need = [i for i, nd in enumerate(net.nodes) if nd.g > alpha]
    if not need:
        alloc = _fill_leftover(net, {}) if fill else {}
        return Verdict(True, DefendingStrategy(alloc), {"lp": None})
    prog = lpmod.LinearProgram(net.n)
    _budget_row(prog, net.n, net.resource)
    for i in need:
        prog.add(_power_terms(net, i), ">=", net.nodes[i].lb)
    sol = lpmod.solve_lp(prog)
    if not sol.feasible:
        return Verdict(False, None, {"lp": sol.status})
    strategy = DefendingStrategy.from_vector(net, sol.values)
    if fill:
        strategy = DefendingStrategy(_fill_leftover(net, dict(strategy.allocation)))
    return Verdict(True, strategy, {"lp": sol.status})


def solve_single_threshold(net: DefenseNetwork) -> SolveReport:
    _require_single_threshold(net)
    alpha, verdict = min_achievable(result_space(net),
                                    lambda a: achievable_single_threshold(net, a))
    return _report(net, "single-threshold", alpha, verdict.strategy, "exact")


# --- isolated model --------------------------------------------------------

def _require_isolated(net: DefenseNetwork) -> None:
    bad = [(e.u, e.v) for e in net.edges if abs(e.w) > TOL]
    if bad:
        raise ModelMismatch(f"isolated solver needs w == 0 on every edge; violated at {bad[:5]}")


@dataclass
class IsolatedFlow:
    network: mf.FlowNetwork
    in_index: dict[str, int]
    out_index: dict[str, int]
    crucial: frozenset[str]
    vulnerable: frozenset[str]


def build_isolated_flow_network(net: DefenseNetwork, alpha: float) -> IsolatedFlow:
    """Flow network whose min cut prices the cheapest choice of upgraded nodes.

    Crucial nodes hang off the source through an ``UB - LB`` arc, safe nodes
    feed the sink through an ``LB`` arc, and each crucial-safe edge becomes
    an infinite arc between them.
    """
    _require_isolated(net)
    A = vulnerable_set(net, alpha)
    B = crucial_set(net, alpha)
    fn = mf.FlowNetwork(2, 0, 1)
    in_index: dict[str, int] = {}
    out_index: dict[str, int] = {}

    def pair(u):
        in_index[u] = fn.num_nodes
        out_index[u] = fn.num_nodes + 1
        fn.num_nodes += 2

    for nd in net.nodes:
        if nd.id in B:
            pair(nd.id)
            fn.add_arc(fn.source, in_index[nd.id], mf.INFINITE)
            fn.add_arc(in_index[nd.id], out_index[nd.id], nd.ub - nd.lb)
        elif nd.id not in A:
            pair(nd.id)
            fn.add_arc(in_index[nd.id], out_index[nd.id], nd.lb)
            fn.add_arc(out_index[nd.id], fn.sink, mf.INFINITE)
    for e in net.edges:
        for u, v in ((e.u, e.v), (e.v, e.u)):
            if u in B and v not in A and v in net.index:
                fn.add_arc(out_index[u], in_index[v], mf.INFINITE)
    return IsolatedFlow(fn, in_index, out_index, B, A)


def achievable_isolated(net: DefenseNetwork, alpha: float, fill: bool = False) -> Verdict:
    """Min-cut achievability test for the isolated model."""
    _require_isolated(net)
    A = vulnerable_set(net, alpha)
    base = math.fsum(net.by_id[u].lb for u in A)
    if base > net.resource + TOL:
        return Verdict(False, None, {"base": base, "extra": None})
    flow = build_isolated_flow_network(net, alpha)
    fr = mf.max_flow(flow.network)
    extra = fr.value
    detail = {"base": base, "extra": extra}
    if base + extra > net.resource + TOL:
        return Verdict(False, None, detail)

    alloc = {u: net.by_id[u].lb for u in A}
    saved = []
    for u in flow.crucial:
        if flow.out_index[u] in fr.source_side:
            saved.append(u)
        else:
            alloc[u] = net.by_id[u].ub
    for u in saved:
        for v in net.neighbors(u):
            if v not in A:
                alloc[v] = net.by_id[v].lb
    alloc = {u: r for u, r in alloc.items() if r > 0.0}
    if fill:
        _fill_leftover(net, alloc)
    return Verdict(True, DefendingStrategy(dict(sorted(alloc.items()))), detail)


def solve_isolated(net: DefenseNetwork) -> SolveReport:
    _require_isolated(net)
    alpha, verdict = min_achievable(result_space(net), lambda a: achievable_isolated(net, a))
    return _report(net, "isolated", alpha, verdict.strategy, "exact", verdict.detail)


# --- LP relaxation and rounding -------------------------------------------

@dataclass
class RelaxationLayout:
    """Where each quantity lives in the relaxation's variable vector."""

    r: dict[str, int]
    y: dict[str, int]
    vulnerable: frozenset[str]
    crucial: frozenset[str]
    covering_pairs: list[tuple[str, str]]


def build_relaxation_lp(net: DefenseNetwork, alpha: float,
                        budget: float) -> tuple[lpmod.LinearProgram, RelaxationLayout]:
    """Fractional version of "pick the nodes that get their upper threshold".

    Variables are the allocations ``r`` (one per node) followed by ``y`` in
    [0, 1] for every crucial node (1 = reaches UB) and every non-vulnerable
    node (1 = reaches LB). Each crucial/non-vulnerable edge must be covered
    by ``y_u + y_v >= 1``.
    """
    A = vulnerable_set(net, alpha)
    B = crucial_set(net, alpha)
    n = net.n
    r_idx = {nd.id: i for i, nd in enumerate(net.nodes)}
    y_idx: dict[str, int] = {}
    for nd in net.nodes:
        if nd.id in B or nd.id not in A:
            y_idx[nd.id] = n + len(y_idx)
    nvars = n + len(y_idx)
    lower = [0.0] * nvars
    upper: list[float | None] = [None] * n + [1.0] * len(y_idx)
    prog = lpmod.LinearProgram(nvars, lower_bounds=lower, upper_bounds=upper)

    pairs = []
    for e in net.edges:
        for u, v in ((e.u, e.v), (e.v, e.u)):
            if u in B and v not in A:
                pairs.append((u, v))
                prog.add([(y_idx[u], 1.0), (y_idx[v], 1.0)], ">=", 1.0)
    for i, nd in enumerate(net.nodes):
        power = _power_terms(net, i)
        if nd.id in B:
            prog.add(power + [(y_idx[nd.id], -(nd.ub - nd.lb))], ">=", nd.lb)
        elif nd.id in A:
            prog.add(power, ">=", nd.lb)
        elif nd.lb > 0.0:
            prog.add(power + [(y_idx[nd.id], -nd.lb)], ">=", 0.0)
    _budget_row(prog, n, budget)
    return prog, RelaxationLayout(r_idx, y_idx, A, B, pairs)


def round_solution(net: DefenseNetwork, alpha: float, lp_values,
                   layout: RelaxationLayout | None = None) -> DefendingStrategy:
    """Double the fractional allocation.

    Every ``y >= 1/2`` is rounded up; doubling the powers then clears the
    thresholds those rounded indicators promise, and each covering pair has
    at least one member rounded up.
    """
    strategy = DefendingStrategy.from_vector(net, [2.0 * x for x in lp_values[:net.n]])
    result = defending_result(net, strategy).result
    if result > alpha + RESULT_TOL:
        raise RoundingInfeasible(f"rounded strategy has result {result}, above target {alpha}")
    return strategy


def rounded_indicators(layout: RelaxationLayout, lp_values) -> dict[str, int]:
    return {u: int(lp_values[j] >= 0.5) for u, j in layout.y.items()}


def _relaxation_verdict(net: DefenseNetwork, alpha: float, budget: float) -> Verdict:
    prog, layout = build_relaxation_lp(net, alpha, budget)
    sol = lpmod.solve_lp(prog)
    if not sol.feasible:
        return Verdict(False, None, {"lp": sol.status})
    return Verdict(True, None, {"lp": sol.status, "values": sol.values, "layout": layout})


def solve_approx(net: DefenseNetwork) -> SolveReport:
    """Resource-augmented solver: result is at most the optimum for budget R/2."""
    half = net.resource / 2.0
    alpha, verdict = min_achievable(result_space(net),
                                    lambda a: _relaxation_verdict(net, a, half))
    values = verdict.detail["values"]
    layout = verdict.detail["layout"]
    strategy = round_solution(net, alpha, values, layout)
    cert = {"rounded": rounded_indicators(layout, values)}
    return _report(net, "approx", alpha, strategy, "alpha <= OPT(R/2)", cert)


# --- greedy baseline -------------------------------------------------------

def solve_greedy(net: DefenseNetwork) -> SolveReport:
    """Raise the most profitable target to its upper threshold, repeatedly."""
    alloc = {nd.id: 0.0 for nd in net.nodes}
    remaining = net.resource
    for _ in range(net.n + 1):
        strategy = DefendingStrategy(alloc)
        report = defending_result(net, strategy)
        if report.result <= 0.0 or remaining <= TOL:
            break
        u = report.argmax
        power = _node_power(net, alloc, u)
        step = min(net.by_id[u].ub - power, remaining)
        if step <= 0.0:
            break
        alloc[u] += step
        remaining -= step
    alloc = {u: r for u, r in alloc.items() if r > 0.0}
    strategy = DefendingStrategy(alloc)
    result = defending_result(net, strategy).result
    return _report(net, "greedy", result, strategy, "heuristic, no guarantee")


def _node_power(net: DefenseNetwork, alloc: dict[str, float], u: str) -> float:
    i = net.index[u]
    return alloc[u] + math.fsum(w * alloc[net.nodes[j].id] for j, w in net.adjacency[i])


# --- exhaustive oracle -----------------------------------------------------

def _subset_lp(net: DefenseNetwork, alpha: float, S: Iterable[str],
               A: frozenset[str] | None = None,
               B: frozenset[str] | None = None,
               neighbor_constraints: bool = True) -> lpmod.LinearProgram:
    A = vulnerable_set(net, alpha) if A is None else A
    B = crucial_set(net, alpha) if B is None else B
    S = set(S)
    need: dict[int, float] = {}
    for u in A:
        need[net.index[u]] = net.by_id[u].lb
    for u in S:
        i = net.index[u]
        need[i] = max(need.get(i, 0.0), net.by_id[u].ub)
    if neighbor_constraints:
        for u in B - S:
            for j, _ in net.adjacency[net.index[u]]:
                v = net.nodes[j]
                if v.id not in A:
                    need[j] = max(need.get(j, 0.0), v.lb)
    n = net.n
    prog = lpmod.LinearProgram(n, objective=[(j, 1.0) for j in range(n)])
    for i in sorted(need):
        if need[i] > 0.0:
            prog.add(_power_terms(net, i), ">=", need[i])
    return prog


def min_resource_for_subset(net: DefenseNetwork, alpha: float, S: Iterable[str]) -> float:
    """Least budget reaching result ``alpha`` when exactly ``S`` gets its upper threshold."""
    S = set(S)
    B = crucial_set(net, alpha)
    if not S <= B:
        raise ValueError(f"S must be a subset of the crucial set, extra: {sorted(S - B)}")
    sol = lpmod.solve_lp(_subset_lp(net, alpha, S))
    return sol.objective_value if sol.objective_value is not None else 0.0


def _min_over_subsets(net: DefenseNetwork, alpha: float, budget: float, max_crucial: int,
                      prune: bool) -> tuple[float, list[float] | None]:
    """Cheapest subset LP at ``alpha``; stops early once one fits ``budget``.

    With ``prune`` the enumeration skips dominated subsets. A crucial node
    with ``UB == LB`` is always put in S (its UB requirement is already
    implied by the vulnerable set). A crucial node with no non-vulnerable
    neighbor is never put in S (leaving it out constrains nothing).
    """
    A = vulnerable_set(net, alpha)
    B = crucial_set(net, alpha)
    if len(B) > max_crucial:
        raise SizeLimit(f"{len(B)} crucial nodes at alpha={alpha} exceed max_crucial={max_crucial}")
    free = sorted(B)
    forced: list[str] = []
    if prune:
        # Relaxation shared by every subset: only the vulnerable-set thresholds.
        base = lpmod.solve_lp(_subset_lp(net, alpha, (), A, B, neighbor_constraints=False))
        if (base.objective_value or 0.0) > budget + TOL:
            return base.objective_value, None
        free, forced = [], []
        for u in sorted(B):
            nd = net.by_id[u]
            exposed = any(v not in A for v in net.neighbors(u))
            if nd.ub - nd.lb <= TOL:
                forced.append(u)
            elif exposed:
                free.append(u)
    best, best_values = math.inf, None
    for k in range(len(free) + 1):
        for combo in itertools.combinations(free, k):
            sol = lpmod.solve_lp(_subset_lp(net, alpha, forced + list(combo), A, B))
            cost = sol.objective_value or 0.0
            if cost < best:
                best, best_values = cost, sol.values
            if best <= budget + TOL:
                return best, best_values
    return best, None


def solve_exact_bruteforce(net: DefenseNetwork, max_crucial: int = 20,
                           prune: bool = True) -> SolveReport:
    """Exact optimum by scanning result levels upward and enumerating subsets."""
    for alpha in result_space(net):
        cost, values = _min_over_subsets(net, alpha, net.resource, max_crucial, prune)
        if values is not None:
            strategy = DefendingStrategy.from_vector(net, values)
            return _report(net, "exact", alpha, strategy, "exhaustive oracle",
                           {"min_resource": cost})
    raise RuntimeError("no result level achievable")  # max g is always achievable


ALGORITHMS: dict[str, Callable[..., SolveReport]] = {
    "single-threshold": solve_single_threshold,
    "isolated": solve_isolated,
    "approx": solve_approx,
    "greedy": solve_greedy,
    "exact": solve_exact_bruteforce,
}
