"""Instances, strategies and the attacker's best-response semantics.

Every solver in the package is scored against :func:`defending_result`.
Threshold tests use an absolute slack of :data:`TOL` (``p >= T - TOL``)
so that LP and flow outputs sitting on a threshold up to round-off are
accepted. ``NETDEF_TOLERANCE`` overrides it for experiments.
"""

from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from netdef.errors import UnknownNode

TOL = float(os.environ.get("NETDEF_TOLERANCE", "1e-9"))


@dataclass(frozen=True)
class NodeSpec:
    id: str
    lb: float
    ub: float
    g: float
    g_prime: float


@dataclass(frozen=True)
class EdgeSpec:
    u: str
    v: str
    w: float


@dataclass(frozen=True)
class DefenseNetwork:
    """Undirected graph with per-node thresholds/values and a budget."""

    nodes: tuple[NodeSpec, ...]
    edges: tuple[EdgeSpec, ...]
    resource: float

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def index(self) -> dict[str, int]:
        return {nd.id: i for i, nd in enumerate(self.nodes)}

    @cached_property
    def by_id(self) -> dict[str, NodeSpec]:
        return {nd.id: nd for nd in self.nodes}

    @cached_property
    def ids(self) -> list[str]:
        return [nd.id for nd in self.nodes]

    @cached_property
    def adjacency(self) -> list[list[tuple[int, float]]]:
        """Per node index, the list of ``(neighbor index, w)``.

        Edges with an unknown endpoint are skipped; :func:`validate_network`
        reports them.
        """
        adj: list[list[tuple[int, float]]] = [[] for _ in self.nodes]
        idx = self.index
        for e in self.edges:
            i, j = idx.get(e.u), idx.get(e.v)
            if i is None or j is None or i == j:
                continue
            adj[i].append((j, e.w))
            adj[j].append((i, e.w))
        return adj

    def neighbors(self, u: str) -> list[str]:
        try:
            i = self.index[u]
        except KeyError:
            raise UnknownNode(f"unknown node {u!r}") from None
        return [self.nodes[j].id for j, _ in self.adjacency[i]]

    @property
    def n(self) -> int:
        return len(self.nodes)

    @property
    def m(self) -> int:
        return len(self.edges)

    def with_resource(self, resource: float) -> "DefenseNetwork":
        return DefenseNetwork(self.nodes, self.edges, resource)

    def is_single_threshold(self, tol: float = TOL) -> bool:
        return all(abs(nd.ub - nd.lb) <= tol for nd in self.nodes)

    def is_isolated(self, tol: float = TOL) -> bool:
        return all(abs(e.w) <= tol for e in self.edges)


@dataclass(frozen=True)
class DefendingStrategy:
    """Nonnegative allocation per node id; missing ids read as 0."""

    allocation: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "allocation", dict(self.allocation))

    def __getitem__(self, u: str) -> float:
        return self.allocation.get(u, 0.0)

    def total(self) -> float:
        return math.fsum(self.allocation.values())

    def as_vector(self, net: DefenseNetwork) -> list[float]:
        idx = net.index
        vec = [0.0] * net.n
        for u, r in self.allocation.items():
            if u not in idx:
                raise UnknownNode(f"allocation references unknown node {u!r}")
            vec[idx[u]] = float(r)
        return vec

    @classmethod
    def from_vector(cls, net: DefenseNetwork, values: Iterable[float],
                    drop_zeros: bool = True) -> "DefendingStrategy":
        alloc = {}
        for nd, r in zip(net.nodes, values):
            r = max(float(r), 0.0)
            if r > 0.0 or not drop_zeros:
                alloc[nd.id] = r
        return cls(alloc)


@dataclass(frozen=True)
class PowerProfile:
    power: Mapping[str, float]

    def __getitem__(self, u: str) -> float:
        return self.power[u]


@dataclass(frozen=True)
class AttackReport:
    gains: Mapping[str, float]
    result: float
    argmax: str | None


def validate_network(net: DefenseNetwork) -> list[str]:
    """Return every invariant violation in ``net``; empty means well-formed.

    Disconnection is not a violation, see :func:`network_warnings`.
    """
    problems = []

    def bad_number(x):
        return not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(x)

    if bad_number(net.resource) or net.resource < 0:
        problems.append(f"resource must be a finite nonnegative number, got {net.resource!r}")

    seen = set()
    for nd in net.nodes:
        if nd.id in seen:
            problems.append(f"duplicate node id {nd.id!r}")
        seen.add(nd.id)
        fields = {"lb": nd.lb, "ub": nd.ub, "g": nd.g, "g_prime": nd.g_prime}
        numeric_ok = True
        for name, value in fields.items():
            if bad_number(value) or value < 0:
                problems.append(f"node {nd.id!r}: {name} must be finite and >= 0, got {value!r}")
                numeric_ok = False
        if numeric_ok:
            if nd.lb > nd.ub:
                problems.append(f"node {nd.id!r}: lb>ub ({nd.lb} > {nd.ub})")
            if nd.g_prime > nd.g:
                problems.append(f"node {nd.id!r}: g_prime>g ({nd.g_prime} > {nd.g})")

    pairs = set()
    for e in net.edges:
        for end in (e.u, e.v):
            if end not in seen:
                problems.append(f"edge ({e.u!r}, {e.v!r}): unknown endpoint {end!r}")
        if e.u == e.v:
            problems.append(f"edge ({e.u!r}, {e.v!r}): self-loop")
        key = frozenset((e.u, e.v))
        if key in pairs and e.u != e.v:
            problems.append(f"edge ({e.u!r}, {e.v!r}): duplicate pair")
        pairs.add(key)
        if bad_number(e.w) or e.w < 0:
            problems.append(f"edge ({e.u!r}, {e.v!r}): w must be finite and >= 0, got {e.w!r}")
    return problems


def network_warnings(net: DefenseNetwork) -> list[str]:
    """Non-fatal remarks about ``net`` (currently only disconnection)."""
    if net.n <= 1:
        return []
    seen = {0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for j, _ in net.adjacency[i]:
            if j not in seen:
                seen.add(j)
                queue.append(j)
    if len(seen) < net.n:
        return [f"graph is disconnected ({net.n - len(seen)} nodes unreachable from {net.nodes[0].id!r})"]
    return []


def validate_strategy(net: DefenseNetwork, s: DefendingStrategy, tol: float = TOL) -> list[str]:
    problems = []
    for u, r in s.allocation.items():
        if u not in net.index:
            problems.append(f"allocation references unknown node {u!r}")
        if not math.isfinite(r) or r < 0:
            problems.append(f"allocation for {u!r} must be finite and >= 0, got {r!r}")
    total = s.total()
    if total > net.resource + tol:
        problems.append(f"allocation total {total!r} exceeds resource {net.resource!r}")
    return problems


def _power_vector(net: DefenseNetwork, r: list[float]) -> list[float]:
    power = list(r)
    for i, nbrs in enumerate(net.adjacency):
        acc = power[i]
        for j, w in nbrs:
            acc += w * r[j]
        power[i] = acc
    return power


def defending_power(net: DefenseNetwork, s: DefendingStrategy) -> PowerProfile:
    """Own allocation plus the weighted allocations of the neighbors."""
    power = _power_vector(net, s.as_vector(net))
    return PowerProfile({nd.id: p for nd, p in zip(net.nodes, power)})


def _gains(net: DefenseNetwork, power: list[float], tol: float) -> list[float]:
    below_lb = [p < nd.lb - tol for nd, p in zip(net.nodes, power)]
    gains = []
    for i, nd in enumerate(net.nodes):
        p = power[i]
        if p >= nd.ub - tol:
            gains.append(0.0)
        elif below_lb[i]:
            gains.append(nd.g)
        elif any(below_lb[j] for j, _ in net.adjacency[i]):
            gains.append(nd.g_prime)
        else:
            gains.append(0.0)
    return gains


def attacker_gain(net: DefenseNetwork, p: PowerProfile, target: str, tol: float = TOL) -> float:
    """Gain of attacking ``target`` under the power profile ``p``."""
    if target not in net.index:
        raise UnknownNode(f"unknown target {target!r}")
    nd = net.by_id[target]
    pu = p.power.get(target, 0.0)
    if pu >= nd.ub - tol:
        return 0.0
    if pu < nd.lb - tol:
        return nd.g
    for v in net.neighbors(target):
        if p.power.get(v, 0.0) < net.by_id[v].lb - tol:
            return nd.g_prime
    return 0.0


def defending_result(net: DefenseNetwork, s: DefendingStrategy, tol: float = TOL) -> AttackReport:
    """The attacker's best response; ties on the argmax go to the smallest id."""
    power = _power_vector(net, s.as_vector(net))
    gains = _gains(net, power, tol)
    by_id = {nd.id: gain for nd, gain in zip(net.nodes, gains)}
    if not by_id:
        return AttackReport({}, 0.0, None)
    best = max(gains)
    argmax = min(u for u, gain in by_id.items() if gain == best)
    return AttackReport(by_id, best, argmax)


def result_space(net: DefenseNetwork) -> list[float]:
    """All values a defending result can take, ascending."""
    values = {0.0}
    for nd in net.nodes:
        values.add(float(nd.g))
        values.add(float(nd.g_prime))
    return sorted(values)


def vulnerable_set(net: DefenseNetwork, alpha: float) -> frozenset[str]:
    """Nodes that must reach their lower threshold for result ``alpha``."""
    return frozenset(nd.id for nd in net.nodes if nd.g > alpha)


def crucial_set(net: DefenseNetwork, alpha: float) -> frozenset[str]:
    """Nodes that need their upper threshold or fully defended neighbors."""
    return frozenset(nd.id for nd in net.nodes if nd.g_prime > alpha)
