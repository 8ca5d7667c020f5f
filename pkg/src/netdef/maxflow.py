"""Maximum flow / minimum cut by Dinic's level-graph augmentation.

Arc capacities are finite nonnegative floats or :data:`INFINITE`. Infinite
arcs only ever take part in ``inf - finite`` residual updates, which IEEE
arithmetic keeps at ``inf``; an augmenting path made only of infinite arcs
is detected up front and reported as :class:`~netdef.errors.UnboundedFlow`.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

from netdef.errors import UnboundedFlow

INFINITE = math.inf

# Residuals at or below this count as saturated.
EPS = 1e-12


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: float


@dataclass
class FlowNetwork:
    num_nodes: int
    source: int
    sink: int
    arcs: list[Arc] = field(default_factory=list)

    def add_arc(self, tail: int, head: int, capacity: float) -> int:
        self.arcs.append(Arc(tail, head, capacity))
        return len(self.arcs) - 1

    def validate(self) -> None:
        if not (0 <= self.source < self.num_nodes and 0 <= self.sink < self.num_nodes):
            raise ValueError("source/sink out of range")
        if self.source == self.sink:
            raise ValueError("source equals sink")
        for a in self.arcs:
            if not (0 <= a.tail < self.num_nodes and 0 <= a.head < self.num_nodes):
                raise ValueError(f"arc endpoint out of range: {a}")
            if not a.capacity >= 0:
                raise ValueError(f"negative or NaN capacity: {a}")


@dataclass
class FlowResult:
    value: float
    arc_flows: list[float]
    source_side: frozenset[int]


def _has_infinite_path(fn: FlowNetwork) -> bool:
    adj: list[list[int]] = [[] for _ in range(fn.num_nodes)]
    for a in fn.arcs:
        if a.capacity == INFINITE:
            adj[a.tail].append(a.head)
    seen = {fn.source}
    queue = deque([fn.source])
    while queue:
        u = queue.popleft()
        if u == fn.sink:
            return True
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return False


def max_flow(fn: FlowNetwork) -> FlowResult:
    """Maximum s-t flow, with the source side of a minimum cut."""
    fn.validate()
    if _has_infinite_path(fn):
        raise UnboundedFlow("every s-t cut has infinite capacity")

    n, s, t = fn.num_nodes, fn.source, fn.sink
    # Arc k is stored at 2k (forward) and 2k+1 (reverse).
    to: list[int] = []
    res: list[float] = []
    adj: list[list[int]] = [[] for _ in range(n)]
    for a in fn.arcs:
        adj[a.tail].append(len(to))
        to.append(a.head)
        res.append(float(a.capacity))
        adj[a.head].append(len(to))
        to.append(a.tail)
        res.append(0.0)

    value = 0.0
    while True:
        level = [-1] * n
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for e in adj[u]:
                v = to[e]
                if level[v] < 0 and res[e] > EPS:
                    level[v] = level[u] + 1
                    queue.append(v)
        if level[t] < 0:
            break

        ptr = [0] * n
        path: list[int] = []
        u = s
        while True:
            if u == t:
                push = min(res[e] for e in path)
                for e in path:
                    res[e] -= push
                    res[e ^ 1] += push
                value += push
                # Retreat to the tail of the first saturated arc.
                for k, e in enumerate(path):
                    if res[e] <= EPS:
                        del path[k:]
                        break
                u = to[path[-1]] if path else s
                continue
            edges = adj[u]
            while ptr[u] < len(edges):
                e = edges[ptr[u]]
                if res[e] > EPS and level[to[e]] == level[u] + 1:
                    break
                ptr[u] += 1
            if ptr[u] < len(edges):
                e = edges[ptr[u]]
                path.append(e)
                u = to[e]
                continue
            # Dead end: block u and back up.
            level[u] = -1
            if not path:
                break
            e = path.pop()
            u = to[e ^ 1]
            ptr[u] += 1

    side = {s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for e in adj[u]:
            v = to[e]
            if v not in side and res[e] > EPS:
                side.add(v)
                queue.append(v)

    flows = []
    for k, a in enumerate(fn.arcs):
        flows.append(res[2 * k + 1])
    return FlowResult(value, flows, frozenset(side))


def cut_capacity(fn: FlowNetwork, side) -> float:
    """Total capacity of arcs leaving ``side``."""
    side = set(side)
    return math.fsum(a.capacity for a in fn.arcs if a.tail in side and a.head not in side)


def verify_flow(fn: FlowNetwork, fr: FlowResult) -> float:
    """Largest violation of capacity, conservation and value = cut capacity."""
    if len(fr.arc_flows) != len(fn.arcs):
        raise ValueError("arc_flows length must equal number of arcs")
    worst = 0.0
    balance = [0.0] * fn.num_nodes
    for a, f in zip(fn.arcs, fr.arc_flows):
        worst = max(worst, -f, f - a.capacity)
        balance[a.tail] -= f
        balance[a.head] += f
    for v in range(fn.num_nodes):
        if v not in (fn.source, fn.sink):
            worst = max(worst, abs(balance[v]))
    worst = max(worst, abs(fr.value - (-balance[fn.source])))
    if fn.source not in fr.source_side or fn.sink in fr.source_side:
        return math.inf
    cap = cut_capacity(fn, fr.source_side)
    worst = max(worst, abs(fr.value - cap) if math.isfinite(cap) else math.inf)
    return worst
