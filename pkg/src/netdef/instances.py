"""Fixtures, generators and the JSON file formats.

Instance files (``*.instance.json``)::

    {"resource": 1.0,
     "nodes": [{"id": "u", "lb": 0.0, "ub": 1.0, "g": 1.0, "g_prime": 1.0}, ...],
     "edges": [{"u": "u", "v": "v", "w": 1.0}, ...]}

Strategy files (``*.strategy.json``)::

    {"allocation": {"u": 1.0}}

Formula files for the DNF reduction use signed 1-based literals, one list per
conjunctive clause::

    {"num_vars": 2, "clauses": [[1, 2], [-1]]}
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass

from netdef.errors import InvalidParams, ParseError, SizeLimit
from netdef.model import DefenseNetwork, DefendingStrategy, EdgeSpec, NodeSpec

NODE_FIELDS = ("id", "lb", "ub", "g", "g_prime")
EDGE_FIELDS = ("u", "v", "w")


# --- paper fixtures --------------------------------------------------------

def gen_integrality_gap() -> DefenseNetwork:
    """Two nodes where the LP relaxation is feasible with half the needed budget."""
    return DefenseNetwork(
        nodes=[NodeSpec("u", 0.0, 1.0, 1.0, 1.0), NodeSpec("v", 1.0, 2.0, 0.0, 0.0)],
        edges=[EdgeSpec("u", "v", 1.0)],
        resource=1.0,
    )


def gen_greedy_hard(kind: str = "isolated", value: float = 10.0) -> DefenseNetwork:
    """Path u1-u2-u3 on which greedy ends at ``value`` while the optimum is 0.

    ``kind`` is ``"isolated"`` (no sharing, thresholds 1/2) or
    ``"single_threshold"`` (full sharing, thresholds 3/3).
    """
    g = (value, 2.0, value)
    if kind == "isolated":
        w, lb, ub = 0.0, 1.0, 2.0
    elif kind in ("single_threshold", "single-threshold"):
        w, lb, ub = 1.0, 3.0, 3.0
    else:
        raise InvalidParams(f"unknown greedy-hard kind {kind!r}")
    nodes = [NodeSpec(f"u{i + 1}", lb, ub, g[i], g[i]) for i in range(3)]
    edges = [EdgeSpec("u1", "u2", w), EdgeSpec("u2", "u3", w)]
    return DefenseNetwork(nodes, edges, 3.0)


# --- MAX-DNF reduction -----------------------------------------------------

@dataclass(frozen=True)
class DnfFormula:
    """Disjunction of conjunctive clauses; literals are ``(var, negated)``."""

    num_vars: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "clauses",
                           tuple(tuple((int(v), bool(neg)) for v, neg in c) for c in self.clauses))

    def validate(self) -> list[str]:
        problems = []
        if self.num_vars < 1:
            problems.append("num_vars must be >= 1")
        if not self.clauses:
            problems.append("formula has no clauses")
        for k, clause in enumerate(self.clauses):
            if not clause:
                problems.append(f"clause {k + 1} is empty")
            vars_seen = set()
            for v, _ in clause:
                if not 0 <= v < self.num_vars:
                    problems.append(f"clause {k + 1}: variable {v} out of range")
                if v in vars_seen:
                    problems.append(f"clause {k + 1}: variable {v} repeated")
                vars_seen.add(v)
        return problems

    def satisfied(self, assignment) -> int:
        return sum(all(assignment[v] != neg for v, neg in clause) for clause in self.clauses)


def _literal_name(v: int, neg: bool) -> str:
    return f"~x{v + 1}" if neg else f"x{v + 1}"


def gen_dnf_reduction(f: DnfFormula, t: int) -> DefenseNetwork:
    """Instance that can be fully defended iff some assignment satisfies ``t`` clauses."""
    problems = f.validate()
    if problems:
        raise InvalidParams("; ".join(problems))
    q = len(f.clauses)
    if not 1 <= t <= q:
        raise InvalidParams(f"t must lie in [1, {q}], got {t}")
    p = f.num_vars
    nodes, edges = [], []
    for v in range(p):
        for neg in (False, True):
            nodes.append(NodeSpec(_literal_name(v, neg), 1.0, 1.0, 1.0, 1.0))
        edges.append(EdgeSpec(_literal_name(v, False), _literal_name(v, True), 1.0))
    for k in range(q):
        nodes.append(NodeSpec(f"C{k + 1}", 0.0, 1.0 / q, 1.0, 1.0))
    for k, clause in enumerate(f.clauses):
        for v, neg in clause:
            lit = _literal_name(v, neg)
            conn = f"C{k + 1}:{lit}"
            nodes.append(NodeSpec(conn, 1.0, 1.0, 0.0, 0.0))
            edges.append(EdgeSpec(conn, lit, 1.0))
            edges.append(EdgeSpec(conn, f"C{k + 1}", 0.0))
    return DefenseNetwork(nodes, edges, p + (q - t) / q)


def dnf_max_sat(f: DnfFormula, limit: int = 24) -> int:
    """Most clauses any assignment satisfies (exhaustive over 2^p)."""
    if f.num_vars > limit:
        raise SizeLimit(f"{f.num_vars} variables exceeds the exhaustive limit {limit}")
    best = 0
    for bits in itertools.product((False, True), repeat=f.num_vars):
        best = max(best, f.satisfied(bits))
        if best == len(f.clauses):
            break
    return best


# --- random instances ------------------------------------------------------

DEFAULT_RANGES = {
    "w": (0.0, 1.0),
    "lb": (0.0, 2.0),
    "gap": (0.0, 2.0),
    "g": (0.0, 10.0),
}


def gen_random(seed: int, n: int, m: int, ranges: dict | None = None,
               isolated: bool = False, single_threshold: bool = False) -> DefenseNetwork:
    """Connected random instance: a random spanning tree plus extra edges.

    ``ranges`` may override ``w``, ``lb``, ``gap`` (``ub - lb``) and ``g``
    as ``(low, high)`` pairs. ``g_prime`` is uniform on ``[0, g]`` and the
    budget on ``[0, sum(lb)]``.
    """
    if seed is None:
        raise InvalidParams("seed is required")
    if n < 1:
        raise InvalidParams(f"n must be >= 1, got {n}")
    if m < n - 1 or m > n * (n - 1) // 2:
        raise InvalidParams(f"m must lie in [{n - 1}, {n * (n - 1) // 2}] for n={n}, got {m}")
    rng_ranges = dict(DEFAULT_RANGES)
    rng_ranges.update(ranges or {})
    rng = random.Random(seed)
    width = len(str(n - 1))
    ids = [f"v{i:0{width}d}" for i in range(n)]

    order = list(range(n))
    rng.shuffle(order)
    pairs = set()
    for k in range(1, n):
        a, b = order[k], order[rng.randrange(k)]
        pairs.add((min(a, b), max(a, b)))
    extra = m - len(pairs)
    if extra > 0:
        if extra > (n * (n - 1) // 2 - len(pairs)) // 2:
            pool = [pr for pr in itertools.combinations(range(n), 2) if pr not in pairs]
            pairs.update(rng.sample(pool, extra))
        else:
            while len(pairs) < m:
                a, b = rng.sample(range(n), 2)
                pairs.add((min(a, b), max(a, b)))

    def uniform(key):
        lo, hi = rng_ranges[key]
        return rng.uniform(lo, hi)

    nodes = []
    for i in range(n):
        lb = uniform("lb")
        ub = lb if single_threshold else lb + uniform("gap")
        g = uniform("g")
        nodes.append(NodeSpec(ids[i], lb, ub, g, rng.uniform(0.0, g)))
    edges = []
    for a, b in sorted(pairs):
        w = 0.0 if isolated else uniform("w")
        edges.append(EdgeSpec(ids[a], ids[b], w))
    resource = rng.uniform(0.0, sum(nd.lb for nd in nodes))
    return DefenseNetwork(nodes, edges, resource)


# --- serialization ---------------------------------------------------------

def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", line=exc.lineno) from None


def _number(obj: dict, key: str, where: str) -> float:
    if key not in obj:
        raise ParseError(f"{where}: missing field", field=key)
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{where}: expected a number, got {value!r}", field=key)
    return float(value)


def _string(obj: dict, key: str, where: str) -> str:
    if key not in obj:
        raise ParseError(f"{where}: missing field", field=key)
    value = obj[key]
    if not isinstance(value, str):
        raise ParseError(f"{where}: expected a string, got {value!r}", field=key)
    return value


def _reject_unknown(obj: dict, allowed, where: str) -> None:
    unknown = sorted(set(obj) - set(allowed))
    if unknown:
        raise ParseError(f"{where}: unknown field", field=unknown[0])


def parse_instance(text: str) -> DefenseNetwork:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object")
    _reject_unknown(doc, ("resource", "nodes", "edges"), "instance")
    resource = _number(doc, "resource", "instance")
    for key in ("nodes", "edges"):
        if key not in doc:
            raise ParseError("instance: missing field", field=key)
        if not isinstance(doc[key], list):
            raise ParseError("instance: expected a list", field=key)
    nodes = []
    for k, obj in enumerate(doc["nodes"]):
        where = f"nodes[{k}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: expected an object")
        _reject_unknown(obj, NODE_FIELDS, where)
        nodes.append(NodeSpec(_string(obj, "id", where), _number(obj, "lb", where),
                              _number(obj, "ub", where), _number(obj, "g", where),
                              _number(obj, "g_prime", where)))
    edges = []
    for k, obj in enumerate(doc["edges"]):
        where = f"edges[{k}]"
        if not isinstance(obj, dict):
            raise ParseError(f"{where}: expected an object")
        _reject_unknown(obj, EDGE_FIELDS, where)
        edges.append(EdgeSpec(_string(obj, "u", where), _string(obj, "v", where),
                              _number(obj, "w", where)))
    return DefenseNetwork(nodes, edges, resource)


def serialize_instance(net: DefenseNetwork) -> str:
    doc = {
        "resource": net.resource,
        "nodes": [{"id": nd.id, "lb": nd.lb, "ub": nd.ub, "g": nd.g, "g_prime": nd.g_prime}
                  for nd in net.nodes],
        "edges": [{"u": e.u, "v": e.v, "w": e.w} for e in net.edges],
    }
    return json.dumps(doc, indent=2) + "\n"


def parse_strategy(text: str) -> DefendingStrategy:
    """Parse a strategy file; node ids are checked later against an instance."""
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ParseError("strategy document must be a JSON object")
    _reject_unknown(doc, ("allocation",), "strategy")
    if "allocation" not in doc:
        raise ParseError("strategy: missing field", field="allocation")
    alloc = doc["allocation"]
    if not isinstance(alloc, dict):
        raise ParseError("strategy: expected an object", field="allocation")
    return DefendingStrategy({u: _number(alloc, u, "allocation") for u in alloc})


def serialize_strategy(s: DefendingStrategy) -> str:
    return json.dumps({"allocation": dict(s.allocation)}, indent=2) + "\n"


def parse_formula(text: str) -> DnfFormula:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise ParseError("formula document must be a JSON object")
    _reject_unknown(doc, ("num_vars", "clauses"), "formula")
    if "num_vars" not in doc or isinstance(doc["num_vars"], bool) or not isinstance(doc["num_vars"], int):
        raise ParseError("formula: expected an integer", field="num_vars")
    if "clauses" not in doc or not isinstance(doc["clauses"], list):
        raise ParseError("formula: expected a list of clauses", field="clauses")
    clauses = []
    for k, clause in enumerate(doc["clauses"]):
        if not isinstance(clause, list) or not all(
                isinstance(x, int) and not isinstance(x, bool) and x != 0 for x in clause):
            raise ParseError(f"clauses[{k}]: expected nonzero signed integers", field="clauses")
        clauses.append(tuple((abs(x) - 1, x < 0) for x in clause))
    return DnfFormula(doc["num_vars"], tuple(clauses))


def serialize_formula(f: DnfFormula) -> str:
    clauses = [[-(v + 1) if neg else v + 1 for v, neg in c] for c in f.clauses]
    return json.dumps({"num_vars": f.num_vars, "clauses": clauses}) + "\n"
