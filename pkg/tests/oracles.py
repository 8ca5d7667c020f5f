"""Independent reference computations used to check the solvers."""

import itertools
import math

import numpy as np


def brute_force_min_cut(fn):
    """Minimum s-t cut capacity by enumerating every source side."""
    others = [v for v in range(fn.num_nodes) if v not in (fn.source, fn.sink)]
    best = math.inf
    for mask in range(1 << len(others)):
        side = {fn.source} | {v for k, v in enumerate(others) if mask >> k & 1}
        cap = 0.0
        for a in fn.arcs:
            if a.tail in side and a.head not in side:
                cap += a.capacity
        best = min(best, cap)
    return best


def vertex_enumeration_min(c, A, b):
    """min c.x s.t. A x <= b, x >= 0 by checking every basic point.

    Returns None when no vertex is feasible.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    n = A.shape[1]
    rows = np.vstack([A, -np.eye(n)])
    rhs = np.concatenate([b, np.zeros(n)])
    best = None
    for active in itertools.combinations(range(rows.shape[0]), n):
        M = rows[list(active)]
        if abs(np.linalg.det(M)) < 1e-9:
            continue
        x = np.linalg.solve(M, rhs[list(active)])
        if np.all(rows @ x <= rhs + 1e-9):
            val = float(np.dot(c, x))
            best = val if best is None else min(best, val)
    return best
