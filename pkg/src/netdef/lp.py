"""Dense two-phase simplex.

Programs are given in constraint form (sparse term lists, ``<=``/``>=``/``=``
rows, optional per-variable bounds) and solved for feasibility or
minimization. Pivot choices are fully determined by the tableau, so
identical programs give bit-identical answers, and the fallback to Bland's
rule rules out cycling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.linalg.blas import dger

from netdef.errors import NumericalFailure

FEASIBLE = "Feasible"
INFEASIBLE = "Infeasible"
UNBOUNDED = "Unbounded"

FEAS_TOL = 1e-7
PIVOT_TOL = 1e-9
TINY_PIVOT = 1e-12
COST_TOL = 1e-9
DEGENERATE_STREAK = 50

RELATIONS = ("<=", ">=", "=")


@dataclass
class Constraint:
    terms: list[tuple[int, float]]
    relation: str
    rhs: float


@dataclass
class LinearProgram:
    """``minimize objective`` subject to ``constraints`` and variable bounds.

    An empty objective means pure feasibility. ``lower_bounds`` defaults to 0
    for every variable and ``upper_bounds`` to none; ``None`` entries mean
    unbounded in that direction.
    """

    num_vars: int
    objective: list[tuple[int, float]] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    lower_bounds: list[float | None] | None = None
    upper_bounds: list[float | None] | None = None

    def add(self, terms, relation: str, rhs: float) -> None:
        self.constraints.append(Constraint(list(terms), relation, float(rhs)))

    def lower(self, j: int) -> float | None:
        return 0.0 if self.lower_bounds is None else self.lower_bounds[j]

    def upper(self, j: int) -> float | None:
        return None if self.upper_bounds is None else self.upper_bounds[j]


@dataclass
class LpSolution:
    status: str
    values: list[float] | None = None
    objective_value: float | None = None
    iterations: int = 0

    @property
    def feasible(self) -> bool:
        return self.status == FEASIBLE


def _check_wellformed(lp: LinearProgram) -> None:
    n = lp.num_vars
    for j, c in lp.objective:
        if not 0 <= j < n or not math.isfinite(c):
            raise ValueError(f"bad objective term ({j}, {c})")
    for con in lp.constraints:
        if con.relation not in RELATIONS:
            raise ValueError(f"bad relation {con.relation!r}")
        if not math.isfinite(con.rhs):
            raise ValueError(f"non-finite rhs {con.rhs}")
        for j, c in con.terms:
            if not 0 <= j < n or not math.isfinite(c):
                raise ValueError(f"bad constraint term ({j}, {c})")
    for bounds in (lp.lower_bounds, lp.upper_bounds):
        if bounds is not None and len(bounds) != n:
            raise ValueError("bounds length must equal num_vars")


class _Tableau:
    """Rows 0..m-1 are constraints, row m is the reduced-cost row.

    The last column holds the right-hand side (and minus the objective value
    in the cost row).
    """

    def __init__(self, T: np.ndarray, basis: list[int], rule: str):
        self.T = T
        self.basis = basis
        self.rule = rule
        self.iterations = 0

    def pivot(self, r: int, c: int) -> None:
        T = self.T
        row = T[r] / T[r, c]
        col = T[:, c].copy()
        col[r] = 0.0
        # In-place rank-1 update; T is kept Fortran-ordered so BLAS does not copy.
        out = dger(-1.0, col, row, a=T, overwrite_a=1)
        if out is not T:
            T[...] = out
        T[r] = row
        self.basis[r] = c
        self.iterations += 1

    def run(self, allowed: int, max_iter: int) -> bool:
        """Optimize over columns ``< allowed``; False means unbounded.

        Entering column: most negative reduced cost (lowest index on ties)
        until ``DEGENERATE_STREAK`` consecutive pivots fail to move the
        objective, then Bland's lowest-index rule for the rest of the run.
        Leaving row: minimum ratio, lowest basic variable index on ties.
        """
        T = self.T
        m = T.shape[0] - 1
        streak = 0
        bland = self.rule == "bland"
        while True:
            if self.iterations > max_iter:
                raise NumericalFailure(f"simplex exceeded {max_iter} pivots")
            costs = T[m, :allowed]
            if bland:
                candidates = np.nonzero(costs < -COST_TOL)[0]
                if candidates.size == 0:
                    return True
                c = int(candidates[0])
            else:
                c = int(np.argmin(costs))
                if costs[c] >= -COST_TOL:
                    return True
            col = T[:m, c]
            eligible = np.nonzero(col > PIVOT_TOL)[0]
            if eligible.size == 0:
                if np.any(col > TINY_PIVOT):
                    raise NumericalFailure(
                        f"entering column {c} has only pivots below {PIVOT_TOL:g}")
                return False
            ratios = T[eligible, -1] / col[eligible]
            best = ratios.min()
            tied = eligible[ratios <= best + 1e-12 * max(1.0, abs(best))]
            r = min(tied, key=lambda i: self.basis[i])
            if best <= 1e-12:
                streak += 1
                if streak >= DEGENERATE_STREAK:
                    bland = True
            else:
                streak = 0
            self.pivot(int(r), c)


def solve_lp(lp: LinearProgram, max_iter: int | None = None, rule: str = "dantzig") -> LpSolution:
    """Solve ``lp`` with the two-phase simplex method.

    ``rule`` is ``"dantzig"`` (largest coefficient with a Bland fallback on
    degenerate stalls) or ``"bland"`` (lowest index throughout); both are
    deterministic and cycle-free. Feasible solutions satisfy every
    constraint and bound within
    :data:`FEAS_TOL`; a solution that does not raises
    :class:`~netdef.errors.NumericalFailure` instead of being returned.
    """
    if rule not in ("dantzig", "bland"):
        raise ValueError(f"unknown pivot rule {rule!r}")
    _check_wellformed(lp)
    n = lp.num_vars

    # x_j = offset[j] + sum(coef * z_k) over the nonnegative columns z.
    offset = [0.0] * n
    var_cols: list[list[tuple[int, float]]] = []
    extra_rows: list[tuple[int, float]] = []  # (column, bound) meaning z_col <= bound
    ncols = 0
    for j in range(n):
        lo, hi = lp.lower(j), lp.upper(j)
        if lo is not None and hi is not None and hi < lo:
            return LpSolution(INFEASIBLE)
        if lo is not None:
            offset[j] = lo
            var_cols.append([(ncols, 1.0)])
            if hi is not None:
                extra_rows.append((ncols, hi - lo))
            ncols += 1
        elif hi is not None:
            offset[j] = hi
            var_cols.append([(ncols, -1.0)])
            ncols += 1
        else:
            var_cols.append([(ncols, 1.0), (ncols + 1, -1.0)])
            ncols += 2
    nstruct = ncols

    rows: list[tuple[dict[int, float], str, float]] = []
    for con in lp.constraints:
        coeffs: dict[int, float] = {}
        rhs = con.rhs
        for j, a in con.terms:
            rhs -= a * offset[j]
            for col, sign in var_cols[j]:
                coeffs[col] = coeffs.get(col, 0.0) + sign * a
        rows.append((coeffs, con.relation, rhs))
    for col, bound in extra_rows:
        rows.append(({col: 1.0}, "<=", bound))

    m = len(rows)
    normalized = []
    for coeffs, rel, rhs in rows:
        if rhs < 0:
            coeffs = {k: -v for k, v in coeffs.items()}
            rhs = -rhs
            rel = {"<=": ">=", ">=": "<=", "=": "="}[rel]
        normalized.append((coeffs, rel, rhs))

    n_slack = sum(1 for _, rel, _ in normalized if rel != "=")
    n_art = sum(1 for _, rel, _ in normalized if rel != "<=")
    art_start = nstruct + n_slack
    total = art_start + n_art
    T = np.zeros((m + 1, total + 1), order="F")
    basis = [0] * m
    s_col, a_col = nstruct, art_start
    for i, (coeffs, rel, rhs) in enumerate(normalized):
        for k, v in coeffs.items():
            T[i, k] = v
        T[i, -1] = rhs
        if rel == "<=":
            T[i, s_col] = 1.0
            basis[i] = s_col
            s_col += 1
        else:
            if rel == ">=":
                T[i, s_col] = -1.0
                s_col += 1
            T[i, a_col] = 1.0
            basis[i] = a_col
            a_col += 1

    if max_iter is None:
        max_iter = 50 * (m + total) + 1000
    tab = _Tableau(T, basis, rule)
    scale = max(1.0, float(np.max(np.abs(T[:m, -1]))) if m else 1.0)

    if n_art:
        # Phase 1: minimize the sum of artificials.
        art_rows = [i for i in range(m) if basis[i] >= art_start]
        T[m, :] = 0.0
        T[m, art_start:total] = 1.0
        for i in art_rows:
            T[m] -= T[i]
        tab.run(total, max_iter)
        if -T[m, -1] > PIVOT_TOL * scale:
            return LpSolution(INFEASIBLE, iterations=tab.iterations)
        keep = []
        for i in range(m):
            if tab.basis[i] >= art_start:
                nz = np.nonzero(np.abs(T[i, :art_start]) > PIVOT_TOL)[0]
                if nz.size:
                    tab.pivot(i, int(nz[0]))
                    keep.append(i)
                # otherwise the row is redundant and dropped
            else:
                keep.append(i)
        T = np.vstack([T[keep, :art_start], T[-1:, :art_start]])
        T = np.hstack([T, np.vstack([tab.T[keep, -1:], tab.T[-1:, -1:]])])
        T = np.asfortranarray(T)
        done = tab.iterations
        tab = _Tableau(T, [tab.basis[i] for i in keep], rule)
        tab.iterations = done
        m = len(keep)
        total = art_start

    cost = np.zeros(total)
    for j, c in lp.objective:
        for col, sign in var_cols[j]:
            cost[col] += sign * c
    if lp.objective:
        T = tab.T
        T[m, :] = 0.0
        T[m, :total] = cost
        for i, b in enumerate(tab.basis):
            if cost[b] != 0.0:
                T[m] -= cost[b] * T[i]
        if not tab.run(total, max_iter):
            return LpSolution(UNBOUNDED, iterations=tab.iterations)

    z = np.zeros(total)
    for i, b in enumerate(tab.basis):
        z[b] = max(tab.T[i, -1], 0.0)
    values = []
    for j in range(n):
        x = offset[j] + sum(sign * z[col] for col, sign in var_cols[j])
        values.append(float(x))
    objective_value = None
    if lp.objective:
        objective_value = math.fsum(c * values[j] for j, c in lp.objective)
    violation = check_solution(lp, values)
    if violation > FEAS_TOL:
        raise NumericalFailure(f"simplex output violates constraints by {violation:.3g}")
    return LpSolution(FEASIBLE, values, objective_value, tab.iterations)


def check_solution(lp: LinearProgram, values: Sequence[float]) -> float:
    """Largest constraint or bound violation of ``values`` (0 when feasible)."""
    if len(values) != lp.num_vars:
        raise ValueError("values length must equal num_vars")
    worst = 0.0
    for con in lp.constraints:
        lhs = math.fsum(a * values[j] for j, a in con.terms)
        if con.relation == "<=":
            worst = max(worst, lhs - con.rhs)
        elif con.relation == ">=":
            worst = max(worst, con.rhs - lhs)
        else:
            worst = max(worst, abs(lhs - con.rhs))
    for j, x in enumerate(values):
        lo, hi = lp.lower(j), lp.upper(j)
        if lo is not None:
            worst = max(worst, lo - x)
        if hi is not None:
            worst = max(worst, x - hi)
    return worst
