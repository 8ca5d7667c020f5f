"""Network defending: allocate a divisible defense budget over a graph."""

from netdef.errors import (
    InvalidParams,
    ModelMismatch,
    NetdefError,
    NumericalFailure,
    ParseError,
    RoundingInfeasible,
    SizeLimit,
    UnboundedFlow,
    UnknownNode,
)
from netdef.model import (
    AttackReport,
    DefenseNetwork,
    DefendingStrategy,
    EdgeSpec,
    NodeSpec,
    PowerProfile,
    attacker_gain,
    crucial_set,
    defending_power,
    defending_result,
    result_space,
    validate_network,
    vulnerable_set,
)
from netdef.solvers import (
    SolveReport,
    solve_approx,
    solve_exact_bruteforce,
    solve_greedy,
    solve_isolated,
    solve_single_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "AttackReport",
    "DefenseNetwork",
    "DefendingStrategy",
    "EdgeSpec",
    "InvalidParams",
    "ModelMismatch",
    "NetdefError",
    "NodeSpec",
    "NumericalFailure",
    "ParseError",
    "PowerProfile",
    "RoundingInfeasible",
    "SizeLimit",
    "SolveReport",
    "UnboundedFlow",
    "UnknownNode",
    "attacker_gain",
    "crucial_set",
    "defending_power",
    "defending_result",
    "result_space",
    "solve_approx",
    "solve_exact_bruteforce",
    "solve_greedy",
    "solve_isolated",
    "solve_single_threshold",
    "validate_network",
    "vulnerable_set",
]
