"""Explanation-based finite-domain constraint solving with hierarchical
conflict negotiation."""

from .constraints import Constraint, EqConst, GeqPlus, NeqConst, NeqVars
from .errors import InputError, SchemaError, SolverError, StateError
from .explain import (
    Contradiction,
    combine_choice_explanations,
    contradiction_explanation,
    eliminating_from_nogood,
    is_proof_of_overconstraint,
)
from .hierarchy import (
    BoxSpec,
    BoxTree,
    Cut,
    RelaxPolicy,
    attach_box,
    backward_project,
    build_hierarchy,
    detach_box,
    project,
    validate_cut,
)
from .problem import (
    Problem,
    conference_problem,
    load_problem,
    load_problem_file,
    serialize_problem,
)
from .session import Session, start_session
from .solver import OverConstrained, Solution, Solver, solver_for
from .store import DomainStore, Explanation, RemovalRecord, RemovalResult, VariableDecl

__version__ = "0.1.0"

__all__ = [
    "BoxSpec",
    "BoxTree",
    "Constraint",
    "Contradiction",
    "Cut",
    "DomainStore",
    "EqConst",
    "Explanation",
    "GeqPlus",
    "InputError",
    "NeqConst",
    "NeqVars",
    "OverConstrained",
    "Problem",
    "RelaxPolicy",
    "RemovalRecord",
    "RemovalResult",
    "SchemaError",
    "Session",
    "Solution",
    "Solver",
    "SolverError",
    "StateError",
    "VariableDecl",
    "attach_box",
    "backward_project",
    "build_hierarchy",
    "combine_choice_explanations",
    "conference_problem",
    "contradiction_explanation",
    "detach_box",
    "eliminating_from_nogood",
    "is_proof_of_overconstraint",
    "load_problem",
    "load_problem_file",
    "project",
    "serialize_problem",
    "solver_for",
    "start_session",
    "validate_cut",
]
