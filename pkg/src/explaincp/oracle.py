"""Independent brute-force machinery used by the tests and the acceptance
suite: exhaustive enumeration over original domains and from-scratch
propagation fixpoints.

Enumeration shares only the constraints' `evaluate` semantics with the
solver; it never touches the propagation code, so it can vouch for it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Sequence

from .constraints import Constraint
from .errors import InputError
from .explain import Contradiction
from .solver import solver_for
from .store import VariableDecl

_MAX_PRODUCT = 10_000_000


@dataclass(frozen=True)
class OracleResult:
    solution_count: int
    witnesses: tuple[dict[str, int], ...]


def enumerate_solutions(
    variables: Sequence[VariableDecl],
    constraints: Iterable[Constraint],
    witness_limit: int = 1,
    stop_at_first: bool = False,
) -> OracleResult:
    """Count the total assignments satisfying every constraint.

    Decision constraints evaluate as ordinary equalities.  With
    `stop_at_first` the count is truncated at 1, which is enough for
    satisfiability checks and much faster on loose instances.
    """
    constraints = list(constraints)
    _guard(variables)
    names = [v.name for v in variables]
    count = 0
    witnesses: list[dict[str, int]] = []
    for values in product(*(v.values() for v in variables)):
        assignment = dict(zip(names, values))
        if all(c.evaluate(assignment) for c in constraints):
            count += 1
            if len(witnesses) < witness_limit:
                witnesses.append(assignment)
            if stop_at_first:
                break
    return OracleResult(solution_count=count, witnesses=tuple(witnesses))


def is_infeasible(
    variables: Sequence[VariableDecl], constraints: Iterable[Constraint]
) -> bool:
    """True iff no total assignment satisfies the constraints."""
    return enumerate_solutions(variables, constraints, stop_at_first=True).solution_count == 0


def scratch_domains(
    variables: Sequence[VariableDecl],
    constraints: Iterable[Constraint],
    excluded: Iterable[str] = (),
) -> dict[str, frozenset[int]]:
    """Domains after propagating everything except `excluded` on a fresh solver."""
    domains, _ = scratch_propagate(variables, constraints, excluded)
    return domains


def scratch_propagate(
    variables: Sequence[VariableDecl],
    constraints: Iterable[Constraint],
    excluded: Iterable[str] = (),
) -> tuple[dict[str, frozenset[int]], Contradiction | None]:
    """Like `scratch_domains` but also reports the first wipeout, if any.

    Domains of a failed state depend on where propagation stopped; only
    the failure itself is meaningful then.
    """
    _guard(variables)
    skip = frozenset(excluded)
    kept = [_detached_copy(c) for c in constraints if c.id not in skip]
    solver, contradiction = solver_for(variables, kept)
    return solver.domains(), contradiction


def _detached_copy(constraint: Constraint) -> Constraint:
    """A fresh constraint equal to `constraint`, safe to post elsewhere."""
    from dataclasses import replace

    return replace(constraint)


def _guard(variables: Sequence[VariableDecl]) -> None:
    size = 1
    for decl in variables:
        size *= len(decl.values())
        if size > _MAX_PRODUCT:
            raise InputError(f"search space exceeds {_MAX_PRODUCT} assignments")
