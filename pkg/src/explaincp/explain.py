"""Explanation algebra: contradiction explanations, eliminating explanations,
combination across an exhausted choice set, and the over-constrainedness test.

Explanations are flat sets of constraint ids; no derivation chain is kept,
which keeps space polynomial at the price of non-minimal sets.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .constraints import Constraint, EqConst
from .errors import InputError, StateError
from .store import DomainStore, Explanation


@dataclass(frozen=True)
class Contradiction:
    """A nogood derived from an emptied domain.

    `explanation` is the union of the eliminating explanations of every
    removed value of `emptied_variable`; `decisions` is its subset of
    decision-constraint ids.  An empty `decisions` set proves the active
    non-decision constraints infeasible on their own.
    """

    emptied_variable: str
    explanation: Explanation
    decisions: frozenset[str]

    def is_decision_free(self) -> bool:
        return not self.decisions


def contradiction_explanation(
    store: DomainStore,
    var: str,
    constraints: Mapping[str, Constraint],
) -> Contradiction:
    """Build the contradiction explanation for a variable with an empty domain."""
    if store.domain(var):
        raise StateError(f"domain of {var!r} is not empty")
    union: set[str] = set()
    for value in store.original(var):
        expl = store.explanation_for(var, value)
        if expl is None:  # unreachable for an empty domain; guards ledger bugs
            raise StateError(f"missing removal record for {var!r}={value}")
        union |= expl
    explanation = frozenset(union)
    decisions = frozenset(c for c in explanation if constraints[c].is_decision)
    return Contradiction(emptied_variable=var, explanation=explanation, decisions=decisions)


def eliminating_from_nogood(
    contradiction: Contradiction,
    decision: Constraint,
) -> tuple[tuple[str, int], Explanation]:
    """Rewrite a nogood into the removal it eliminates.

    Given a decision ``x == k`` occurring in the nogood, the remaining
    constraints (other decisions included) imply ``x != k``.  Returns the
    ``(variable, value)`` target and that eliminating explanation.
    """
    if decision.id not in contradiction.explanation:
        raise InputError(f"{decision.id!r} does not occur in the contradiction explanation")
    if decision.id not in contradiction.decisions or not isinstance(decision, EqConst):
        raise InputError(f"{decision.id!r} is not a decision assignment")
    return (decision.x, decision.k), contradiction.explanation - {decision.id}


def combine_choice_explanations(explanations: Iterable[Explanation]) -> Explanation:
    """Union of the explanations ruling out every choice at one decision point."""
    combined: set[str] = set()
    empty = True
    for expl in explanations:
        empty = False
        combined |= expl
    if empty:
        raise InputError("no explanations to combine")
    return frozenset(combined)


def is_proof_of_overconstraint(
    explanation: Explanation,
    constraints: Mapping[str, Constraint],
) -> bool:
    """True iff the explanation contains no decision constraint."""
    return not any(constraints[c].is_decision for c in explanation)
