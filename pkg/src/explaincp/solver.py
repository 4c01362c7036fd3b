"""Fixpoint propagation with explanation recording, explanation-directed
retraction, and search over decision constraints.

Search never backtracks chronologically: a contradiction is resolved by
retracting the most recently posted decision occurring in its explanation,
recording the eliminating removal it implies, and re-propagating.  When a
contradiction explanation contains no decision at all the problem is proved
over-constrained and the proof is returned.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .constraints import Constraint, EqConst
from .errors import StateError
from .explain import Contradiction, contradiction_explanation, eliminating_from_nogood
from .store import DomainStore, RemovalResult, VariableDecl

#: Hard cap on solve-loop iterations; desk-scale problems stay far below it.
_MAX_STEPS = 1_000_000

_DECISION_PREFIX = "!d"


@dataclass(frozen=True)
class Solution:
    assignment: dict[str, int]


@dataclass(frozen=True)
class OverConstrained:
    contradiction: Contradiction


SolveOutcome = Solution | OverConstrained


@dataclass(frozen=True)
class RepropagationReport:
    """What a retraction undid and whether re-propagation failed."""

    restored: tuple[tuple[str, int], ...]
    contradiction: Contradiction | None


class Solver:
    """One problem's propagation and search state (single-threaded)."""

    def __init__(self, variables: Iterable[VariableDecl]):
        self.store = DomainStore(variables)
        #: every constraint ever posted, in first-posting order
        self.constraints: dict[str, Constraint] = {}
        self.active: set[str] = set()
        self.decisions: list[str] = []
        self._queue: deque[str] = deque()
        self._queued: set[str] = set()
        self._watchers: dict[str, set[str]] = {v: set() for v in self.store.variables}
        self._order: dict[str, int] = {}
        self._decision_counter = 0

    # ---------------------------------------------------------------- queries

    def domains(self) -> dict[str, frozenset[int]]:
        return self.store.domains()

    def is_active(self, constraint_id: str) -> bool:
        return constraint_id in self.active

    def posting_index(self, constraint_id: str) -> int:
        """Position of a constraint in first-posting order."""
        try:
            return self._order[constraint_id]
        except KeyError:
            raise StateError(f"constraint {constraint_id!r} was never posted")

    def active_constraints(self) -> list[Constraint]:
        """Active constraints in posting order."""
        return [c for cid, c in self.constraints.items() if cid in self.active]

    def assignment(self) -> dict[str, int]:
        """The assignment formed by the current all-singleton domains."""
        result: dict[str, int] = {}
        for var in self.store.variables:
            domain = self.store.domain(var)
            if len(domain) != 1:
                raise StateError(f"variable {var!r} is not singleton")
            (result[var],) = domain
        return result

    # ------------------------------------------------------------ post/retract

    def post(self, constraint: Constraint) -> Contradiction | None:
        """Activate a constraint and propagate to fixpoint.

        Re-posting a previously retracted constraint (same object) is
        allowed; a fresh constraint with a known id is rejected.  On
        wipeout the contradiction is returned and the state is left at
        the contradictory point for the caller to resolve.
        """
        cid = constraint.id
        if cid in self.active:
            raise StateError(f"constraint {cid!r} is already active")
        known = self.constraints.get(cid)
        if known is not None and known is not constraint:
            raise StateError(f"constraint id {cid!r} is already taken")
        for var in constraint.scope():
            self.store.decl(var)  # raises on unknown variable
        if known is None:
            self._order[cid] = len(self._order)
            self.constraints[cid] = constraint
        self.active.add(cid)
        if constraint.is_decision:
            self.decisions.append(cid)
        for var in constraint.scope():
            self._watchers[var].add(cid)
        self._enqueue(cid)
        return self.propagate_fixpoint()

    def retract(self, constraint_id: str) -> RepropagationReport:
        """Retract one constraint, de-propagate its effects and re-propagate."""
        return self.retract_many([constraint_id])

    def retract_many(self, constraint_ids: Sequence[str]) -> RepropagationReport:
        """Retract several constraints, then re-propagate once.

        Every live removal citing any of them is undone; constraints whose
        scope regained a value are re-run, so surviving and re-derived
        removals all cite active constraints only.  The resulting domains
        equal scratch propagation without the retracted constraints
        (unless propagation fails, in which case the contradiction is
        reported in the returned report).
        """
        restored = self._retract_restore(constraint_ids)
        contradiction = self.propagate_fixpoint()
        return RepropagationReport(restored=tuple(restored), contradiction=contradiction)

    def _retract_restore(self, constraint_ids: Sequence[str]) -> list[tuple[str, int]]:
        """Deactivate constraints and restore the removals citing them (no fixpoint)."""
        ids = list(constraint_ids)
        for cid in ids:
            if cid not in self.active:
                raise StateError(f"constraint {cid!r} is not active")
        for cid in ids:
            self.active.discard(cid)
            constraint = self.constraints[cid]
            for var in constraint.scope():
                self._watchers[var].discard(cid)
            if constraint.is_decision:
                self.decisions.remove(cid)
        restored = self.store.restore_citing(ids)
        for var in {var for var, _ in restored}:
            self._enqueue_watchers(var)
        return restored

    # ------------------------------------------------------------- propagation

    def propagate_fixpoint(self) -> Contradiction | None:
        """Drain the queue, committing removals, until fixpoint or first wipeout."""
        while self._queue:
            cid = self._queue.popleft()
            self._queued.discard(cid)
            if cid not in self.active:
                continue
            constraint = self.constraints[cid]
            for var, value, explanation in constraint.propagate(self.store):
                result = self.store.remove_value(var, value, explanation)
                if result is RemovalResult.ALREADY_ABSENT:
                    continue
                self._enqueue_watchers(var)
                if result is RemovalResult.WIPEOUT:
                    return self.contradiction_for(var)
        return None

    def contradiction_for(self, var: str) -> Contradiction:
        return contradiction_explanation(self.store, var, self.constraints)

    def _enqueue(self, cid: str) -> None:
        if cid not in self._queued:
            self._queue.append(cid)
            self._queued.add(cid)

    def _enqueue_watchers(self, var: str) -> None:
        for cid in sorted(self._watchers[var], key=self._order.__getitem__):
            self._enqueue(cid)

    # ------------------------------------------------------------------ search

    def solve(self) -> SolveOutcome:
        """Search for a solution, or prove the active constraints over-constrained."""
        contradiction: Contradiction | None = None
        for _ in range(_MAX_STEPS):
            if contradiction is None:
                contradiction = self.propagate_fixpoint() or self._initial_contradiction()
            if contradiction is None:
                var = self._pick_branch_variable()
                if var is None:
                    return Solution(self.assignment())
                value = min(self.store.domain(var))
                contradiction = self.post(self._new_decision(var, value))
                continue
            if contradiction.is_decision_free():
                return OverConstrained(contradiction)
            contradiction = self._resolve(contradiction)
        raise RuntimeError("search did not terminate")

    def _initial_contradiction(self) -> Contradiction | None:
        """Pick up an empty domain that produced no fresh wipeout event,
        e.g. when re-solving a state that was already contradictory."""
        for var in self.store.wiped_variables():
            return self.contradiction_for(var)
        return None

    def _resolve(self, contradiction: Contradiction) -> Contradiction | None:
        """Undo the most recent decision in the nogood and record what it taught us."""
        dc_id = max(contradiction.decisions, key=self.decisions.index)
        decision = self.constraints[dc_id]
        (var, value), explanation = eliminating_from_nogood(contradiction, decision)
        self._retract_restore([dc_id])
        result = self.store.remove_value(var, value, explanation)
        if result is RemovalResult.ALREADY_ABSENT:
            return None
        self._enqueue_watchers(var)
        if result is RemovalResult.WIPEOUT:
            return self.contradiction_for(var)
        return None

    def resolve_decisions(self, contradiction: Contradiction | None) -> Contradiction | None:
        """Unwind decisions per the search rule until the state is consistent
        or the contradiction is decision-free (which is then returned)."""
        while contradiction is not None and not contradiction.is_decision_free():
            contradiction = self._resolve(contradiction) or self.propagate_fixpoint()
        return contradiction

    def _pick_branch_variable(self) -> str | None:
        """Smallest non-singleton current domain, ties by declaration order."""
        best: str | None = None
        best_size = 0
        for var in self.store.variables:
            size = len(self.store.domain(var))
            if size > 1 and (best is None or size < best_size):
                best, best_size = var, size
        return best

    def _new_decision(self, var: str, value: int) -> EqConst:
        self._decision_counter += 1
        return EqConst(
            id=f"{_DECISION_PREFIX}{self._decision_counter}",
            x=var,
            k=value,
            is_decision=True,
        )


def solver_for(
    variables: Iterable[VariableDecl],
    constraints: Iterable[Constraint] = (),
) -> tuple[Solver, Contradiction | None]:
    """Build a solver and post `constraints` in order.

    Returns the solver together with the first contradiction hit while
    posting (posting continues past it, so the full set ends up active).
    """
    solver = Solver(variables)
    first: Contradiction | None = None
    for constraint in constraints:
        contradiction = solver.post(constraint)
        if first is None:
            first = contradiction
    return solver, first
