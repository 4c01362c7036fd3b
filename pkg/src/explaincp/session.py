"""Interactive negotiation over an over-constrained problem.

A session drives one user's view: it solves, presents conflicts projected
onto the view's cut, relaxes the box the user picks, and restores relaxed
boxes on request.  Restoring may require further concessions; constraints
of boxes the user already relaxed are retracted automatically, while a
conflict implicating only never-relaxed constraints refuses the restore
and rolls the session back.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .errors import InputError, StateError
from .explain import Contradiction
from .hierarchy import BoxTree, Cut, RelaxPolicy, backward_project, project, validate_cut
from .solver import Solution, Solver
from .store import Explanation

if TYPE_CHECKING:
    from .problem import Problem


@dataclass(frozen=True)
class Idle:
    pass


@dataclass(frozen=True)
class ConflictItem:
    index: int
    code: str
    label: str


@dataclass(frozen=True)
class Conflict:
    items: tuple[ConflictItem, ...]
    explanation: Explanation


@dataclass(frozen=True)
class Solved:
    assignment: dict[str, int]


SessionStatus = Idle | Conflict | Solved


@dataclass(frozen=True)
class RelaxOutcome:
    removed: tuple[str, ...]
    status: SessionStatus


@dataclass(frozen=True)
class Restored:
    """The box was re-posted; `extra` lists further concessions per box."""

    extra: dict[str, tuple[str, ...]] = field(default_factory=dict)


@dataclass(frozen=True)
class Refused:
    """Restoring would conflict with never-relaxed constraints; rolled back."""

    conflict: tuple[str, ...]


RestoreOutcome = Restored | Refused


class Session:
    """Live negotiation state for one user view (single mutation stream)."""

    def __init__(self, solver: Solver, tree: BoxTree, view: Cut, policy: RelaxPolicy):
        uncovered = validate_cut(tree, view)
        if uncovered:
            raise InputError(
                f"view {view.name!r} does not cover constraints: {', '.join(uncovered)}"
            )
        self.solver = solver
        self.tree = tree
        self.view = view
        self.policy = policy
        #: box code -> retracted constraint ids, in retraction order
        self.relaxed: dict[str, list[str]] = {}
        self.status: SessionStatus = Idle()

    # ------------------------------------------------------------------- runs

    def run(self) -> SessionStatus:
        """Solve and translate the outcome into the session status."""
        outcome = self.solver.solve()
        if isinstance(outcome, Solution):
            self.status = Solved(assignment=outcome.assignment)
        else:
            self.status = self._conflict_status(outcome.contradiction.explanation)
        return self.status

    def _conflict_status(self, explanation: Explanation) -> Conflict:
        boxes = self._project(explanation)
        items = tuple(
            ConflictItem(index=i + 1, code=code, label=self.tree.nodes[code].label)
            for i, code in enumerate(boxes)
        )
        return Conflict(items=items, explanation=explanation)

    def _project(self, explanation: Explanation) -> list[str]:
        return project(self.tree, self.view, explanation, self.solver.constraints)

    # ------------------------------------------------------------------ relax

    def relax(self, conflict_index: int, policy: RelaxPolicy | None = None) -> RelaxOutcome:
        """Relax the box at `conflict_index` (1-based; 0 declines).

        The box's constraints are mapped through the relaxation policy,
        retracted, ledgered, and the problem is re-solved.
        """
        if not isinstance(self.status, Conflict):
            raise StateError("relax requires a conflict")
        if conflict_index == 0:
            return RelaxOutcome(removed=(), status=self.status)
        if not 1 <= conflict_index <= len(self.status.items):
            raise InputError(f"conflict index {conflict_index} out of range")
        box = self.status.items[conflict_index - 1].code
        targets = backward_project(
            self.tree, box, self.status.explanation, policy or self.policy
        )
        removed = sorted(
            (cid for cid in targets if self.solver.is_active(cid)),
            key=self.solver.posting_index,
        )
        self.solver.retract_many(removed)
        self.relaxed.setdefault(box, []).extend(removed)
        self.run()
        return RelaxOutcome(removed=tuple(removed), status=self.status)

    # ---------------------------------------------------------------- restore

    def restore(self, box: str) -> RestoreOutcome:
        """Re-post a relaxed box, conceding other relaxed boxes' constraints as needed.

        A contradiction met while re-posting is negotiated: constraints of
        other currently relaxed boxes occurring in its explanation are
        retracted automatically (the user already conceded those boxes),
        and decisions are unwound like the search does.  A contradiction
        implicating neither rolls everything back and refuses the restore.
        """
        if box not in self.relaxed:
            raise StateError(f"box {box!r} is not relaxed")
        snapshot = self._snapshot()
        extra: dict[str, list[str]] = {}

        # Decisions are search artifacts; unwinding them first lets the box
        # negotiate against the problem constraints alone (the final solve
        # re-decides), so a refusal always names a real constraint conflict.
        if self.solver.decisions:
            self.solver.retract_many(list(self.solver.decisions))

        for cid in sorted(self.relaxed[box], key=self.solver.posting_index):
            contradiction = self.solver.post(self.solver.constraints[cid])
            while contradiction is not None:
                conceded, contradiction = self._concede(contradiction, restoring=box, extra=extra)
                if conceded:
                    continue
                assert contradiction is not None
                if contradiction.decisions:
                    contradiction = self.solver.resolve_decisions(contradiction)
                    continue
                return self._refuse(snapshot, contradiction.explanation)
        del self.relaxed[box]
        self.run()
        return Restored(extra={code: tuple(ids) for code, ids in extra.items()})

    def _concede(
        self,
        contradiction: Contradiction,
        restoring: str,
        extra: dict[str, list[str]],
    ) -> tuple[bool, Contradiction | None]:
        """Retract the explanation's members owned by other relaxed boxes.

        Returns ``(False, contradiction)`` unchanged when there are none
        (the restore must be refused), else ``(True, residue)`` where the
        residue is a contradiction hit while re-propagating, if any.
        """
        concessions = [
            cid
            for cid in sorted(contradiction.explanation, key=self.solver.posting_index)
            if self.tree.is_attached(cid)
            and self.tree.box_of(cid) != restoring
            and self.tree.box_of(cid) in self.relaxed
            and self.solver.is_active(cid)
        ]
        if not concessions:
            return False, contradiction
        report = self.solver.retract_many(concessions)
        for cid in concessions:
            owner = self.tree.box_of(cid)
            self.relaxed[owner].append(cid)
            extra.setdefault(owner, []).append(cid)
        return True, report.contradiction

    def _refuse(self, snapshot, explanation: Explanation) -> Refused:
        conflict = tuple(self._project(explanation))
        self._rollback(snapshot)
        return Refused(conflict=conflict)

    # --------------------------------------------------------------- snapshot

    def _snapshot(self):
        return (
            copy.deepcopy(self.solver),
            {code: list(ids) for code, ids in self.relaxed.items()},
            self.status,
        )

    def _rollback(self, snapshot) -> None:
        self.solver, self.relaxed, self.status = snapshot


def start_session(problem: "Problem", view_name: str, policy: RelaxPolicy) -> Session:
    """Create an idle session on a fresh solver for one of the problem's views."""
    view = problem.views.get(view_name)
    if view is None:
        raise InputError(f"unknown view {view_name!r}")
    return Session(problem.fresh_solver(), problem.tree, view, policy)
