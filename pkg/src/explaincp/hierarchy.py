"""The box tree over constraints, user views as cuts, projection of
explanations onto a cut, and backward projection under the two relaxation
policies.

A box aggregates child boxes and/or low-level constraints; every constraint
is attached to exactly one box (single-parent hypothesis).  A cut is a set
of box codes such that every constraint has an ancestor-or-self box in the
cut: it captures one user's comprehension level.  Projecting an explanation
maps each of its constraints to its deepest ancestor-or-self box inside the
cut, so a view mixing the root with deeper boxes keeps the deeper ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Mapping, TYPE_CHECKING

from .constraints import Constraint
from .errors import InputError
from .store import Explanation

if TYPE_CHECKING:
    from .explain import Contradiction
    from .solver import RepropagationReport, Solver


class RelaxPolicy(Enum):
    """How a relaxed box maps back to low-level constraints."""

    ALL = "all"
    IN_EXPLANATION = "in-explanation"

    @classmethod
    def parse(cls, text: str) -> "RelaxPolicy":
        for policy in cls:
            if text in (policy.value, policy.name.lower(), policy.name):
                return policy
        raise InputError(f"unknown relaxation policy {text!r}")


@dataclass
class BoxSpec:
    """Nested build input for one box."""

    code: str
    label: str
    children: list["BoxSpec"] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)


@dataclass
class BoxNode:
    code: str
    label: str
    parent: str | None
    children: list[str] = field(default_factory=list)
    constraint_ids: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class Cut:
    name: str
    boxes: frozenset[str]


class BoxTree:
    """Tree of boxes with constraint attachments and preorder positions."""

    def __init__(self, root: BoxNode):
        self.root = root.code
        self.nodes: dict[str, BoxNode] = {root.code: root}
        self._box_of: dict[str, str] = {}
        self._preorder: dict[str, int] = {root.code: 0}

    # ---------------------------------------------------------------- queries

    def box_of(self, constraint_id: str) -> str:
        try:
            return self._box_of[constraint_id]
        except KeyError:
            raise InputError(f"constraint {constraint_id!r} is not attached to the hierarchy")

    def is_attached(self, constraint_id: str) -> bool:
        return constraint_id in self._box_of

    def preorder_index(self, code: str) -> int:
        self._check_box(code)
        return self._preorder[code]

    def ancestors_or_self(self, code: str) -> Iterator[str]:
        """Walk from `code` up to the root, deepest first."""
        self._check_box(code)
        current: str | None = code
        while current is not None:
            yield current
            current = self.nodes[current].parent

    def constraints_under(self, code: str) -> list[str]:
        """Constraint ids attached at or below `code`, in preorder."""
        self._check_box(code)
        collected: list[str] = []
        for box in self._walk(code):
            collected.extend(self.nodes[box].constraint_ids)
        return collected

    def boxes(self) -> list[str]:
        """All box codes in preorder."""
        return sorted(self.nodes, key=self._preorder.__getitem__)

    def _walk(self, code: str) -> Iterator[str]:
        yield code
        for child in self.nodes[code].children:
            yield from self._walk(child)

    def _check_box(self, code: str) -> None:
        if code not in self.nodes:
            raise InputError(f"unknown box {code!r}")

    # -------------------------------------------------------------- mutations

    def add_subtree(self, parent_code: str, spec: BoxSpec) -> list[Constraint]:
        """Graft `spec` under `parent_code`; returns the contained constraints in preorder."""
        self._check_box(parent_code)
        added = self._collect(spec, [])
        for box_spec, _ in added:
            if box_spec.code in self.nodes:
                raise InputError(f"duplicate box code {box_spec.code!r}")
        seen: set[str] = set()
        constraints: list[Constraint] = []
        for box_spec, _ in added:
            for constraint in box_spec.constraints:
                if constraint.id in seen or constraint.id in self._box_of:
                    raise InputError(f"constraint {constraint.id!r} attached to more than one box")
                seen.add(constraint.id)
                constraints.append(constraint)
        for box_spec, parent in added:
            parent_of = parent.code if parent is not None else parent_code
            self.nodes[box_spec.code] = BoxNode(
                code=box_spec.code, label=box_spec.label, parent=parent_of
            )
            self.nodes[parent_of].children.append(box_spec.code)
            for constraint in box_spec.constraints:
                self.nodes[box_spec.code].constraint_ids.append(constraint.id)
                self._box_of[constraint.id] = box_spec.code
                constraint.owner_box = box_spec.code
        self._renumber()
        return constraints

    def remove_subtree(self, code: str) -> list[str]:
        """Detach the box (and everything below); returns the detached constraint ids."""
        self._check_box(code)
        if code == self.root:
            raise InputError("cannot detach the root box")
        detached = self.constraints_under(code)
        boxes = list(self._walk(code))
        parent = self.nodes[code].parent
        assert parent is not None
        self.nodes[parent].children.remove(code)
        for box in boxes:
            for cid in self.nodes[box].constraint_ids:
                del self._box_of[cid]
            del self.nodes[box]
        self._renumber()
        return detached

    @staticmethod
    def _collect(spec: BoxSpec, acc: list, parent: BoxSpec | None = None) -> list:
        acc.append((spec, parent))
        for child in spec.children:
            BoxTree._collect(child, acc, spec)
        return acc

    def _renumber(self) -> None:
        self._preorder = {code: i for i, code in enumerate(self._walk(self.root))}


def build_hierarchy(spec: BoxSpec) -> tuple[BoxTree, list[Constraint]]:
    """Build a tree from a nested spec; returns it with the constraints in preorder.

    The preorder constraint list is the canonical posting order.
    """
    tree = BoxTree(BoxNode(code=spec.code, label=spec.label, parent=None))
    constraints: list[Constraint] = []
    for constraint in spec.constraints:
        if constraint.id in tree._box_of:
            raise InputError(f"constraint {constraint.id!r} attached to more than one box")
        tree.nodes[spec.code].constraint_ids.append(constraint.id)
        tree._box_of[constraint.id] = spec.code
        constraint.owner_box = spec.code
        constraints.append(constraint)
    for child in spec.children:
        constraints.extend(tree.add_subtree(spec.code, child))
    return tree, constraints


def validate_cut(tree: BoxTree, cut: Cut) -> list[str]:
    """Constraint ids not covered by any cut box (empty list means the cut is valid)."""
    for code in cut.boxes:
        tree._check_box(code)
    uncovered = []
    for cid in sorted(tree._box_of, key=lambda c: (tree.preorder_index(tree.box_of(c)), c)):
        if not any(box in cut.boxes for box in tree.ancestors_or_self(tree.box_of(cid))):
            uncovered.append(cid)
    return uncovered


def project(
    tree: BoxTree,
    cut: Cut,
    explanation: Explanation,
    constraints: Mapping[str, Constraint],
) -> list[str]:
    """Project an explanation onto a cut: deepest ancestor-or-self box per
    constraint, duplicates removed, ordered by tree preorder.  Decision
    constraints have no box and are skipped."""
    hit: set[str] = set()
    for cid in explanation:
        constraint = constraints.get(cid)
        if constraint is not None and constraint.is_decision:
            continue
        for box in tree.ancestors_or_self(tree.box_of(cid)):
            if box in cut.boxes:
                hit.add(box)
                break
    return sorted(hit, key=tree.preorder_index)


def backward_project(
    tree: BoxTree,
    box: str,
    explanation: Explanation,
    policy: RelaxPolicy,
) -> set[str]:
    """Constraint ids a relaxation of `box` translates to."""
    under = set(tree.constraints_under(box))
    if policy is RelaxPolicy.ALL:
        return under
    return under & explanation


def attach_box(
    tree: BoxTree,
    parent_code: str,
    spec: BoxSpec,
    solver: "Solver",
) -> "Contradiction | None":
    """Graft a subtree and post its constraints; returns the first contradiction."""
    constraints = tree.add_subtree(parent_code, spec)
    first = None
    for constraint in constraints:
        contradiction = solver.post(constraint)
        if first is None:
            first = contradiction
    return first


def detach_box(tree: BoxTree, code: str, solver: "Solver") -> "RepropagationReport":
    """Remove a subtree and retract every constraint attached at or below it."""
    detached = tree.remove_subtree(code)
    active = [cid for cid in detached if solver.is_active(cid)]
    if not active:
        from .solver import RepropagationReport

        return RepropagationReport(restored=(), contradiction=None)
    return solver.retract_many(active)
