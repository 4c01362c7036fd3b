"""The four low-level constraint kinds and their explanation-emitting propagators.

Kinds:

* ``NeqVars(x, y)``    -- x != y, pruning only against singleton peers
* ``GeqPlus(x, y, k)`` -- x >= y + k, bounds consistency (interior holes ignored)
* ``NeqConst(x, k)``   -- x != k
* ``EqConst(x, k)``    -- x == k; the only kind usable as a decision constraint

Propagators return the removals they mandate as ``(variable, value,
explanation)`` triples without touching the store; committing them is the
propagation loop's job.  Every emitted explanation contains the
constraint's own id plus the explanations of the peer removals that the
pruning relies on, so that a removal survives retraction of unrelated
constraints exactly when it is re-derivable without them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .errors import InputError
from .store import DomainStore, Explanation

PendingRemoval = tuple[str, int, Explanation]


@dataclass(eq=False)
class Constraint:
    """Base class; concrete kinds define scope, evaluation and propagation."""

    id: str
    is_decision: bool = field(default=False, kw_only=True)
    owner_box: str | None = field(default=None, kw_only=True)

    def __post_init__(self) -> None:
        if self.is_decision and not isinstance(self, EqConst):
            raise InputError(f"constraint {self.id!r}: only assignments can be decisions")

    def scope(self) -> tuple[str, ...]:
        raise NotImplementedError

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        """Truth of the constraint under a total assignment of its scope."""
        raise NotImplementedError

    def propagate(self, store: DomainStore) -> list[PendingRemoval]:
        """Removals mandated by the current domains, with explanations."""
        raise NotImplementedError

    def _value(self, assignment: Mapping[str, int], var: str) -> int:
        try:
            return assignment[var]
        except KeyError:
            raise InputError(f"constraint {self.id!r}: variable {var!r} missing from assignment")


@dataclass(eq=False)
class NeqVars(Constraint):
    x: str = ""
    y: str = ""

    def scope(self) -> tuple[str, ...]:
        return (self.x, self.y)

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        return self._value(assignment, self.x) != self._value(assignment, self.y)

    def propagate(self, store: DomainStore) -> list[PendingRemoval]:
        pending: list[PendingRemoval] = []
        for var, peer in ((self.x, self.y), (self.y, self.x)):
            peer_domain = store.domain(peer)
            if len(peer_domain) != 1:
                continue
            (b,) = peer_domain
            if b not in store.domain(var):
                continue
            expl = {self.id}
            for other in store.original(peer):
                if other == b:
                    continue
                expl |= store.explanation_for(peer, other) or frozenset()
            pending.append((var, b, frozenset(expl)))
        return pending

    def __str__(self) -> str:
        return f"{self.x} !== {self.y}"


@dataclass(eq=False)
class GeqPlus(Constraint):
    x: str = ""
    y: str = ""
    k: int = 0

    def scope(self) -> tuple[str, ...]:
        return (self.x, self.y)

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        return self._value(assignment, self.x) >= self._value(assignment, self.y) + self.k

    def propagate(self, store: DomainStore) -> list[PendingRemoval]:
        dx = store.domain(self.x)
        dy = store.domain(self.y)
        if not dx or not dy:
            return []
        pending: list[PendingRemoval] = []

        # x side: every a < min(y) + k goes, supported by the removals below min(y).
        min_y = min(dy)
        low = [a for a in sorted(dx) if a < min_y + self.k]
        if low:
            expl = {self.id}
            for b in store.original(self.y):
                if b < min_y:
                    expl |= store.explanation_for(self.y, b) or frozenset()
            frozen = frozenset(expl)
            pending.extend((self.x, a, frozen) for a in low)

        # y side: every b > max(x) - k goes, supported by the removals above max(x).
        max_x = max(dx)
        high = [b for b in sorted(dy) if b > max_x - self.k]
        if high:
            expl = {self.id}
            for a in store.original(self.x):
                if a > max_x:
                    expl |= store.explanation_for(self.x, a) or frozenset()
            frozen = frozenset(expl)
            pending.extend((self.y, b, frozen) for b in high)
        return pending

    def __str__(self) -> str:
        if self.k == 0:
            return f"{self.x} >= {self.y}"
        sign = "+" if self.k > 0 else "-"
        return f"{self.x} >= {self.y} {sign} {abs(self.k)}"


@dataclass(eq=False)
class NeqConst(Constraint):
    x: str = ""
    k: int = 0

    def scope(self) -> tuple[str, ...]:
        return (self.x,)

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        return self._value(assignment, self.x) != self.k

    def propagate(self, store: DomainStore) -> list[PendingRemoval]:
        if self.k in store.domain(self.x):
            return [(self.x, self.k, frozenset({self.id}))]
        return []

    def __str__(self) -> str:
        return f"{self.x} !== {self.k}"


@dataclass(eq=False)
class EqConst(Constraint):
    x: str = ""
    k: int = 0

    def scope(self) -> tuple[str, ...]:
        return (self.x,)

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        return self._value(assignment, self.x) == self.k

    def propagate(self, store: DomainStore) -> list[PendingRemoval]:
        expl = frozenset({self.id})
        return [(self.x, a, expl) for a in sorted(store.domain(self.x)) if a != self.k]

    def __str__(self) -> str:
        return f"{self.x} == {self.k}"


def evaluate(constraint: Constraint, assignment: Mapping[str, int]) -> bool:
    return constraint.evaluate(assignment)


def propagate_constraint(constraint: Constraint, store: DomainStore) -> list[PendingRemoval]:
    return constraint.propagate(store)
