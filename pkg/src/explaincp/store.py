"""Variables, finite integer domains, and the per-value removal ledger.

Every value that leaves a domain is backed by exactly one live
`RemovalRecord` carrying the explanation (a set of constraint ids) that
justifies the removal.  Restoring a constraint's effects deletes the
records citing it and puts the values back, which keeps every surviving
explanation relevant to the currently active constraints.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator

from .errors import InputError

# An explanation is a set of constraint ids (decision constraints included).
Explanation = frozenset[str]


@dataclass(frozen=True)
class VariableDecl:
    """A variable with an inclusive initial domain [lower..upper]."""

    name: str
    lower: int
    upper: int

    def __post_init__(self) -> None:
        if self.lower > self.upper:
            raise InputError(f"variable {self.name!r}: lower {self.lower} > upper {self.upper}")

    def values(self) -> range:
        return range(self.lower, self.upper + 1)


@dataclass(frozen=True)
class RemovalRecord:
    """One removed value together with its eliminating explanation."""

    variable: str
    value: int
    explanation: Explanation
    stamp: int


class RemovalResult(Enum):
    """Outcome of a single value removal."""

    REMOVED = "removed"
    ALREADY_ABSENT = "already_absent"
    #: The removal succeeded and emptied the variable's domain.
    WIPEOUT = "wipeout"


class DomainStore:
    """Mutable domain state for one problem.

    Single-writer: one mutation stream per store.  Readers may take
    immutable snapshots (`domains()`) between mutations.
    """

    def __init__(self, variables: Iterable[VariableDecl]):
        self._decls: dict[str, VariableDecl] = {}
        self._original: dict[str, frozenset[int]] = {}
        self._present: dict[str, set[int]] = {}
        # (variable, value) -> live record; at most one per pair.
        self._records: dict[tuple[str, int], RemovalRecord] = {}
        self._next_stamp = 1
        for decl in variables:
            if decl.name in self._decls:
                raise InputError(f"duplicate variable name {decl.name!r}")
            self._decls[decl.name] = decl
            self._original[decl.name] = frozenset(decl.values())
            self._present[decl.name] = set(decl.values())

    # ------------------------------------------------------------------ views

    @property
    def variables(self) -> tuple[str, ...]:
        """Variable names in declaration order."""
        return tuple(self._decls)

    def decl(self, var: str) -> VariableDecl:
        self._check_var(var)
        return self._decls[var]

    def original(self, var: str) -> frozenset[int]:
        self._check_var(var)
        return self._original[var]

    def domain(self, var: str) -> frozenset[int]:
        self._check_var(var)
        return frozenset(self._present[var])

    def domains(self) -> dict[str, frozenset[int]]:
        """Immutable snapshot of every current domain."""
        return {v: frozenset(d) for v, d in self._present.items()}

    def is_wiped(self, var: str) -> bool:
        self._check_var(var)
        return not self._present[var]

    def wiped_variables(self) -> list[str]:
        return [v for v in self._decls if not self._present[v]]

    def records(self) -> Iterator[RemovalRecord]:
        """All live removal records, in stamp order."""
        return iter(sorted(self._records.values(), key=lambda r: r.stamp))

    def records_for(self, var: str) -> list[RemovalRecord]:
        self._check_var(var)
        return sorted(
            (r for r in self._records.values() if r.variable == var),
            key=lambda r: r.stamp,
        )

    # -------------------------------------------------------------- mutations

    def remove_value(self, var: str, value: int, explanation: Explanation) -> RemovalResult:
        """Remove `value` from `var`'s domain, recording `explanation`.

        Returns ALREADY_ABSENT without touching the ledger when the value
        is gone (a value cannot be removed twice), and WIPEOUT when this
        removal empties the domain (the record is still created, so a
        contradiction explanation can be derived from the ledger).
        """
        self._check_var(var)
        if value not in self._original[var]:
            raise InputError(f"value {value} outside original domain of {var!r}")
        if not explanation:
            raise InputError(f"refusing to remove {var!r}={value} with an empty explanation")
        present = self._present[var]
        if value not in present:
            return RemovalResult.ALREADY_ABSENT
        present.discard(value)
        self._records[(var, value)] = RemovalRecord(
            variable=var,
            value=value,
            explanation=frozenset(explanation),
            stamp=self._next_stamp,
        )
        self._next_stamp += 1
        return RemovalResult.WIPEOUT if not present else RemovalResult.REMOVED

    def explanation_for(self, var: str, value: int) -> Explanation | None:
        """Explanation of the live removal of (var, value), or None if present."""
        self._check_var(var)
        record = self._records.get((var, value))
        return record.explanation if record is not None else None

    def restore_citing(self, constraint_ids: Iterable[str]) -> list[tuple[str, int]]:
        """Delete every record citing any of `constraint_ids` and restore its value.

        Returns the restored (variable, value) pairs in stamp order.
        Stamps of surviving records are not renumbered.
        """
        ids = frozenset(constraint_ids)
        doomed = [r for r in self._records.values() if r.explanation & ids]
        doomed.sort(key=lambda r: r.stamp)
        for record in doomed:
            del self._records[(record.variable, record.value)]
            self._present[record.variable].add(record.value)
        return [(r.variable, r.value) for r in doomed]

    # ---------------------------------------------------------------- helpers

    def _check_var(self, var: str) -> None:
        if var not in self._decls:
            raise InputError(f"unknown variable {var!r}")
