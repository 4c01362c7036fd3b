"""Exception hierarchy shared by the solver, hierarchy and I/O layers."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class InputError(SolverError):
    """A caller supplied an invalid argument (unknown variable, bad value, ...)."""


class StateError(SolverError):
    """An operation was invoked in a state that does not admit it."""


class SchemaError(SolverError):
    """A problem file failed structural or semantic validation.

    `path` points at the offending location, e.g. ``hierarchy/children/1/constraints/0/id``.
    """

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)
