"""Shared exception types."""


class ConfigurationError(ValueError):
    """A scenario, coefficient, or config document violates a stated invariant."""


class DomainError(ValueError):
    """A function was evaluated outside its domain (e.g. iterated log below its threshold)."""


class NotApplicableError(RuntimeError):
    """An operation's regime precondition does not hold for the given inputs."""


class SolverFault(RuntimeError):
    """The time integration failed in a way that aborts the run (not blow-up)."""
