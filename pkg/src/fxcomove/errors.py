"""Exception hierarchy shared by every module.

Input-side problems (bad files, bad configuration, invalid data values)
derive from :class:`InputError`; failures inside a computation derive from
:class:`ComputationError`. The CLI maps the two families to exit codes 2
and 1 respectively.
"""


class FxComoveError(Exception):
    """Base class for all package errors."""


class InputError(FxComoveError):
    """Problem with user-supplied data or configuration."""


class IngestionError(InputError, ValueError):
    """A data file could not be turned into a valid panel."""


class ConfigError(InputError, ValueError):
    """A configuration value violates its documented invariants."""


class ComputationError(FxComoveError):
    """A numerical procedure could not be completed."""


class DomainError(ComputationError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class SizeError(ComputationError, ValueError):
    """Not enough observations (or mismatched dimensions) for an operation."""


class NumericalError(ComputationError, ArithmeticError):
    """A matrix was singular or a recursion diverged."""


class SimulationError(ComputationError):
    """A simulation specification is infeasible or the recursion diverged."""
