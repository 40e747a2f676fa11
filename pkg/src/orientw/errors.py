"""Exception types shared across the package.

The CLI maps these onto exit codes: PreconditionError and ParseError are
usage-level failures (exit 1), InfeasibleInstanceError means the instance
itself admits no walk at all (exit 2).
"""


class GraphError(ValueError):
    """Structurally malformed graph input (bad ids, negative weights)."""


class ParseError(ValueError):
    """Instance file that cannot be parsed or fails validation."""


class PreconditionError(ValueError):
    """An operation was called on an instance outside its stated domain."""


class ContainmentError(PreconditionError):
    """A restricted window escapes the window it must be contained in."""


class InfeasibleInstanceError(Exception):
    """No feasible walk exists (for example d(s, t) exceeds the budget)."""
