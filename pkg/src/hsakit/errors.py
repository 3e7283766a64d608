"""Exception types shared across the package.

Two failure families matter to callers: inputs that violate a contract
(bad shapes, bad parameter ranges, unparseable files) and computations
that fail numerically on valid-looking input (no extrema to sift, a
vanishing envelope, every energy sample masked).  The CLI maps them to
distinct exit codes.
"""


class ContractError(ValueError):
    """Input violates a documented precondition or file contract."""


class NumericError(ArithmeticError):
    """A numeric step failed on input that satisfied the preconditions."""


class NotSiftableError(NumericError):
    """Signal has too few extrema to build upper and lower envelopes."""
