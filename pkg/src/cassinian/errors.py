"""Exception types shared across the package.

The CLI maps these onto exit codes: membership/range/pole errors are
usage-level problems with the inputs (exit 2), capability errors mean the
requested operation is not supported for the given domain or metric
(exit 3).
"""


class MembershipError(ValueError):
    """A point lies outside the domain it was used with."""


class ParameterRangeError(ValueError):
    """A numeric parameter violates a stated validity constraint."""


class PoleError(ValueError):
    """A sphere inversion was applied at its own center."""


class CapabilityError(RuntimeError):
    """The operation is not available for this domain/metric combination."""
