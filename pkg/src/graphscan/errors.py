"""Exception types shared across the package."""


class GraphScanError(Exception):
    """Base class for all graphscan errors."""


class InputError(GraphScanError):
    """Invalid argument, malformed file, or out-of-range value."""


class DimensionError(GraphScanError):
    """Inputs that disagree on node count or vector length."""


class CapacityError(GraphScanError):
    """Instance too large for an enumeration-based routine."""


class NumericError(GraphScanError):
    """A computation produced a non-finite value."""


class DomainError(GraphScanError):
    """Arguments outside the valid domain of a closed-form expression."""
