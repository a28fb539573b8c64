"""Exception hierarchy.

Everything derives from :class:`WMonoError`, itself a ``ValueError``, so
callers that only care about bad input can catch ``ValueError``.
"""


class WMonoError(ValueError):
    """Base class for all input and consistency errors raised by wmono."""


class DimensionCapError(WMonoError):
    """A Hilbert space would exceed the configured amplitude cap."""


class DimensionMismatchError(WMonoError):
    pass


class NotHermitianError(WMonoError):
    pass


class SpecError(WMonoError):
    """Malformed or unnormalized W-class / mixture specification."""


class RankError(WMonoError):
    """Input density matrix has numerical rank above what the routine supports."""


class CutError(WMonoError):
    pass


class PartitionError(WMonoError):
    pass


class PartitionOverlapError(PartitionError):
    pass


class PartitionGapError(PartitionError):
    pass


class EmptyBlockError(PartitionError):
    pass
