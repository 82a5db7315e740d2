"""Exception types shared across the package."""


class SliceRankError(Exception):
    """Base class for all package-specific errors."""


class FormatError(SliceRankError):
    """Malformed input file: bad structure, indices, values, or duplicates."""


class EnumerationLimitError(SliceRankError):
    """The certificate search space exceeds the configured enumeration limit."""


class VerificationError(SliceRankError):
    """A certificate or decomposition failed a required verification."""


class PreconditionError(SliceRankError):
    """An operation was called with arguments violating its contract."""


class NonCanonicalBasisError(PreconditionError):
    """A subspace basis is not in reduced echelon form."""
