"""Domain errors raised by isolab operations.

The CLI maps every subclass of :class:`IsolabError` to exit code 1 and a JSON
error object carrying the class name.
"""


class IsolabError(Exception):
    """Base class for all domain errors."""


class NotStable(IsolabError):
    """A subspace is not stable under the Frobenius."""


class SingularSubspace(IsolabError):
    """A subspace basis has linearly dependent columns."""


class UnsupportedMultiplicity(IsolabError):
    """Stable subspaces cannot be enumerated: some slope occurs with multiplicity >= 2."""


class RankUncertain(IsolabError):
    """A rank over truncated p-power sums cannot be certified at the current cutoff."""


class RelationMismatch(IsolabError):
    """Phi-series entries disagree on their Frobenius relation."""
