"""Exception hierarchy for serre_lab."""


class SerreLabError(ValueError):
    """Base class for domain errors raised by serre_lab."""


class DegenerateCharacteristicError(SerreLabError):
    """p is too small for alcoves to contain weights (p <= n)."""


class NotRestrictedError(SerreLabError):
    """A weight required to be restricted is not."""


class NonRegularWeightError(SerreLabError):
    """A Serre weight required to be regular is not."""


class UnsupportedRankError(SerreLabError):
    """The requested operation is only implemented for small n."""


class NoGoodPairError(SerreLabError):
    """No good pair presenting the given tame type was found."""


class NotGoodPairError(SerreLabError):
    """A pair (w, mu) is not good."""


class TriangularityError(SerreLabError):
    """The Hulsurkar matrix admits no triangular ordering or fails to invert."""


class CancellationError(SerreLabError):
    """A Jordan-Holder coefficient stayed negative after cancellation."""


class CharacterError(SerreLabError):
    """A formal character lacks a required property (e.g. W-symmetry)."""


class TameTypeError(SerreLabError):
    """Malformed or inconsistent tame type data."""


class IntervalSystemError(SerreLabError):
    """An interval system does not satisfy the required axioms."""


class UsageError(SerreLabError):
    """Malformed command-line arguments."""
