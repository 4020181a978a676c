"""Exception hierarchy shared across the package.

Validation problems found by ``validate`` are returned as data, not raised;
these exceptions cover hard failures inside operations.
"""


class QbdError(Exception):
    """Base class for all package errors."""


class DomainError(QbdError, ValueError):
    """A value is outside the domain an operation is defined on."""


class CapacityError(QbdError):
    """A state would exceed the configured qubit cap."""


class ParseError(QbdError):
    """A model document is structurally malformed; message carries the locus."""


class ValidationError(QbdError):
    """A model or decision problem violates an invariant."""


class ZeroEvidenceError(QbdError):
    """The conditioning event has probability zero."""


class NoSolutionError(ZeroEvidenceError):
    """Amplitude amplification was asked to amplify an empty subspace."""


class DegenerateUtilityError(QbdError):
    """The utility-weighted good subspace has zero mass."""


class EstimateUnavailableError(QbdError):
    """A sampling run produced no usable samples for the requested estimate."""
