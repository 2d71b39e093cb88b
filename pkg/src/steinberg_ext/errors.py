"""Exception hierarchy shared across the package."""


class SteinbergExtError(Exception):
    """Base class for all errors raised by this package."""


class ConfigurationError(SteinbergExtError):
    """Invalid user-supplied configuration (series/rank pair, ring, mask)."""


class ResourceLimitError(SteinbergExtError):
    """An enumeration would exceed its configured cap."""


class ContractError(SteinbergExtError):
    """An internal precondition or invariant was violated (d*d != 0,
    non-minimal double-coset representative, inconsistent tables)."""


class RingAssumptionError(SteinbergExtError):
    """The coefficient ring is too degenerate for the vanishing argument:
    a required q-power unit does not exist."""


class VerificationError(SteinbergExtError):
    """A closed-form answer and an independently built complex disagree.

    ``payload`` carries the diagnostic dump (both tables and, when
    available, the offending complexes).
    """

    def __init__(self, message: str, payload: dict | None = None):
        super().__init__(message)
        self.payload = payload or {}
