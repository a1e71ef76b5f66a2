"""Exception types shared across the package.

Every module-level error condition gets its own class so callers (and the
CLI exit-code mapping) can distinguish them without string matching.
"""


class OrbicountError(Exception):
    """Base class for all package errors."""


class NotHyperbolic(OrbicountError):
    """An isometry-level operation required a hyperbolic element."""


class NonHyperbolic(OrbicountError):
    """A signature with non-negative orbifold Euler characteristic."""


class RootFindFailed(OrbicountError):
    """The polygon root-find did not close.

    Carries the bracketing information that was tried so the failure is
    reproducible.
    """

    def __init__(self, message, brackets=None):
        super().__init__(message)
        self.brackets = brackets


class UnknownGenerator(OrbicountError):
    """A word referenced a generator the group does not have."""


class UnsupportedSignature(OrbicountError):
    """The requested signature is outside the supported family."""


class SlackCapReached(OrbicountError):
    """Orbit enumeration hit the slack cap before stabilizing.

    Both member counts are reported; the enumeration never silently
    truncates.
    """

    def __init__(self, message, count_lo, count_hi):
        super().__init__(message)
        self.count_lo = count_lo
        self.count_hi = count_hi


class GridExceedsBall(OrbicountError):
    """A counting grid asked for lengths beyond the enumerated ball."""


class InsufficientData(OrbicountError):
    """Not enough usable points for an exponent fit."""


class StepTooLarge(OrbicountError):
    """Geodesic integration exceeded the conserved-quantity drift budget."""


class SystoleSearchInconclusive(OrbicountError):
    """Systole search hit its word-length cap with the minimum near the
    decision threshold."""


class ConePointEnumerationIncomplete(OrbicountError):
    """Cone-point lift enumeration could not cover the requested region."""


class DomainError(OrbicountError):
    """Input outside the mathematical domain of an identity check."""


class ConfigError(OrbicountError):
    """Malformed run configuration (CLI exit code 2)."""
