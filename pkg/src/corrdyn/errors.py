"""Shared exception types."""


class CorrdynError(Exception):
    """Base class for library errors."""


class BudgetExceededError(CorrdynError):
    """An explicit degree/depth/size budget was exceeded."""


class RootFindingError(CorrdynError):
    """The simultaneous root iteration failed to certify.

    Carries the last residuals so the failure is never silent.
    """

    def __init__(self, message, residuals=None, scale=None):
        super().__init__(message)
        self.residuals = residuals
        self.scale = scale


class ExtensionRequiredError(CorrdynError):
    """Normalization needs radicals that do not exist in the coefficient field."""


class CertificateValidationError(CorrdynError):
    """A period certificate failed its independent re-validation."""
