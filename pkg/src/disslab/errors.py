"""Exception types shared across the package."""


class DisslabError(Exception):
    """Base class for all package-specific errors."""


class DomainError(DisslabError, ValueError):
    """An argument lies outside the physical domain (e.g. rho <= 0)."""


class TwoShockRegimeError(DisslabError, RuntimeError):
    """Riemann data do not produce two compressive shocks."""


class NumericalError(DisslabError, RuntimeError):
    """A bracketing or iteration failed; the message carries diagnostics."""


class ReductionError(DisslabError, ValueError):
    """Tangential reduction requested for inconsistent subsolution data."""


class SingularEliminationError(DisslabError, ValueError):
    """rho1 coincides with an outer density, so an interface speed is undefined."""


class PartitionViolationError(DisslabError, RuntimeError):
    """Every root of the interface system yields nu_minus >= nu_plus."""


class InfeasibleParametersError(DisslabError, RuntimeError):
    """The interface system has no root for the fixed (rho1, C)."""


class CertificateError(DisslabError, RuntimeError):
    """A certificate failed re-validation."""
