"""Exception and warning types shared across the package."""


class HHLCertError(Exception):
    """Base class for all package errors."""


class DomainError(HHLCertError, ValueError):
    """An argument lies outside the domain of a function (e.g. lambda <= 0)."""


class ParameterError(HHLCertError, ValueError):
    """A model parameter is invalid (e.g. kappa < 1)."""


class ConfigurationError(HHLCertError, ValueError):
    """A grid, kernel, or run configuration is unusable."""


class InputError(HHLCertError, ValueError):
    """Matrix or vector input is malformed."""


class SingularMatrixError(InputError):
    pass


class NumericalError(HHLCertError, RuntimeError):
    """A numerical engine failed to converge or produced an inconsistent result."""


class DegenerateStateError(HHLCertError, ValueError):
    """A filtered state has zero squared mass."""


class SpectrumWarning(UserWarning):
    """Eigenvalues fall outside [1/kappa, 1]; filters are total so this is only advisory."""
