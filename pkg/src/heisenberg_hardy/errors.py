"""Exception hierarchy shared by every module of the toolkit."""


class HeisenbergError(Exception):
    """Base class for all errors raised by the toolkit."""


class ParameterError(HeisenbergError, ValueError):
    """A numeric parameter is outside its admissible range."""


class SingularPointError(HeisenbergError, ValueError):
    """An operator was evaluated at a point where it is not defined."""


class IntegrandError(HeisenbergError, FloatingPointError):
    """An integrand produced a non-finite value inside the integration domain.

    The offending point (in exponential coordinates) is kept on ``point``.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class CaseError(HeisenbergError, ValueError):
    """An inequality instance violates its admissibility conditions."""


class CatalogError(HeisenbergError, KeyError):
    """Unknown inequality id."""


class DomainError(HeisenbergError, ValueError):
    """A test function is not supported inside the domain of a vector field."""


class DegenerateFamilyError(HeisenbergError, ValueError):
    """Every member of a trial family gives a vanishing left-hand side."""


class ConfigError(HeisenbergError, ValueError):
    """Invalid run configuration (reported as a usage error by the CLI)."""
