"""Exception types shared across the package."""


class WiretapError(Exception):
    """Base class for all package-specific errors."""


class NotPositiveDefinite(WiretapError):
    """Cholesky-type factorization hit a non-positive pivot."""


class NotPsd(WiretapError):
    """Matrix has an eigenvalue below the PSD tolerance."""


class ConvergenceFailure(WiretapError):
    """An iterative eigen/SVD solver failed to converge."""


class RankDeficient(WiretapError):
    """Stacked matrix for the GSVD is numerically rank deficient."""


class QuadratureFailure(WiretapError):
    """Estimated quadrature error of the correlation integral too large."""


class NoConvergence(WiretapError):
    """Fixed-point iteration exceeded its iteration cap."""


class AllZeroGains(WiretapError):
    """Water-filling called with no strictly positive channel gain."""


class BisectionFailure(WiretapError):
    """No multiplier in the search bracket meets the power budget."""


class ParseError(WiretapError):
    """Experiment configuration file could not be parsed."""


class ValidationError(WiretapError):
    """Experiment configuration violates a constraint."""


class UnknownPreset(WiretapError):
    """Requested figure preset does not exist."""


class OuterLoopNoConvergence(UserWarning):
    """Precoder/statistics alternation hit its outer iteration cap."""
