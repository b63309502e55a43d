"""Exception types raised by the panel fitting and testing pipeline."""


class PanelCdError(Exception):
    """Base class for all package-specific errors."""


class SingularDesign(PanelCdError):
    """Pooled Gram matrix of centered regressors is numerically singular."""


class DegenerateUnit(PanelCdError):
    """A unit's residual row has (numerically) zero variance, so its
    correlations are undefined."""


class SingularUnitDesign(PanelCdError):
    """A per-unit design cross-product X_r X_r' is singular, so the
    bias-adjusted LM projector algebra is unavailable."""


class NonpositiveVariance(PanelCdError):
    """A test's null variance formula is nonpositive at these dimensions;
    the test is inapplicable."""


class ParseError(PanelCdError):
    """A CSV cell or config field could not be parsed."""


class UnbalancedPanel(PanelCdError):
    """The CSV panel is missing (unit, time) cells."""


class DuplicateRow(PanelCdError):
    """The CSV panel contains a repeated (unit, time) row."""
