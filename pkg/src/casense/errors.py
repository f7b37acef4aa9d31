"""Exception types raised across the toolkit."""


class CasenseError(Exception):
    """Base class for all casense errors."""


class NonIntegerSpacingRatio(CasenseError):
    """High/low subcarrier spacing ratio is not an integer."""


class VelocityFusionConstraintViolated(CasenseError):
    """T_low * fc_low != T_high * fc_high; cross-band Doppler bins cannot align."""


class PilotIntervalDoesNotDivide(CasenseError):
    """Comb interval must divide N, block interval must divide M."""


class SchemeMismatch(CasenseError):
    """Estimator called with a configuration of the wrong aggregation scheme."""


class PatternMismatch(CasenseError):
    """Matrix layout does not match the expected pilot pattern."""


class EmptyScene(CasenseError):
    """Target scene contains no targets."""


class DimensionMismatch(CasenseError):
    """Vector length does not match the operator size."""


class SingularFisher(CasenseError):
    """Fisher information matrix is singular (degenerate grid)."""


class UnsupportedScheme(CasenseError):
    """Closed-form CRLB preconditions not met for this configuration."""


class VelocityAmbiguityWarning(UserWarning):
    """Target velocity exceeds the unambiguous Doppler span of a band."""
