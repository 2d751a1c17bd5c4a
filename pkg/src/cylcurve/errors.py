"""Exception hierarchy for curve validation, topology and certification."""


class CurveError(Exception):
    """Base class for all cylcurve errors."""


class NonFinite(CurveError):
    """Curve coefficients contain NaN or infinity."""


class NonRegular(CurveError):
    """The parametrization speed drops to (or below) the regularity floor,
    so the curve cannot be reparametrized by arc length."""

    def __init__(self, msg, min_speed=None, at=None):
        super().__init__(msg)
        self.min_speed = min_speed
        self.at = at


class QuadratureFailure(CurveError):
    """Arc-length quadrature or tangent-angle lifting did not converge at the
    requested resolution."""


class NotMultipleOf2Pi(CurveError):
    """Total turning over one period is not an integer multiple of 2*pi
    within tolerance (sampling too coarse)."""


class ResolutionTooCoarse(CurveError):
    """Two distinct crossing candidates cannot be separated at the current
    sample density; raise n_samples."""


class NotALoop(CurveError):
    """An interval whose endpoints do not close up on the cylinder was passed
    where a loop was required."""


class WindingToleranceExceeded(CurveError):
    """The u-increment over a closed loop is not close enough to an integer
    multiple of 2*pi; the winding number would be unreliable."""


class NoCrossingFound(CurveError):
    """A loop with winding > 1 has no detectable internal crossing.  This is
    topologically impossible, so it signals a numerical failure."""


class NotSimple(CurveError):
    """A non-simple (tangential or multiple) crossing blocks a routine that
    requires general position; perturb the curve first."""


class GeneralPositionFailed(CurveError):
    """Random jitter failed to put the curve in general position within the
    retry budget."""


class HypothesisViolated(CurveError):
    """The hypotheses of the chord-comparison theorem are not met (convexity
    of the reference arc or pointwise curvature domination)."""


class LoopNotSimple(CurveError):
    """The planar loop attached to a crossing has internal crossings, so the
    turning-angle identity for simple loops does not apply."""


class TheoremWitnessNotFound(CurveError):
    """No periodic window with two crossings exists although the turning is
    periodic and crossings are present.  Would falsify the theorem; normally
    surfaced as a report flag rather than raised."""


class GenerationFailed(CurveError):
    """Random curve generation failed to produce a regular curve within the
    retry budget."""


class PipelineMismatch(CurveError):
    """The constructive short-loop pipeline produced a witness violating the
    length bound that the brute-force oracle satisfies."""
