"""Exception and warning types shared across the package."""


class CoulombError(Exception):
    """Base class for every error raised by this package."""


class PoleError(CoulombError, ValueError):
    """Function evaluated at a pole (e.g. the Gamma function at 0, -1, ...)."""


class ParameterPole(PoleError):
    """A hypergeometric parameter sits on a pole of the defining series."""


class PrecisionLoss(RuntimeWarning):
    """Cancellation exceeded the accuracy budget of a series evaluation."""


class FamilyMismatch(CoulombError, ValueError):
    """A potential family was used with an evaluator of the wrong dimension."""


class SingularPoint(CoulombError, ValueError):
    """Evaluation requested at a point where the expression is singular."""


class RangeError(CoulombError, ValueError):
    """A parameter lies outside its admissible range."""


class NoBracket(CoulombError, RuntimeError):
    """The shooting search could not bracket a decaying solution."""


class BlowUp(CoulombError, RuntimeError):
    """An integration diverged.

    Attributes:
        radius: Radius at which the divergence was detected.
    """

    def __init__(self, message: str, radius: float = float("nan")):
        super().__init__(message)
        self.radius = radius


class NoConvergence(CoulombError, RuntimeError):
    """An iterative method did not reach its tolerance."""


class UnsupportedOrder(CoulombError, ValueError):
    """Requested expansion order is not available in closed form."""


class TailTooHeavy(CoulombError, ValueError):
    """A grid does not cover the effective support of a density."""


class Collapsed(CoulombError, ValueError):
    """The density degenerates to a point mass and cannot be normalised."""


class OnSupport(CoulombError, ValueError):
    """A Stieltjes transform was requested on the real axis."""


class Collision(CoulombError, RuntimeError):
    """Two particles came closer than the collision threshold."""


class InsufficientSamples(CoulombError, ValueError):
    """Too few samples or batches for a statistical estimate."""


class CoincidentPoints(CoulombError, ValueError):
    """Two particle positions coincide where a difference quotient is needed."""


class OutsideValidity(UserWarning):
    """A closed form is evaluated where it no longer solves its equation."""
