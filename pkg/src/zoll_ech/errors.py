"""Exception hierarchy shared by all modules."""


class ZollEchError(Exception):
    """Base class for every error raised by this package."""


class DomainError(ZollEchError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnitError(ZollEchError, ValueError):
    """Quantities carrying different powers of pi were combined or compared."""


class ExhaustionError(ZollEchError, IndexError):
    """A finite sequence ran out of terms."""


class HomologyMismatchError(ZollEchError, ValueError):
    """Two orbit sets lie in different homology classes."""


class GradingUndefinedError(ZollEchError, ValueError):
    """The absolute grading is only defined on the nullhomologous class."""


class ModelConsistencyError(ZollEchError, AssertionError):
    """Two independent routes to the same combinatorial quantity disagree."""


class CertificateError(ModelConsistencyError):
    """Upper and lower bounds of a width certificate do not coincide."""


class NoRootError(ZollEchError, ValueError):
    """A level set has no radial turning points."""


class GeometryError(ZollEchError, ValueError):
    """A sampled curve does not bound a simple region."""


class NumericalInstabilityError(ZollEchError, ArithmeticError):
    """Convergence along an epsilon ladder is not monotone within error bounds."""
