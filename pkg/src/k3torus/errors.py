"""Exception hierarchy shared by every stage of the pipeline."""


class K3TorusError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParameter(K3TorusError, ValueError):
    pass


class UnknownLabel(K3TorusError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NotOnSurface(K3TorusError):
    pass


class SmoothPoint(K3TorusError):
    pass


class EmptyRestriction(K3TorusError):
    """No degree-d monomial lives on the edge; the family is not generic there."""


class NotWellFormed(K3TorusError, ValueError):
    pass


class NotASingularity(K3TorusError):
    pass


class InconsistentFamily(K3TorusError):
    pass


class NonIntegralIntersection(K3TorusError):
    pass


class SearchExhausted(K3TorusError):
    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = dict(stats or {})


class InvalidBranchData(K3TorusError, ValueError):
    pass


class MissingAssumption(K3TorusError):
    pass


class DegenerateEulerClass(K3TorusError):
    pass


class OutOfRange(K3TorusError, ValueError):
    pass


class NonNegativeSquare(K3TorusError):
    pass


class InadmissibleC2(K3TorusError, ValueError):
    pass


class NoPositiveSolution(K3TorusError):
    pass


class ZeroDenominator(K3TorusError, ZeroDivisionError):
    pass


class PredicateFailed(K3TorusError):
    """A verification predicate came back false; carries the offending verdict."""

    def __init__(self, message, verdict=None):
        super().__init__(message)
        self.verdict = verdict


class PipelineError(K3TorusError):
    """Wraps an upstream error with the name of the stage that raised it."""

    def __init__(self, stage, cause):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause
