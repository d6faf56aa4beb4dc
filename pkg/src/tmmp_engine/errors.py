"""Exception hierarchy.

Every domain failure derives from :class:`TmmpError`; the CLI maps these to
exit status 1.
"""


class TmmpError(ValueError):
    """Base class for all domain errors raised by the engine."""


# exact arithmetic
class RankDeficient(TmmpError):
    pass


class SingularMatrix(TmmpError):
    pass


# presentations
class HalfSpaceViolation(TmmpError):
    pass


class WeightsDoNotSpan(TmmpError):
    pass


class EmptyQuotient(TmmpError):
    pass


class EmptyPolytope(TmmpError):
    pass


class LowerDimensionalPolytope(TmmpError):
    pass


# polytopes / fans
class OriginNotInterior(TmmpError):
    pass


class NonSimplicialVertex(TmmpError):
    pass


class DegenerateSimplex(TmmpError):
    pass


# relations
class NonIntegralPairing(TmmpError):
    pass


class InconsistentRelation(TmmpError):
    pass


# tmmp
class NonGenericClass(TmmpError):
    def __init__(self, message, suggestion=None):
        super().__init__(message)
        self.suggestion = suggestion


# numerics
class RootFindingFailure(TmmpError):
    pass


class SpuriousRootAmbiguity(TmmpError):
    pass


class MatchingAmbiguity(TmmpError):
    pass


# input / output
class SchemaError(TmmpError):
    pass


class NonRationalValue(SchemaError):
    pass


class UnsupportedDimension(TmmpError):
    pass
