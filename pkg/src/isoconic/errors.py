"""Exception hierarchy shared by every layer of the kernel."""


class GeometryError(Exception):
    """Base class for all geometric failures raised by isoconic."""


class NotExactlyRepresentable(GeometryError):
    """An exact-mode computation would need an irrational value."""


# projective core
class CoincidentPoints(GeometryError):
    pass


class CoincidentLines(GeometryError):
    pass


class NotCollinear(GeometryError):
    pass


class LineAtInfinity(GeometryError):
    pass


class DegeneratePairs(GeometryError):
    pass


class SingularMatrix(GeometryError):
    pass


# conics
class UnderdeterminedConic(GeometryError):
    pass


class PointNotOnConic(GeometryError):
    pass


class LineNotThroughPoint(GeometryError):
    pass


class IdenticalConics(GeometryError):
    pass


class ConicsNotThroughPoints(GeometryError):
    pass


class FourthPointCoincides(GeometryError):
    """The fourth common point collapses onto one of the three given points."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class DegenerateConic(GeometryError):
    pass


class ParabolaHasNoCenter(GeometryError):
    pass


class CircleAxesUndefined(GeometryError):
    pass


# triangle toolkit
class DegenerateTriangle(GeometryError):
    pass


class OnSideline(GeometryError):
    pass


class PureTranslation(GeometryError):
    pass


class NotACircle(GeometryError):
    pass


class ConcentricCircles(GeometryError):
    pass


class CollinearPoints(GeometryError):
    pass


# theorem lab / harness
class DegenerateConfig(GeometryError):
    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class CircleConic(DegenerateConfig):
    pass


class WrongConfigVariant(GeometryError):
    pass


class NoSignChange(GeometryError):
    pass


class PathExhausted(GeometryError):
    pass
