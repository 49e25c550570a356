"""Homogeneous points and lines, cross ratios, directed angles, involutions.

Coordinates are Cartesian homogeneous ``(x:y:z)``; ``z = 0`` is the line at
infinity. Every function works over both scalar fields (see
:mod:`isoconic.scalars`): exact inputs give exact outputs, float inputs are
compared against an explicit ``tol`` in unit-normalized units.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple, Union

from .errors import (
    CoincidentLines,
    CoincidentPoints,
    DegeneratePairs,
    LineAtInfinity,
    NotCollinear,
    SingularMatrix,
)
from .scalars import DEFAULT_TOL, Scalar, coerce, float_direction, is_exact, primitive

Vec3 = Tuple[Scalar, Scalar, Scalar]


# ---------------------------------------------------------------------------
# raw vector helpers (tuples in, tuples out)

def cross(u: Sequence[Scalar], v: Sequence[Scalar]) -> Vec3:
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return u[0] * v[0] + u[1] * v[1] + u[2] * v[2]


def det3(a: Sequence[Scalar], b: Sequence[Scalar], c: Sequence[Scalar]) -> Scalar:
    return dot(a, cross(b, c))


def lincomb(s: Scalar, u: Sequence[Scalar], t: Scalar, v: Sequence[Scalar]) -> Vec3:
    return (s * u[0] + t * v[0], s * u[1] + t * v[1], s * u[2] + t * v[2])


def vec_distance(u: Sequence[Scalar], v: Sequence[Scalar]) -> float:
    """Projective distance ``|u^ x v^|`` between two homogeneous vectors.

    Returns exactly ``0.0`` when the vectors are exactly proportional.
    """
    c = cross(u, v)
    if all(x == 0 for x in c):
        return 0.0
    return math.sqrt(sum(x * x for x in cross(float_direction(u), float_direction(v))))


def vec_incidence(u: Sequence[Scalar], v: Sequence[Scalar]) -> float:
    """``|u^ . v^|``, exactly ``0.0`` for exact orthogonality."""
    d = dot(u, v)
    if d == 0:
        return 0.0
    return abs(dot(float_direction(u), float_direction(v)))


# ---------------------------------------------------------------------------
# value types

class _Homogeneous:
    __slots__ = ("coords",)

    def __init__(self, a, b, c):
        vals = (coerce(a), coerce(b), coerce(c))
        if all(v == 0 for v in vals):
            raise ValueError(f"{type(self).__name__} needs a nonzero coordinate triple")
        self.coords = primitive(vals) if is_exact(vals) else vals

    @classmethod
    def _make(cls, vec: Sequence[Scalar]):
        obj = object.__new__(cls)
        obj.coords = primitive(vec)
        return obj

    @property
    def is_exact(self) -> bool:
        return is_exact(self.coords)

    def normalized(self) -> Tuple[float, float, float]:
        """Unit-norm float coordinates."""
        return float_direction(self.coords)

    def to_float(self):
        return type(self)._make(float_direction(self.coords))

    def isclose(self, other, tol: float = DEFAULT_TOL) -> bool:
        return vec_distance(self.coords, other.coords) <= tol

    def distance(self, other) -> float:
        """Scale-free projective distance (0 for equal elements)."""
        return vec_distance(self.coords, other.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __len__(self):
        return 3

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return all(v == 0 for v in cross(self.coords, other.coords))

    def __hash__(self):
        for v in self.coords:
            if v != 0:
                pivot = v
                break
        if self.is_exact:
            return hash(tuple(Fraction(c) / pivot for c in self.coords))
        return hash(tuple(c / pivot for c in self.coords))

    def __repr__(self):
        return f"{type(self).__name__}{tuple(self.coords)!r}"


class HPoint(_Homogeneous):
    """A point of the real projective plane, ``(x:y:z)``."""

    __slots__ = ()

    def __init__(self, x, y, z=1):
        super().__init__(x, y, z)

    @property
    def x(self):
        return self.coords[0]

    @property
    def y(self):
        return self.coords[1]

    @property
    def z(self):
        return self.coords[2]

    def is_infinite(self, tol: float = 0.0) -> bool:
        if self.is_exact:
            return self.coords[2] == 0
        return abs(self.normalized()[2]) <= tol

    def affine(self) -> Tuple[Scalar, Scalar]:
        x, y, z = self.coords
        if z == 0:
            raise LineAtInfinity(f"{self!r} is a point at infinity")
        if self.is_exact:
            return Fraction(x) / z, Fraction(y) / z
        return x / z, y / z

    def affine_float(self) -> Tuple[float, float]:
        ax, ay = self.affine()
        return float(ax), float(ay)

    def affine_vec(self) -> Vec3:
        """Coordinates rescaled so that ``z == 1``."""
        ax, ay = self.affine()
        return (ax, ay, 1 if self.is_exact else 1.0)


class HLine(_Homogeneous):
    """A line ``l*x + m*y + n*z = 0``."""

    __slots__ = ()

    def __init__(self, l, m, n):
        super().__init__(l, m, n)

    @property
    def l(self):
        return self.coords[0]

    @property
    def m(self):
        return self.coords[1]

    @property
    def n(self):
        return self.coords[2]

    def is_at_infinity(self, tol: float = 0.0) -> bool:
        l, m, _ = self.coords
        if self.is_exact:
            return l == 0 and m == 0
        u = self.normalized()
        return math.hypot(u[0], u[1]) <= tol

    def direction(self) -> Vec3:
        """The point at infinity of the line (its direction)."""
        return (self.coords[1], -self.coords[0], 0 * self.coords[2])


LINE_AT_INFINITY = HLine(0, 0, 1)


def point_at_infinity(dx, dy) -> HPoint:
    return HPoint(dx, dy, 0)


# ---------------------------------------------------------------------------
# incidence

def join(p: HPoint, q: HPoint, tol: float = DEFAULT_TOL) -> HLine:
    """Line through two distinct points."""
    c = cross(p.coords, q.coords)
    if all(v == 0 for v in c) or (not is_exact(c) and vec_distance(p.coords, q.coords) <= tol):
        raise CoincidentPoints(f"{p!r} and {q!r} coincide")
    return HLine._make(c)


def meet(l: HLine, m: HLine, tol: float = DEFAULT_TOL) -> HPoint:
    """Intersection point of two distinct lines (at infinity when parallel)."""
    c = cross(l.coords, m.coords)
    if all(v == 0 for v in c) or (not is_exact(c) and vec_distance(l.coords, m.coords) <= tol):
        raise CoincidentLines(f"{l!r} and {m!r} coincide")
    return HPoint._make(c)


def incidence_residual(p: HPoint, l: HLine) -> float:
    return vec_incidence(p.coords, l.coords)


def incident(p: HPoint, l: HLine, tol: float = DEFAULT_TOL) -> bool:
    return incidence_residual(p, l) <= tol


def collinearity_residual(a: HPoint, b: HPoint, c: HPoint) -> float:
    d = det3(a.coords, b.coords, c.coords)
    if d == 0:
        return 0.0
    return abs(det3(a.normalized(), b.normalized(), c.normalized()))


def collinear(a: HPoint, b: HPoint, c: HPoint, tol: float = DEFAULT_TOL) -> bool:
    return collinearity_residual(a, b, c) <= tol


def line_through(p: HPoint, direction: Sequence[Scalar]) -> HLine:
    """Line through ``p`` with the given affine direction ``(dx, dy)``."""
    d = (direction[0], direction[1], 0 * direction[0])
    return HLine._make(cross(p.coords, d))


def parallel_through(p: HPoint, l: HLine) -> HLine:
    return line_through(p, (l.coords[1], -l.coords[0]))


def parallel_residual(l: HLine, m: HLine) -> float:
    """Sine of the angle between two finite lines (0 when parallel)."""
    a1, b1 = l.coords[0], l.coords[1]
    a2, b2 = m.coords[0], m.coords[1]
    c = a1 * b2 - a2 * b1
    if c == 0:
        return 0.0
    u = float_direction((a1, b1, 0))
    v = float_direction((a2, b2, 0))
    return abs(u[0] * v[1] - u[1] * v[0])


def are_parallel(l: HLine, m: HLine, tol: float = DEFAULT_TOL) -> bool:
    return parallel_residual(l, m) <= tol


# ---------------------------------------------------------------------------
# projective parameters with a first-class infinity

class _Infinity:
    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "∞"

    def __reduce__(self):
        return (_infinity, ())


def _infinity():
    return INF


INF = _Infinity()
Param = Union[Scalar, _Infinity]


def to_projective(t: Param) -> Tuple[Scalar, Scalar]:
    """Scalar-or-INF parameter to a homogeneous pair ``(s, u)`` meaning ``s/u``."""
    if t is INF:
        return (1, 0)
    return (coerce(t), 1)


def from_projective(pair: Tuple[Scalar, Scalar], tol: float = 0.0) -> Param:
    s, u = pair
    if u == 0 or (isinstance(u, float) and abs(u) <= tol * max(abs(s), abs(u))):
        return INF
    if not isinstance(s, float) and not isinstance(u, float):
        return Fraction(s) / Fraction(u)
    return s / u


def _form_on_line(l: Sequence[Scalar]):
    """A nonzero bilinear 'bracket' on points of line ``l``: [pq] = det(p, q, e_k)."""
    k = max(range(3), key=lambda i: abs(l[i]))
    e = [0, 0, 0]
    e[k] = 1

    def bracket(p, q):
        return det3(p, q, e)

    return bracket


def _cross_ratio_from_brackets(ca, db, cb, da) -> Param:
    num = ca * db
    den = cb * da
    if den == 0:
        if num == 0:
            raise NotCollinear("cross ratio undefined: three coincident points")
        return INF
    if not isinstance(num, float) and not isinstance(den, float):
        return Fraction(num) / Fraction(den)
    return num / den


def cross_ratio_line(a: HPoint, b: HPoint, c: HPoint, d: HPoint, tol: float = DEFAULT_TOL) -> Param:
    """Cross ratio ``(a,b;c,d) = (c-a)(d-b) / ((c-b)(d-a))`` of four collinear points.

    Returns :data:`INF` when ``c == b`` or ``d == a``.
    """
    try:
        l = join(a, b, tol=tol)
    except CoincidentPoints:
        raise NotCollinear("a and b must be distinct") from None
    for p in (c, d):
        if not incident(p, l, tol):
            raise NotCollinear(f"{p!r} is off the line {l!r}")
    br = _form_on_line(l.coords)
    A, B, C, D = a.coords, b.coords, c.coords, d.coords
    return _cross_ratio_from_brackets(br(C, A), br(D, B), br(C, B), br(D, A))


def cross_ratio_pencil(o: HPoint, a: HPoint, b: HPoint, c: HPoint, d: HPoint) -> Param:
    """Cross ratio of the four lines ``oa, ob; oc, od`` through ``o``."""
    O = o.coords
    A, B, C, D = a.coords, b.coords, c.coords, d.coords
    return _cross_ratio_from_brackets(det3(O, C, A), det3(O, D, B), det3(O, C, B), det3(O, D, A))


# ---------------------------------------------------------------------------
# directed angles mod pi

@dataclass(frozen=True)
class DirectedAngle:
    """Angle between lines modulo pi, stored in ``[0, pi)``."""

    value: float

    def __post_init__(self):
        v = math.fmod(self.value, math.pi)
        if v < 0:
            v += math.pi
        if v >= math.pi:
            v -= math.pi
        object.__setattr__(self, "value", v)

    def __add__(self, other: "DirectedAngle") -> "DirectedAngle":
        return DirectedAngle(self.value + other.value)

    def __sub__(self, other: "DirectedAngle") -> "DirectedAngle":
        return DirectedAngle(self.value - other.value)

    def __neg__(self) -> "DirectedAngle":
        return DirectedAngle(-self.value)

    def distance(self, other: "DirectedAngle") -> float:
        d = abs(self.value - other.value)
        return min(d, math.pi - d)

    def isclose(self, other: "DirectedAngle", tol: float = 1e-12) -> bool:
        return self.distance(other) <= tol


def _line_angle(l: HLine) -> float:
    a, b, _ = l.normalized()
    # direction (b, -a)
    return math.atan2(-a, b)


def directed_angle(l: HLine, m: HLine) -> DirectedAngle:
    """Counterclockwise angle from ``l`` to ``m`` modulo pi."""
    if l.is_at_infinity() or m.is_at_infinity():
        raise LineAtInfinity("directed angle needs two finite lines")
    return DirectedAngle(_line_angle(m) - _line_angle(l))


# ---------------------------------------------------------------------------
# involutions of the projective line

@dataclass(frozen=True)
class Involution:
    """Projective involution ``(s:u) -> (a s + b u : c s + d u)`` with ``a + d = 0``.

    Equivalently the pairs ``(t, t')`` satisfying
    ``alpha t t' + beta (t + t') + gamma = 0`` where the matrix is
    ``[[beta, gamma], [-alpha, -beta]]``.
    """

    matrix: Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]

    @property
    def bilinear(self) -> Tuple[Scalar, Scalar, Scalar]:
        """Coefficients ``(alpha, beta, gamma)`` of the defining symmetric form."""
        (b, g), (ma, _) = self.matrix
        return (-ma, b, g)

    def apply_projective(self, pair: Tuple[Scalar, Scalar]) -> Tuple[Scalar, Scalar]:
        (a, b), (c, d) = self.matrix
        s, u = pair
        return (a * s + b * u, c * s + d * u)

    def pullback_quadratic(self, quad: Sequence[Scalar]) -> Tuple[Scalar, Scalar, Scalar]:
        """Coefficients of ``q(M(s,u))`` for ``q = quad[0] u^2 + quad[1] s u + quad[2] s^2``."""
        c0, c1, c2 = quad
        (a, b), (c, d) = self.matrix
        # s' = a s + b u, u' = c s + d u
        new_s2 = c2 * a * a + c1 * a * c + c0 * c * c
        new_su = 2 * c2 * a * b + c1 * (a * d + b * c) + 2 * c0 * c * d
        new_u2 = c2 * b * b + c1 * b * d + c0 * d * d
        return (new_u2, new_su, new_s2)


def involution_from_two_pairs(pair1: Tuple[Param, Param], pair2: Tuple[Param, Param]) -> Involution:
    """The unique involution swapping both given pairs (a pair may be a fixed point)."""
    return involution_from_homogeneous_pairs(
        tuple(to_projective(t) for t in pair1), tuple(to_projective(t) for t in pair2)
    )


def involution_from_homogeneous_pairs(pair1, pair2) -> Involution:
    """As :func:`involution_from_two_pairs` with parameters given as ``(s, u)`` pairs."""
    rows = []
    for (s, u), (s2, u2) in (pair1, pair2):
        rows.append((s * s2, s * u2 + u * s2, u * u2))
    alpha, beta, gamma = cross(rows[0], rows[1])
    scale = max(abs(float(v)) for r in rows for v in r) or 1.0
    exact = is_exact([alpha, beta, gamma])
    disc = beta * beta - alpha * gamma
    if exact:
        if (alpha, beta, gamma) == (0, 0, 0) or disc == 0:
            raise DegeneratePairs("pairs do not determine a unique involution")
    else:
        if max(abs(alpha), abs(beta), abs(gamma)) <= 1e-12 * scale * scale or abs(disc) <= 1e-24 * scale**4:
            raise DegeneratePairs("pairs do not determine a unique involution")
    return Involution(((beta, gamma), (-alpha, -beta)))


def involution_apply(inv: Involution, t: Param) -> Param:
    return from_projective(inv.apply_projective(to_projective(t)))


# ---------------------------------------------------------------------------
# projective maps

def apply_projective_map(M: Sequence[Sequence[Scalar]], p: HPoint) -> HPoint:
    """Image of ``p`` under the invertible 3x3 matrix ``M``."""
    rows = [tuple(coerce(v) for v in row) for row in M]
    d = det3(rows[0], rows[1], rows[2])
    if d == 0 or (not is_exact([d]) and abs(d) <= 1e-14 * max(abs(float(v)) for r in rows for v in r) ** 3):
        raise SingularMatrix("projective map must be invertible")
    return HPoint._make(tuple(dot(r, p.coords) for r in rows))
