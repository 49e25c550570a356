"""Triangle constructions: circumcircle, barycentrics, isogonal conjugation,
circles through three points, spiral centers and radical axes.

Everything here is rational in the inputs, so exact inputs give exact outputs.
Only squared side lengths are ever needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

from .conics import Conic, conic_through_five_points, is_circle
from .errors import (
    CoincidentPoints,
    CollinearPoints,
    ConcentricCircles,
    DegenerateTriangle,
    NotACircle,
    OnSideline,
    PureTranslation,
)
from .projective import HLine, HPoint, cross, det3, dot
from .scalars import Scalar, float_direction, is_exact


def _div(a, b):
    if isinstance(a, float) or isinstance(b, float):
        return a / b
    return Fraction(a) / b


def _affine(p: HPoint):
    if p.is_infinite():
        raise DegenerateTriangle(f"{p!r} is not a finite point")
    return p.affine()


@dataclass(frozen=True)
class Triangle:
    A: HPoint
    B: HPoint
    C: HPoint

    def __post_init__(self):
        for p in (self.A, self.B, self.C):
            _affine(p)
        d = det3(self.A.affine_vec(), self.B.affine_vec(), self.C.affine_vec())
        if d == 0:
            raise DegenerateTriangle("vertices are collinear")
        if not self.is_exact:
            scale = max(self.a2, self.b2, self.c2)
            if abs(d) <= 1e-14 * scale:
                raise DegenerateTriangle("vertices are collinear")

    @property
    def vertices(self) -> Tuple[HPoint, HPoint, HPoint]:
        return self.A, self.B, self.C

    @property
    def is_exact(self) -> bool:
        return self.A.is_exact and self.B.is_exact and self.C.is_exact

    @staticmethod
    def _d2(p: HPoint, q: HPoint):
        (px, py), (qx, qy) = p.affine(), q.affine()
        return (px - qx) ** 2 + (py - qy) ** 2

    @property
    def a2(self):
        return self._d2(self.B, self.C)

    @property
    def b2(self):
        return self._d2(self.C, self.A)

    @property
    def c2(self):
        return self._d2(self.A, self.B)

    @property
    def a(self) -> float:
        return math.sqrt(self.a2)

    @property
    def b(self) -> float:
        return math.sqrt(self.b2)

    @property
    def c(self) -> float:
        return math.sqrt(self.c2)

    def signed_area(self):
        return det3(self.A.affine_vec(), self.B.affine_vec(), self.C.affine_vec()) / (2 if not self.is_exact else Fraction(2))

    def sidelines(self) -> Tuple[HLine, HLine, HLine]:
        """Lines BC, CA, AB."""
        A, B, C = (p.coords for p in self.vertices)
        return HLine._make(cross(B, C)), HLine._make(cross(C, A)), HLine._make(cross(A, B))


def _columns(T: Triangle):
    return T.A.affine_vec(), T.B.affine_vec(), T.C.affine_vec()


def _raw_barycentric(T: Triangle, p):
    """Homogeneous barycentrics ``adj(M) p`` with ``M = [A B C]``."""
    A, B, C = _columns(T)
    v = p.coords if hasattr(p, "coords") else p
    if not (T.is_exact and is_exact(v)):
        A, B, C = tuple(map(float, A)), tuple(map(float, B)), tuple(map(float, C))
        v = float_direction(v)
    # rows of adj(M) are the cross products of pairs of columns
    return dot(cross(B, C), v), dot(cross(C, A), v), dot(cross(A, B), v)


def to_barycentric(T: Triangle, p: HPoint) -> Tuple[Scalar, Scalar, Scalar]:
    """Barycentric coordinates of ``p``, normalized to sum 1 for finite points."""
    bar = _raw_barycentric(T, p)
    s = bar[0] + bar[1] + bar[2]
    if s == 0:
        return bar
    return tuple(_div(b, s) for b in bar)


def from_barycentric(T: Triangle, bar) -> HPoint:
    A, B, C = _columns(T)
    al, be, ga = bar
    return HPoint._make(tuple(al * A[i] + be * B[i] + ga * C[i] for i in range(3)))


def _on_sideline(bar, tol: float) -> bool:
    if is_exact(bar):
        return any(b == 0 for b in bar)
    m = max(abs(b) for b in bar)
    return any(abs(b) <= tol * m for b in bar)


def _conjugate_bar(T: Triangle, bar):
    al, be, ga = bar
    a2, b2, c2 = T.a2, T.b2, T.c2
    if not is_exact(bar):
        a2, b2, c2 = float(a2), float(b2), float(c2)
    return a2 * be * ga, b2 * ga * al, c2 * al * be


def isogonal_conjugate(T: Triangle, p: HPoint, tol: float = 1e-12) -> HPoint:
    """Isogonal conjugate ``(a^2 yz : b^2 zx : c^2 xy)`` in barycentrics.

    A point on the circumcircle maps to a point at infinity.
    """
    bar = _raw_barycentric(T, p)
    if _on_sideline(bar, tol):
        raise OnSideline(f"{p!r} lies on a sideline")
    return from_barycentric(T, _conjugate_bar(T, bar))


def isogonal_conjugate_of_infinity(T: Triangle, direction: HPoint) -> HPoint:
    """Isogonal conjugate of a point at infinity; it lies on the circumcircle."""
    if direction.z != 0 and not (not direction.is_exact and abs(direction.normalized()[2]) <= 1e-15):
        raise ValueError("expected a point at infinity")
    bar = _raw_barycentric(T, direction)
    return from_barycentric(T, _conjugate_bar(T, bar))


def circle_through(p: HPoint, q: HPoint, r: HPoint, tol: float = 1e-12) -> Conic:
    """The circle ``k(x^2+y^2) + d xz + e yz + f z^2 = 0`` through three points."""
    pts = (p, q, r)
    exact = all(x.is_exact for x in pts)
    rows = []
    for pt in pts:
        x, y, z = pt.coords if exact else float_direction(pt.coords)
        rows.append((x * x + y * y, x * z, y * z, z * z))
    # null vector of the 3x4 system by signed 3x3 minors
    cols = list(zip(*rows))
    minors = []
    for k in range(4):
        sub = [cols[j] for j in range(4) if j != k]
        minors.append((-1) ** k * det3(*sub))
    k, d, e, f = minors
    if exact:
        if k == 0:
            raise CollinearPoints("points are collinear or coincide")
    else:
        if abs(k) <= tol * max(abs(m) for m in minors) or all(m == 0 for m in minors):
            raise CollinearPoints("points are collinear or coincide")
    return Conic.from_coefficients(k, 0, k, d, e, f)


def circumcircle(T: Triangle) -> Conic:
    return circle_through(T.A, T.B, T.C)


def circumconic(T: Triangle, p: HPoint, q: HPoint) -> Conic:
    """The conic through ``A, B, C, p, q``."""
    return conic_through_five_points(T.A, T.B, T.C, p, q)


def _cx(p: HPoint):
    return p.affine() if p.is_exact else p.affine_float()


def spiral_center(p: HPoint, q: HPoint, q_star: HPoint, p_star: HPoint,
                  tol: float = 1e-12) -> HPoint:
    """Center of the direct similarity sending ``p -> q_star`` and ``q -> p_star``.

    With points as complex numbers the similarity is ``z -> a z + b``; the
    center is its fixed point ``b / (1 - a)``. Complex arithmetic is done on
    pairs so exact inputs stay exact.
    """
    exact = all(x.is_exact for x in (p, q, q_star, p_star))
    P, Q, Qs, Ps = (_cx(x) for x in (p, q, q_star, p_star))

    def sub(u, v):
        return (u[0] - v[0], u[1] - v[1])

    def mul(u, v):
        return (u[0] * v[0] - u[1] * v[1], u[0] * v[1] + u[1] * v[0])

    def div(u, v):
        n = v[0] * v[0] + v[1] * v[1]
        return (_div(u[0] * v[0] + u[1] * v[1], n), _div(u[1] * v[0] - u[0] * v[1], n))

    def small(u, scale):
        if exact:
            return u[0] == 0 and u[1] == 0
        return math.hypot(u[0], u[1]) <= tol * scale

    qp = sub(Q, P)
    img = sub(Ps, Qs)
    scale = max(1.0, *(abs(float(c)) for z in (P, Q, Qs, Ps) for c in z))
    if small(qp, scale) or small(img, scale):
        raise CoincidentPoints("segments must have distinct endpoints")
    a = div(img, qp)
    b = sub(Qs, mul(a, P))
    one_minus_a = (1 - a[0], -a[1])
    if small(one_minus_a, 1.0):
        raise PureTranslation("similarity is a translation; no finite center")
    z = div(b, one_minus_a)
    return HPoint(z[0], z[1], 1 if exact else 1.0)


def radical_axis(c1: Conic, c2: Conic, tol: float = 1e-12) -> HLine:
    """Radical axis of two circles: the difference of their monic forms."""
    for c in (c1, c2):
        if not is_circle(c) or c.entries[0] == 0:
            raise NotACircle(f"{c!r} is not a circle")
    e1 = c1.entries
    e2 = c2.entries
    if not (c1.is_exact and c2.is_exact):
        e1 = tuple(float(v) for v in c1.to_float().entries)
        e2 = tuple(float(v) for v in c2.to_float().entries)
    A1, _, _, D1, E1, F1 = e1
    A2, _, _, D2, E2, F2 = e2
    l = (2 * (D1 * A2 - D2 * A1), 2 * (E1 * A2 - E2 * A1), F1 * A2 - F2 * A1)
    if c1.is_exact and c2.is_exact:
        if l[0] == 0 and l[1] == 0:
            raise ConcentricCircles("circles are concentric")
    elif math.hypot(l[0], l[1]) <= tol * max(abs(v) for v in l + (A1 * A2,)):
        raise ConcentricCircles("circles are concentric")
    return HLine._make(l)


def power(c: Conic, p: HPoint):
    """Power of a finite point with respect to a circle (monic normalization)."""
    if not is_circle(c):
        raise NotACircle(f"{c!r} is not a circle")
    x, y = p.affine() if p.is_exact and c.is_exact else p.affine_float()
    v = c.value((x, y, 1))
    return _div(v, c.entries[0]) if c.is_exact and p.is_exact else v / float(c.entries[0])
