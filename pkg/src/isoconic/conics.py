"""Conics as symmetric 3x3 quadratic forms.

A :class:`Conic` stores the matrix

    [[A, B, D],
     [B, C, E],
     [D, E, F]]

of the form ``A x^2 + 2B xy + C y^2 + 2D xz + 2E yz + F z^2``. Circles,
circumconics and degenerate line pairs are all conics. Exact inputs give exact
outputs wherever the answer is rational; operations that would need an
irrational number raise :class:`NotExactlyRepresentable` in exact mode.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import polys
from .errors import (
    CircleAxesUndefined,
    CoincidentPoints,
    ConicsNotThroughPoints,
    DegenerateConic,
    FourthPointCoincides,
    IdenticalConics,
    LineNotThroughPoint,
    NotExactlyRepresentable,
    ParabolaHasNoCenter,
    PointNotOnConic,
    UnderdeterminedConic,
)
from .projective import (
    LINE_AT_INFINITY,
    HLine,
    HPoint,
    Vec3,
    cross,
    cross_ratio_pencil,
    dot,
    line_through,
    vec_distance,
    vec_incidence,
)
from .scalars import DEFAULT_TOL, Scalar, coerce, float_direction, is_exact, primitive
from .scalars import sqrt as field_sqrt

#: Roots closer than this (sine-of-angle on the parameter line) merge into one.
MERGE_TOL = 1e-6
#: Relative tolerance used by circle recognition.
CIRCLE_TOL = 1e-10


class Conic:
    """Symmetric quadratic form up to scale."""

    __slots__ = ("entries",)

    def __init__(self, matrix):
        rows = [[coerce(v) for v in row] for row in matrix]
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("conic matrix must be 3x3")
        for i in range(3):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("conic matrix must be symmetric")
        e = (rows[0][0], rows[0][1], rows[1][1], rows[0][2], rows[1][2], rows[2][2])
        if all(v == 0 for v in e):
            raise ValueError("zero matrix is not a conic")
        self.entries = _normalize_entries(e) if is_exact(e) else e

    @classmethod
    def _make(cls, entries):
        obj = object.__new__(cls)
        obj.entries = _normalize_entries(entries)
        return obj

    @classmethod
    def from_coefficients(cls, a, b, c, d, e, f) -> "Conic":
        """Conic ``a x^2 + b xy + c y^2 + d x + e y + f = 0``."""
        vals = [coerce(v) for v in (a, b, c, d, e, f)]
        a, b, c, d, e, f = vals
        if is_exact(vals):
            return cls._make((2 * a, b, 2 * c, d, e, 2 * f))
        return cls._make((a, b / 2, c, d / 2, e / 2, f))

    @classmethod
    def circle(cls, cx, cy, r2) -> "Conic":
        """Circle with center ``(cx, cy)`` and squared radius ``r2``."""
        cx, cy, r2 = coerce(cx), coerce(cy), coerce(r2)
        return cls.from_coefficients(1, 0, 1, -2 * cx, -2 * cy, cx * cx + cy * cy - r2)

    # -- matrix views -------------------------------------------------------
    @property
    def matrix(self) -> Tuple[Vec3, Vec3, Vec3]:
        A, B, C, D, E, F = self.entries
        return ((A, B, D), (B, C, E), (D, E, F))

    @property
    def is_exact(self) -> bool:
        return is_exact(self.entries)

    def coefficients(self):
        """``(a, b, c, d, e, f)`` of ``a x^2 + b xy + c y^2 + d x + e y + f``."""
        A, B, C, D, E, F = self.entries
        return (A, 2 * B, C, 2 * D, 2 * E, F)

    def normalized_matrix(self) -> np.ndarray:
        """Float matrix scaled to unit Frobenius norm."""
        A, B, C, D, E, F = _float_entries(self.entries)
        return np.array([[A, B, D], [B, C, E], [D, E, F]])

    def to_float(self) -> "Conic":
        return Conic._make(_float_entries(self.entries))

    def apply(self, v: Sequence[Scalar]) -> Vec3:
        """Matrix-vector product ``Q v``."""
        A, B, C, D, E, F = self.entries
        x, y, z = v
        return (A * x + B * y + D * z, B * x + C * y + E * z, D * x + E * y + F * z)

    def bilinear(self, u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
        return dot(u, self.apply(v))

    def value(self, p) -> Scalar:
        v = p.coords if hasattr(p, "coords") else p
        return self.bilinear(v, v)

    def residual(self, p) -> float:
        """``|p^T Q p|`` with unit-normalized ``p`` and ``Q`` (exactly 0 if on conic)."""
        v = p.coords if hasattr(p, "coords") else p
        if self.value(v) == 0:
            return 0.0
        u = float_direction(v)
        return abs(_bilinear_entries(_float_entries(self.entries), u, u))

    def contains(self, p, tol: float = DEFAULT_TOL) -> bool:
        return self.residual(p) <= tol

    def det(self) -> Scalar:
        A, B, C, D, E, F = self.entries
        return A * (C * F - E * E) - B * (B * F - E * D) + D * (B * E - C * D)

    def adjugate_entries(self):
        """Entries ``(A', B', C', D', E', F')`` of the (symmetric) adjugate."""
        return _adjugate(self.entries)

    def distance(self, other: "Conic") -> float:
        """Scale-free distance between two conics (0 when projectively equal)."""
        a = _float_entries(self.entries)
        b = _float_entries(other.entries)
        if all(x == 0 for x in _wedge(self.entries, other.entries)):
            return 0.0
        dot_ab = sum(x * y for x, y in zip(_fro_weights(a), _fro_weights(b)))
        return math.sqrt(max(0.0, 1.0 - dot_ab * dot_ab))

    def __eq__(self, other):
        if not isinstance(other, Conic):
            return NotImplemented
        return all(x == 0 for x in _wedge(self.entries, other.entries))

    def __hash__(self):
        pivot = next(v for v in self.entries if v != 0)
        if self.is_exact:
            return hash(tuple(Fraction(v) / pivot for v in self.entries))
        return hash(tuple(v / pivot for v in self.entries))

    def __repr__(self):
        return f"Conic(coefficients={self.coefficients()!r})"


def _normalize_entries(e):
    if is_exact(e):
        return primitive(e)
    e = [float(v) for v in e]
    n = math.sqrt(sum(w * w for w in _fro_weights(e)))
    if n == 0.0 or not math.isfinite(n):
        return tuple(e)
    return tuple(v / n for v in e)


def _fro_weights(e):
    # entries weighted so that the Euclidean norm is the Frobenius norm
    A, B, C, D, E, F = e
    r2 = math.sqrt(2.0)
    return (A, r2 * B, C, r2 * D, r2 * E, F)


def _float_entries(e):
    if is_exact(e):
        fr = [Fraction(v) for v in e]
        m = max(abs(v) for v in fr)
        e = [float(v / m) for v in fr]
    return _normalize_entries([float(v) for v in e])


def _wedge(a, b):
    out = []
    for i in range(6):
        for j in range(i + 1, 6):
            out.append(a[i] * b[j] - a[j] * b[i])
    return out


def _bilinear_entries(e, u, v):
    A, B, C, D, E, F = e
    return (u[0] * (A * v[0] + B * v[1] + D * v[2]) + u[1] * (B * v[0] + C * v[1] + E * v[2])
            + u[2] * (D * v[0] + E * v[1] + F * v[2]))


def _adjugate(e):
    A, B, C, D, E, F = e
    return (
        C * F - E * E,
        D * E - B * F,
        A * F - D * D,
        B * E - C * D,
        B * D - A * E,
        A * C - B * B,
    )


def _sym_from_lines(l: Sequence[Scalar], m: Sequence[Scalar]):
    """Entries of ``l m^T + m l^T`` (the line pair ``l * m``, doubled)."""
    return (
        2 * l[0] * m[0],
        l[0] * m[1] + l[1] * m[0],
        2 * l[1] * m[1],
        l[0] * m[2] + l[2] * m[0],
        l[1] * m[2] + l[2] * m[1],
        2 * l[2] * m[2],
    )


def _is_degenerate(C: Conic, tol: float) -> bool:
    d = C.det()
    if C.is_exact:
        return d == 0
    A, B, Cc, D, E, F = _float_entries(C.entries)
    return abs(A * (Cc * F - E * E) - B * (B * F - E * D) + D * (B * E - Cc * D)) <= tol


def _require_on(C: Conic, p: HPoint, tol: float):
    if not C.contains(p, tol):
        raise PointNotOnConic(f"{p!r} is not on {C!r}")


# ---------------------------------------------------------------------------
# construction

def conic_through_five_points(p1: HPoint, p2: HPoint, p3: HPoint, p4: HPoint, p5: HPoint,
                              tol: float = 1e-12) -> Conic:
    """The conic through five points.

    Built from the pencil spanned by the line pairs ``(p1p2)(p3p4)`` and
    ``(p1p3)(p2p4)``; the member through ``p5`` is the answer. The result
    vanishes identically exactly when the incidence system has nullity > 1.
    """
    a, b, c, d, e = (p.coords if p.is_exact else p.normalized() for p in (p1, p2, p3, p4, p5))
    exact = all(p.is_exact for p in (p1, p2, p3, p4, p5))
    L1 = _sym_from_lines(cross(a, b), cross(c, d))
    L2 = _sym_from_lines(cross(a, c), cross(b, d))
    v1 = _bilinear_entries(L1, e, e)
    v2 = _bilinear_entries(L2, e, e)
    entries = tuple(v2 * x - v1 * y for x, y in zip(L1, L2))
    if exact:
        if all(v == 0 for v in entries):
            raise UnderdeterminedConic("five points do not determine a unique conic")
    else:
        if math.sqrt(sum(w * w for w in _fro_weights(entries))) <= tol:
            raise UnderdeterminedConic("five points do not determine a unique conic")
    return Conic._make(entries)


# ---------------------------------------------------------------------------
# intersections

@dataclass(frozen=True)
class ConjugatePairQuadratic:
    """Two non-real intersection points kept as a real quadratic.

    The points are ``s*base[0] + u*base[1]`` for the two (complex) roots of
    ``coeffs[0] u^2 + coeffs[1] s u + coeffs[2] s^2``.
    """

    base: Tuple[Vec3, Vec3]
    coeffs: Tuple[Scalar, Scalar, Scalar]
    multiplicity: int = 1

    def complex_points(self) -> List[np.ndarray]:
        # the roots refer to the basis as given, so it must not be rescaled
        p = np.array([float(v) for v in self.base[0]])
        q = np.array([float(v) for v in self.base[1]])
        c0, c1, c2 = (float(v) for v in polys.normalized(self.coeffs))
        return [complex(s) * p + complex(u) * q for s, u in polys.quadratic_roots([c0, c1, c2])]


@dataclass
class IntersectionSet:
    """Real intersection points with multiplicities plus non-real pairs."""

    points: List[Tuple[HPoint, int]] = field(default_factory=list)
    conjugate_pairs: List[ConjugatePairQuadratic] = field(default_factory=list)

    @property
    def total_multiplicity(self) -> int:
        return sum(m for _, m in self.points) + sum(2 * q.multiplicity for q in self.conjugate_pairs)

    def real_points(self) -> List[HPoint]:
        return [p for p, _ in self.points]

    def multiplicity_of(self, p: HPoint, tol: float = MERGE_TOL) -> int:
        return sum(m for q, m in self.points if vec_distance(q.coords, p.coords) <= tol)


def _line_basis(l: Sequence[Scalar]):
    """Two independent points spanning the line ``l`` (orthonormal for floats)."""
    if is_exact(l):
        k = min(range(3), key=lambda i: abs(l[i]))
        e = [0, 0, 0]
        e[k] = 1
        p = cross(l, e)
        return p, cross(l, p)
    n = float_direction(l)
    k = min(range(3), key=lambda i: abs(n[i]))
    e = [0.0, 0.0, 0.0]
    e[k] = 1.0
    p = float_direction(cross(n, e))
    return p, cross(n, p)


def _points_from_quadratic(base, coeffs, merge_tol, mult: int = 1) -> IntersectionSet:
    p, q = base
    out = IntersectionSet()
    if all(c == 0 for c in coeffs):
        raise DegenerateConic("line lies on the conic")
    c, b, a = coeffs
    exact = is_exact(coeffs)
    if exact:
        disc = b * b - 4 * a * c
        if disc == 0:
            s, u = polys.double_root(coeffs)
            out.points.append((HPoint._make((s * p[0] + u * q[0], s * p[1] + u * q[1], s * p[2] + u * q[2])), 2 * mult))
            return out
        if disc < 0:
            out.conjugate_pairs.append(ConjugatePairQuadratic((p, q), tuple(coeffs), mult))
            return out
        for s, u in polys.quadratic_roots(coeffs):
            out.points.append((HPoint._make((s * p[0] + u * q[0], s * p[1] + u * q[1], s * p[2] + u * q[2])), mult))
        return out
    nc = polys.normalized(coeffs)
    roots = polys.quadratic_roots(nc)
    if polys.root_separation(*roots) <= merge_tol:
        s, u = polys.double_root(nc)
        out.points.append((HPoint._make((s * p[0] + u * q[0], s * p[1] + u * q[1], s * p[2] + u * q[2])), 2 * mult))
        return out
    disc = nc[1] * nc[1] - 4 * nc[0] * nc[2]
    if disc < 0:
        out.conjugate_pairs.append(ConjugatePairQuadratic((tuple(p), tuple(q)), tuple(coeffs), mult))
        return out
    for s, u in roots:
        s, u = float(s.real if isinstance(s, complex) else s), float(u.real if isinstance(u, complex) else u)
        out.points.append((HPoint._make((s * p[0] + u * q[0], s * p[1] + u * q[1], s * p[2] + u * q[2])), mult))
    return out


def line_conic_intersect(l: HLine, C: Conic, merge_tol: float = MERGE_TOL) -> IntersectionSet:
    """Intersection of a line and a conic (total multiplicity 2 over C)."""
    p, q = _line_basis(l.coords)
    coeffs = (C.bilinear(q, q), 2 * C.bilinear(p, q), C.bilinear(p, p))
    return _points_from_quadratic((p, q), coeffs, merge_tol)


def _other_point_on_line(l: Sequence[Scalar], p: Sequence[Scalar]):
    q = cross(l, p)
    if all(v == 0 for v in q):
        raise LineNotThroughPoint("degenerate line")
    return q


def second_intersection_vec(C: Conic, p: Sequence[Scalar], l: Sequence[Scalar]) -> Vec3:
    """Unchecked core of :func:`second_intersection` on raw vectors."""
    q = cross(l, p)
    qq = C.bilinear(q, q)
    pq = C.bilinear(p, q)
    return (qq * p[0] - 2 * pq * q[0], qq * p[1] - 2 * pq * q[1], qq * p[2] - 2 * pq * q[2])


def second_intersection(C: Conic, p: HPoint, l: HLine, tol: float = DEFAULT_TOL) -> HPoint:
    """The other point where ``l`` (through ``p`` on ``C``) meets ``C``.

    Returns ``p`` itself when ``l`` is tangent at ``p``. The computation is
    rational in the inputs.
    """
    _require_on(C, p, tol)
    if vec_incidence(p.coords, l.coords) > tol:
        raise LineNotThroughPoint(f"{l!r} does not pass through {p!r}")
    return HPoint._make(second_intersection_vec(C, p.coords, l.coords))


def second_intersection_flagged(C: Conic, p: HPoint, l: HLine,
                                tol: float = DEFAULT_TOL) -> Tuple[HPoint, bool]:
    """:func:`second_intersection` plus a flag telling whether ``l`` is tangent at ``p``."""
    q = second_intersection(C, p, l, tol)
    return q, is_tangent_at(C, p, l, tol)


def is_tangent_at(C: Conic, p: HPoint, l: HLine, tol: float = DEFAULT_TOL) -> bool:
    """Whether ``l`` touches ``C`` at ``p`` (``p`` assumed on ``C``)."""
    return vec_distance(C.apply(p.coords), l.coords) <= tol


def tangent_line_at(C: Conic, p: HPoint, tol: float = DEFAULT_TOL) -> HLine:
    _require_on(C, p, tol)
    v = C.apply(p.coords)
    if all(x == 0 for x in v):
        raise DegenerateConic("point is singular on the conic")
    return HLine._make(v)


def polar(C: Conic, p: HPoint) -> HLine:
    """Polar line ``Q p``."""
    if _is_degenerate(C, 1e-14):
        raise DegenerateConic("polarity needs a nondegenerate conic")
    return HLine._make(C.apply(p.coords))


def pole(C: Conic, l: HLine) -> HPoint:
    """Pole of a line: ``adj(Q) l``, proportional to ``Q^-1 l``."""
    if _is_degenerate(C, 1e-14):
        raise DegenerateConic("polarity needs a nondegenerate conic")
    A, B, Cc, D, E, F = C.adjugate_entries()
    x, y, z = l.coords
    return HPoint._make((A * x + B * y + D * z, B * x + Cc * y + E * z, D * x + E * y + F * z))


pole_polar = polar


def fourth_common_point(C1: Conic, C2: Conic, a: HPoint, b: HPoint, c: HPoint,
                        tol: float = DEFAULT_TOL) -> HPoint:
    """The fourth intersection of two conics sharing ``a``, ``b``, ``c``.

    The pencil member through a third point of line ``ab`` splits as
    ``(ab) * n`` with ``n`` through ``c`` and the wanted point.
    """
    if C1 == C2 or (not (C1.is_exact and C2.is_exact) and C1.distance(C2) <= 1e-14):
        raise IdenticalConics("conics coincide")
    for p in (a, b, c):
        if not (C1.contains(p, tol) and C2.contains(p, tol)):
            raise ConicsNotThroughPoints(f"{p!r} is not common to both conics")
    D = fourth_common_point_vec(C1, C2, a.coords, b.coords, c.coords)
    pt = HPoint._make(D)
    for p in (a, b, c):
        if vec_distance(D, p.coords) <= (0.0 if pt.is_exact else tol):
            raise FourthPointCoincides("fourth common point coincides with a given point", pt)
    return pt


def fourth_common_point_vec(C1: Conic, C2: Conic, a, b, c) -> Vec3:
    """Unchecked core of :func:`fourth_common_point` on raw vectors."""
    exact = C1.is_exact and C2.is_exact and is_exact(a) and is_exact(b) and is_exact(c)
    if not exact:
        a, b, c = float_direction(a), float_direction(b), float_direction(c)
        e1, e2 = _float_entries(C1.entries), _float_entries(C2.entries)
    else:
        e1, e2 = C1.entries, C2.entries
    m = (a[0] + b[0], a[1] + b[1], a[2] + b[2])
    lam = _bilinear_entries(e2, m, m)
    mu = -_bilinear_entries(e1, m, m)
    S = tuple(lam * x + mu * y for x, y in zip(e1, e2))
    l = cross(a, b)
    k = max(range(3), key=lambda i: abs(l[i]))
    r = [0, 0, 0]
    r[k] = 1
    Sr = (S[(0, 1, 3)[k]], S[(1, 2, 4)[k]], S[(3, 4, 5)[k]])
    rSr = Sr[k]
    lr = l[k]
    n = tuple(2 * lr * s - rSr * li for s, li in zip(Sr, l))
    C = Conic._make(e1) if not exact else C1
    return second_intersection_vec(C, c, n)


# ---------------------------------------------------------------------------
# pencil-based conic-conic intersection

def _cubic_coefficients(e1, e2):
    """Ascending coefficients of ``det(t Q1 + Q2)``."""
    def det(e):
        A, B, C, D, E, F = e
        return A * (C * F - E * E) - B * (B * F - E * D) + D * (B * E - C * D)

    def trace_prod(x, y):
        # trace(X Y) for symmetric X, Y given as entries
        A, B, C, D, E, F = x
        a, b, c, d, e, f = y
        return A * a + C * c + F * f + 2 * (B * b + D * d + E * e)

    return [det(e2), trace_prod(e1, _adjugate(e2)), trace_prod(_adjugate(e1), e2), det(e1)]


def _split_exact(S):
    """Split a rank <= 2 exact conic into its two lines (equal lines for rank 1)."""
    adj = _adjugate(S)
    A, B, C, D, E, F = S
    M = [[A, B, D], [B, C, E], [D, E, F]]
    if all(v == 0 for v in adj):
        k = max(range(3), key=lambda i: abs(M[i][i]))
        if M[k][k] == 0:
            raise DegenerateConic("zero conic")
        # M = s l l^T with l = row_k / sqrt(|M_kk|); scale freely
        return tuple(M[k]), tuple(M[k]), True
    Adj = [[adj[0], adj[1], adj[3]], [adj[1], adj[2], adj[4]], [adj[3], adj[4], adj[5]]]
    k = max(range(3), key=lambda i: abs(Adj[i][i]))
    beta = field_sqrt(Fraction(-Adj[k][k]))
    p = [Fraction(Adj[i][k]) / beta for i in range(3)]
    Mp = [[0, p[2], -p[1]], [-p[2], 0, p[0]], [p[1], -p[0], 0]]
    R = [[M[i][j] + Mp[i][j] for j in range(3)] for i in range(3)]
    i, j = max(((i, j) for i in range(3) for j in range(3)), key=lambda ij: abs(R[ij[0]][ij[1]]))
    l = tuple(R[i][c] for c in range(3))
    m = tuple(R[r][j] for r in range(3))
    return l, m, False


def _split_float(S, merge_tol):
    """Eigen-split of a float rank <= 2 conic; ``None`` for imaginary line pairs."""
    A, B, C, D, E, F = S
    M = np.array([[A, B, D], [B, C, E], [D, E, F]], dtype=float)
    w, V = np.linalg.eigh(M)
    order = np.argsort(-np.abs(w))
    w, V = w[order], V[:, order]
    if abs(w[1]) <= merge_tol * abs(w[0]):
        l = tuple(V[:, 0])
        return l, l, True
    if w[0] * w[1] > 0:
        return None
    a, b = math.sqrt(abs(w[0])), math.sqrt(abs(w[1]))
    l = tuple(a * V[:, 0] + b * V[:, 1])
    m = tuple(a * V[:, 0] - b * V[:, 1])
    return l, m, False


def _merge_into(acc: IntersectionSet, new: IntersectionSet, merge_tol: float, factor: int = 1):
    for p, m in new.points:
        for idx, (q, mq) in enumerate(acc.points):
            if vec_distance(p.coords, q.coords) <= (0.0 if p.is_exact and q.is_exact else merge_tol):
                acc.points[idx] = (q, mq + m * factor)
                break
        else:
            acc.points.append((p, m * factor))
    for cp in new.conjugate_pairs:
        acc.conjugate_pairs.append(ConjugatePairQuadratic(cp.base, cp.coeffs, cp.multiplicity * factor))


def _refine(e1, e2, v, iterations: int = 3):
    """Newton polish of a transverse common point in its best affine chart."""
    v = np.array(float_direction(v))
    k = int(np.argmax(np.abs(v)))
    v = v / v[k]
    idx = [i for i in range(3) if i != k]
    Q1 = np.array([[e1[0], e1[1], e1[3]], [e1[1], e1[2], e1[4]], [e1[3], e1[4], e1[5]]])
    Q2 = np.array([[e2[0], e2[1], e2[3]], [e2[1], e2[2], e2[4]], [e2[3], e2[4], e2[5]]])
    for _ in range(iterations):
        f = np.array([v @ Q1 @ v, v @ Q2 @ v])
        J = np.array([2 * (Q1 @ v)[idx], 2 * (Q2 @ v)[idx]])
        if abs(np.linalg.det(J)) < 1e-10:
            break
        step = np.linalg.solve(J, f)
        v[idx] -= step
    return tuple(float(x) for x in v)


def conic_conic_intersect(C1: Conic, C2: Conic, merge_tol: float = MERGE_TOL,
                          tol: float = 1e-12) -> IntersectionSet:
    """All common points of two distinct nondegenerate conics.

    A degenerate member of the pencil ``t*C1 + C2`` (a real root of its
    determinant cubic) is split into two lines, each of which is intersected
    with ``C1``. Among the real roots the best conditioned one is used:
    the score is the smaller of the root's isolation from the other roots and
    the separation of its two lines.
    """
    if C1 == C2 or (not (C1.is_exact and C2.is_exact) and C1.distance(C2) <= tol):
        raise IdenticalConics("conics coincide")
    if _is_degenerate(C1, tol) or _is_degenerate(C2, tol):
        raise DegenerateConic("conic_conic_intersect needs nondegenerate conics")
    if C1.is_exact and C2.is_exact:
        return _conic_conic_exact(C1, C2)
    e1, e2 = _float_entries(C1.entries), _float_entries(C2.entries)
    cub = _cubic_coefficients(e1, e2)
    roots = np.roots(list(reversed(cub)))
    best = None
    for i, r in enumerate(roots):
        scale = 1.0 + abs(r)
        if abs(r.imag) > 1e-6 * scale:
            continue
        t = float(r.real)
        # Newton polish on the cubic
        for _ in range(2):
            f = ((cub[3] * t + cub[2]) * t + cub[1]) * t + cub[0]
            df = (3 * cub[3] * t + 2 * cub[2]) * t + cub[1]
            if df == 0:
                break
            t -= f / df
        iso = min((abs(t - o) / math.sqrt((1 + t * t) * (1 + abs(o) ** 2))
                   for j, o in enumerate(roots) if j != i), default=1.0)
        S = _normalize_entries(tuple(t * x + y for x, y in zip(e1, e2)))
        split = _split_float(S, merge_tol)
        if split is None:
            continue
        l, m, rank1 = split
        if rank1:
            score = iso * merge_tol
        else:
            sep = vec_distance(l, m)
            score = min(iso, sep)
        if best is None or score > best[0]:
            best = (score, l, m, rank1)
    if best is None:
        raise DegenerateConic("no real line-pair member in the pencil")
    _, l, m, rank1 = best
    C1f = Conic._make(e1)
    out = IntersectionSet()
    lines = [l] if rank1 else [l, m]
    for line in lines:
        part = line_conic_intersect(HLine._make(line), C1f, merge_tol)
        _merge_into(out, part, merge_tol, factor=2 if rank1 else 1)
    polished = []
    for p, mult in out.points:
        if mult == 1:
            p = HPoint._make(_refine(e1, e2, p.coords))
        polished.append((p, mult))
    out.points = polished
    return out


def _rational_roots_of_cubic(cub):
    """Rational roots of an exact cubic, located numerically and verified exactly."""
    fr = [Fraction(c) for c in cub]
    m = max(abs(c) for c in fr)
    approx = np.roots([float(c / m) for c in reversed(fr)])
    found = []
    for r in approx:
        if abs(r.imag) > 1e-6 * (1 + abs(r)):
            continue
        for cand in (Fraction(float(r.real)).limit_denominator(10**9), Fraction(round(r.real))):
            val = ((fr[3] * cand + fr[2]) * cand + fr[1]) * cand + fr[0]
            if val == 0 and cand not in found:
                found.append(cand)
    return found


def _conic_conic_exact(C1: Conic, C2: Conic) -> IntersectionSet:
    e1, e2 = C1.entries, C2.entries
    cub = _cubic_coefficients(e1, e2)
    for t in _rational_roots_of_cubic(cub):
        S = tuple(t * x + y for x, y in zip(e1, e2))
        try:
            l, m, rank1 = _split_exact(S)
            out = IntersectionSet()
            for line in ([l] if rank1 else [l, m]):
                part = line_conic_intersect(HLine._make(line), C1)
                _merge_into(out, part, 0.0, factor=2 if rank1 else 1)
            return out
        except NotExactlyRepresentable:
            continue
    raise NotExactlyRepresentable("intersection points are not all rational")


# ---------------------------------------------------------------------------
# metric structure

def conic_center(C: Conic, tol: float = 1e-12) -> HPoint:
    """Center of a central conic: the pole of the line at infinity."""
    if _is_degenerate(C, tol):
        raise DegenerateConic("degenerate conic has no center")
    adj = C.adjugate_entries()
    c = (adj[3], adj[4], adj[5])
    if C.is_exact:
        if c[2] == 0:
            raise ParabolaHasNoCenter("parabola")
    else:
        A, B, Cc, *_ = _float_entries(C.entries)
        if abs(A * Cc - B * B) <= tol:
            raise ParabolaHasNoCenter("parabola")
    return HPoint._make(c)


def is_circle(C: Conic, tol: float = CIRCLE_TOL) -> bool:
    A, B, Cc = C.entries[:3]
    if C.is_exact:
        return B == 0 and A == Cc
    A, B, Cc = _float_entries(C.entries)[:3]
    return abs(A - Cc) <= tol and abs(B) <= tol


def conic_axes(C: Conic, tol: float = 1e-12) -> Tuple[HLine, HLine]:
    """The two symmetry axes of a central, non-circular conic.

    The first axis belongs to the eigenvalue of smaller magnitude of the
    quadratic part (the major axis of an ellipse).
    """
    if is_circle(C):
        raise CircleAxesUndefined("every diameter of a circle is an axis")
    O = conic_center(C, tol)
    A, B, Cc = C.entries[:3]
    if not C.is_exact:
        A, B, Cc = _float_entries(C.entries)[:3]
    r = field_sqrt((A - Cc) ** 2 + 4 * B * B)
    axes = []
    for lam in ((A + Cc + r) / 2, (A + Cc - r) / 2):
        d1 = (B, lam - A)
        d2 = (lam - Cc, B)
        d = d1 if abs(d1[0]) + abs(d1[1]) >= abs(d2[0]) + abs(d2[1]) else d2
        axes.append((abs(lam), line_through(O, d)))
    axes.sort(key=lambda item: item[0])
    return axes[0][1], axes[1][1]


def extreme_points(C: Conic, tol: float = 1e-12) -> List[HPoint]:
    """Real intersections of a central conic with its axes (its vertices)."""
    out = []
    for axis in conic_axes(C, tol):
        out.extend(line_conic_intersect(axis, C).real_points())
    return out


class ConicClass(enum.Enum):
    REAL_ELLIPSE = "RealEllipse"
    CIRCLE = "Circle"
    PARABOLA = "Parabola"
    HYPERBOLA = "Hyperbola"
    DEGENERATE_LINE_PAIR = "DegenerateLinePair"
    DEGENERATE_DOUBLE_LINE = "DegenerateDoubleLine"
    IMAGINARY_ELLIPSE = "ImaginaryEllipse"


def conic_classify(C: Conic, tol: float = 1e-12) -> ConicClass:
    e = C.entries if C.is_exact else _float_entries(C.entries)

    def zero(v):
        return v == 0 if C.is_exact else abs(v) <= tol

    A, B, Cc, D, E, F = e
    det = A * (Cc * F - E * E) - B * (B * F - E * D) + D * (B * E - Cc * D)
    if zero(det):
        if all(zero(v) for v in _adjugate(e)):
            return ConicClass.DEGENERATE_DOUBLE_LINE
        return ConicClass.DEGENERATE_LINE_PAIR
    delta = A * Cc - B * B
    if zero(delta):
        return ConicClass.PARABOLA
    if delta < 0:
        return ConicClass.HYPERBOLA
    if (A + Cc) * det > 0:
        return ConicClass.IMAGINARY_ELLIPSE
    return ConicClass.CIRCLE if is_circle(C) else ConicClass.REAL_ELLIPSE


# ---------------------------------------------------------------------------
# rational parametrization

class ConicParam:
    """Parametrize a conic by the pencil of lines through a base point on it.

    The line through ``base`` and ``u*q0 + s*q1`` meets the conic again at
    ``point((s, u)) = u^2 x0 + s u x1 + s^2 x2``. With the default frame
    ``q0`` lies on the tangent at ``base``, so the base point sits at
    parameter ``t = s/u = 0``. Two conics through the same base point
    parametrized with the same frame share parameters along each line.
    """

    def __init__(self, conic: Conic, base: HPoint, frame: Optional[Tuple[Vec3, Vec3]] = None):
        self.conic = conic
        exact = conic.is_exact and base.is_exact and (frame is None or is_exact(list(frame[0]) + list(frame[1])))
        if exact:
            p = base.coords
        else:
            p = float_direction(base.coords)
            if conic.is_exact:
                conic = conic.to_float()
        self._Q = conic
        self.base = p
        self.tangent = conic.apply(p)
        if frame is None:
            q0 = cross(self.tangent, p)
            q1 = cross(p, q0)
            if not exact:
                q0, q1 = float_direction(q0), float_direction(q1)
        else:
            q0, q1 = frame
            if not exact:
                q0, q1 = float_direction(q0), float_direction(q1)
        self.frame = (q0, q1)
        Q = conic
        a0, a1, a2 = Q.bilinear(q0, q0), 2 * Q.bilinear(q0, q1), Q.bilinear(q1, q1)
        k0, k1 = Q.bilinear(p, q0), Q.bilinear(p, q1)
        self.x = (
            tuple(a0 * p[i] - 2 * k0 * q0[i] for i in range(3)),
            tuple(a1 * p[i] - 2 * k1 * q0[i] - 2 * k0 * q1[i] for i in range(3)),
            tuple(a2 * p[i] - 2 * k1 * q1[i] for i in range(3)),
        )

    def point_vec(self, root) -> Vec3:
        s, u = root
        x0, x1, x2 = self.x
        return tuple(u * u * x0[i] + s * u * x1[i] + s * s * x2[i] for i in range(3))

    def point(self, root) -> HPoint:
        return HPoint._make(self.point_vec(root))

    def param_of(self, p) -> Tuple[Scalar, Scalar]:
        """Homogeneous parameter ``(s, u)`` of a point of the conic."""
        v = p.coords if hasattr(p, "coords") else p
        q0, q1 = self.frame
        l = cross(self.base, v)
        if all(c == 0 for c in l) or (not is_exact(l) and vec_distance(self.base, v) <= 1e-13):
            l = self.tangent
        return (dot(l, q0), -dot(l, q1))

    def pullback(self, other: Conic) -> List[Scalar]:
        """Quartic ``other(point(t))`` (ascending coefficients in ``t``)."""
        x0, x1, x2 = self.x
        Q = other
        if not is_exact(x0) and other.is_exact:
            Q = other.to_float()
        return [
            Q.bilinear(x0, x0),
            2 * Q.bilinear(x0, x1),
            Q.bilinear(x1, x1) + 2 * Q.bilinear(x0, x2),
            2 * Q.bilinear(x1, x2),
            Q.bilinear(x2, x2),
        ]

    def pullback_line(self, l: HLine) -> List[Scalar]:
        v = l.coords if is_exact(self.x[0]) else float_direction(l.coords)
        return [dot(v, x) for x in self.x]

    def chord(self, quad: Sequence[Scalar]) -> HLine:
        """Real line through the two (possibly complex) points whose parameters
        are the roots of ``quad`` (ascending coefficients)."""
        c, b, a = quad
        x0, x1, x2 = self.x
        c01, c02, c12 = cross(x0, x1), cross(x0, x2), cross(x1, x2)
        return HLine._make(tuple(a * c01[i] - b * c02[i] + c * c12[i] for i in range(3)))


def intersection_multiplicity_at(C1: Conic, C2: Conic, p: HPoint, tol: float = 1e-6,
                                 on_tol: float = DEFAULT_TOL) -> int:
    """Intersection multiplicity (0..4) of two conics at ``p``.

    ``C1`` is parametrized from ``p`` so that ``p`` sits at ``t = 0``; the
    multiplicity is the order of vanishing at ``0`` of ``C2`` pulled back to
    that parameter.
    """
    if C1 == C2 or (not (C1.is_exact and C2.is_exact) and C1.distance(C2) <= 1e-14):
        raise IdenticalConics("conics coincide")
    if not (C1.contains(p, on_tol) and C2.contains(p, on_tol)):
        return 0
    quartic = ConicParam(C1, p).pullback(C2)
    if not is_exact(quartic):
        quartic = polys.normalized(quartic)
    return min(4, polys.order_at_zero(quartic, tol))


def cross_ratio_on_conic(C: Conic, a: HPoint, b: HPoint, c: HPoint, d: HPoint, e: HPoint,
                         tol: float = DEFAULT_TOL):
    """Cross ratio of ``a, b; c, d`` on ``C`` seen from a fifth point ``e`` of ``C``."""
    for p in (a, b, c, d, e):
        _require_on(C, p, tol)
    for p in (a, b, c, d):
        if vec_distance(p.coords, e.coords) <= (0.0 if p.is_exact and e.is_exact else tol):
            raise CoincidentPoints("projection point must differ from the four points")
    return cross_ratio_pencil(e, a, b, c, d)
