"""Configuration builders.

Each builder takes a triangle and a point ``P`` (already in the target scalar
mode) and constructs every named witness of one configuration. Wherever a
point is "the other intersection" of a line with a conic we use
:func:`second_intersection`; conics sharing ``A, B, C`` meet again at
:func:`fourth_common_point`. Both are rational, so exact inputs keep every
witness exact. Residual common points of a circle and a conic that already
share two known points come from deflating the pencil pullback quartic.

Random extras that some claims need (free points, sample parameters) are drawn
from the ``rng`` passed to the builder and stored in ``samples``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from .. import polys
from ..conics import (
    MERGE_TOL,
    Conic,
    ConicClass,
    ConicParam,
    conic_axes,
    conic_center,
    conic_classify,
    fourth_common_point,
    second_intersection,
)
from ..errors import (
    CircleConic,
    DegenerateConfig,
    GeometryError,
)
from ..projective import HLine, HPoint, cross, join, meet, parallel_through, vec_distance
from ..scalars import Scalar, is_exact
from ..triangle import (
    Triangle,
    circle_through,
    circumcircle,
    circumconic,
    isogonal_conjugate,
    radical_axis,
    spiral_center,
)

SAMPLE_DEN = 64


# ---------------------------------------------------------------------------
# small helpers shared by the builders and the claim checks

def as_mode(value, exact: bool) -> Scalar:
    return Fraction(value) if exact else float(value)


def point_in_mode(p: HPoint, exact: bool) -> HPoint:
    if exact:
        return p
    return HPoint(*(float(c) for c in p.coords))


def triangle_in_mode(T: Triangle, exact: bool) -> Triangle:
    return Triangle(*(point_in_mode(v, exact) for v in T.vertices))


def same_point(p: HPoint, q: HPoint, tol: float = MERGE_TOL) -> bool:
    if p.is_exact and q.is_exact:
        return p == q
    return vec_distance(p.coords, q.coords) <= tol


def affine_lerp(p: HPoint, q: HPoint, t) -> HPoint:
    """``p + t (q - p)`` on affine coordinates."""
    (px, py), (qx, qy) = p.affine(), q.affine()
    one = 1 if p.is_exact and q.is_exact and not isinstance(t, float) else 1.0
    return HPoint(px + t * (qx - px), py + t * (qy - py), one)


def second_on(C: Conic, p: HPoint, through: HPoint) -> HPoint:
    """Other intersection of ``C`` with the line from ``p`` (on ``C``) to ``through``."""
    return second_intersection(C, p, join(p, through))


def second_on_line(C: Conic, p: HPoint, l: HLine) -> HPoint:
    return second_intersection(C, p, l)


def residual_pair(param: ConicParam, other: Conic, known) -> List[Scalar]:
    """Quadratic in ``param``'s parameter whose roots are the common points of
    ``param.conic`` and ``other`` beyond the base point and the ``known`` point.

    The base point contributes a root at ``t = 0``, removed by dropping the
    constant coefficient; ``known`` is deflated explicitly.
    """
    quartic = param.pullback(other)
    cubic = quartic[1:]
    quad, _ = polys.deflate(cubic, param.param_of(known))
    return quad


def line_param(P: HPoint, Pstar: HPoint):
    """Parametrization ``u*P + s*(P' - P)`` of line ``PP'``: returns
    ``(base, direction, to_param)`` with ``P = (0:1)``, ``P' = (1:1)`` and the
    point at infinity at ``(1:0)``."""
    base = P.affine_vec()
    (px, py), (qx, qy) = P.affine(), Pstar.affine()
    d = (qx - px, qy - py, 0 * px)
    n = cross(base, d)

    def to_param(y: HPoint):
        v = y.coords
        if not is_exact(v):
            v = tuple(float(c) for c in y.normalized())
        s = -sum(a * b for a, b in zip(cross(v, base), n))
        u = sum(a * b for a, b in zip(cross(v, d), n))
        return s, u

    return base, d, to_param


def draw_rational(rng: np.random.Generator, lo: float, hi: float, den: int = SAMPLE_DEN) -> Fraction:
    return Fraction(int(rng.integers(int(lo * den), int(hi * den) + 1)), den)


def draw_nonzero(rng: np.random.Generator, lo: float, hi: float, den: int = SAMPLE_DEN,
                 avoid: Tuple = (0,), radius: float = 0.05) -> Fraction:
    while True:
        v = draw_rational(rng, lo, hi, den)
        if all(abs(v - a) > radius for a in avoid):
            return v


def draw_free_point(rng: np.random.Generator, T: Triangle, den: int = SAMPLE_DEN) -> HPoint:
    """Rational point inside the circumdisk, away from the sidelines and the circle."""
    Om = circumcircle(T)
    xs = [float(v.affine()[0]) for v in T.vertices]
    ys = [float(v.affine()[1]) for v in T.vertices]
    size = max(max(xs) - min(xs), max(ys) - min(ys))
    cx, cy = sum(xs) / 3, sum(ys) / 3
    lines = [tuple(float(c) for c in l.normalized()) for l in T.sidelines()]
    A, B, Cc, D, E, F = (float(v) for v in Om.to_float().entries)
    for _ in range(1000):
        x = draw_rational(rng, cx - size, cx + size, den)
        y = draw_rational(rng, cy - size, cy + size, den)
        xf, yf = float(x), float(y)
        if A * (A * xf * xf + 2 * B * xf * yf + Cc * yf * yf + 2 * D * xf + 2 * E * yf + F) >= -0.01 * (D * D + E * E - A * F):
            continue
        if min(abs(l[0] * xf + l[1] * yf + l[2]) / np.hypot(l[0], l[1]) for l in lines) < 0.02 * size:
            continue
        return HPoint(x, y)
    raise DegenerateConfig("could not place a free point")


# ---------------------------------------------------------------------------
# configuration records

@dataclass
class _Record:
    def witnesses(self) -> Dict[str, object]:
        """Named points and conics of the configuration (``None`` when absent)."""
        out = {}
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, (HPoint, HLine, Conic)) or v is None:
                out[f.name] = v
        return out


@dataclass
class MainConfigOne(_Record):
    T: Triangle
    P: HPoint
    Pstar: HPoint
    t_Q: Scalar
    Q: HPoint
    Qstar: HPoint
    Omega: Conic
    H: Conic
    E_conic: Conic
    C1: Conic
    gamma: Conic
    D: HPoint
    X: HPoint
    L: Optional[HPoint]
    V: Optional[HPoint]
    M: HPoint
    N: Optional[HPoint] = None
    E: Optional[HPoint] = None
    F: Optional[HPoint] = None
    Fprime: Optional[HPoint] = None
    G: Optional[HPoint] = None
    K: Optional[HPoint] = None
    R: Optional[HPoint] = None
    S: Optional[HPoint] = None
    Tpt: Optional[HPoint] = None
    J: Optional[HPoint] = None
    Hpt: Optional[HPoint] = None
    omega: Optional[Conic] = None
    X12: Tuple[Scalar, Scalar, Scalar] = ()
    W: Optional[HPoint] = None
    Wstar: Optional[HPoint] = None
    notes: Dict[str, object] = field(default_factory=dict)
    samples: Dict[str, object] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.P.is_exact


@dataclass
class TwoTangencyConfig(_Record):
    T: Triangle
    P: HPoint
    Pstar: HPoint
    Omega: Conic
    H: Conic
    D: HPoint
    X: HPoint
    Y: HPoint
    gamma: Conic
    Z: HPoint
    z_is_p: bool
    C1: Conic
    U: HPoint
    C2: Conic
    E_conic: Optional[Conic] = None
    G: Optional[HPoint] = None
    Gprime: Optional[HPoint] = None
    I: Optional[HPoint] = None
    F: Optional[HPoint] = None
    W: Optional[HPoint] = None
    Yprime: Optional[HPoint] = None
    Z12: Tuple[Scalar, Scalar, Scalar] = ()
    chord_Z12p: Optional[HLine] = None
    DA: Optional[HPoint] = None
    PA: Optional[HPoint] = None
    PAstar: Optional[HPoint] = None
    A1: Optional[HPoint] = None
    notes: Dict[str, object] = field(default_factory=dict)
    samples: Dict[str, object] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.P.is_exact


@dataclass
class ExtremePointConfig(_Record):
    T: Triangle
    P: HPoint
    Pstar: HPoint
    Omega: Conic
    H: Conic
    D: HPoint
    Dprime: HPoint
    dprime_is_d: bool
    C: Conic
    conic_class: ConicClass
    center: Optional[HPoint] = None
    axes: Optional[Tuple[HLine, HLine]] = None
    P0_quad: Tuple[Scalar, Scalar, Scalar] = ()
    notes: Dict[str, object] = field(default_factory=dict)

    @property
    def exact(self) -> bool:
        return self.P.is_exact

    @property
    def is_parabola(self) -> bool:
        return self.conic_class is ConicClass.PARABOLA


# ---------------------------------------------------------------------------
# shared front half: Omega, P', H, D

def _isogonal_front(T: Triangle, P: HPoint):
    Om = circumcircle(T)
    if Om.contains(P, 0.0 if P.is_exact else 1e-12):
        raise DegenerateConfig("P lies on the circumcircle")
    Ps = isogonal_conjugate(T, P)
    if Ps.is_infinite(0.0 if Ps.is_exact else 1e-12):
        raise DegenerateConfig("isogonal conjugate of P is at infinity")
    if same_point(P, Ps, 0.0 if P.is_exact else 1e-9):
        raise DegenerateConfig("P is fixed by isogonal conjugation; line PP' undefined")
    H = circumconic(T, P, Ps)
    try:
        D = fourth_common_point(Om, H, T.A, T.B, T.C)
    except GeometryError as exc:
        raise DegenerateConfig(f"fourth common point of circumcircle and (ABCPP'): {exc}") from exc
    if D.is_infinite():
        raise DegenerateConfig("D is at infinity")
    return Om, Ps, H, D


def _wrap(builder):
    def run(*args, **kwargs):
        try:
            return builder(*args, **kwargs)
        except DegenerateConfig:
            raise
        except GeometryError as exc:
            raise DegenerateConfig(f"{type(exc).__name__}: {exc}") from exc
        except ZeroDivisionError as exc:
            raise DegenerateConfig(f"division by zero: {exc}") from exc

    run.__name__ = builder.__name__
    run.__doc__ = builder.__doc__
    return run


@_wrap
def build_main_config_one(T: Triangle, P: HPoint, t_Q, rng: Optional[np.random.Generator] = None,
                          auxiliaries: bool = True) -> MainConfigOne:
    """Main configuration: ``Q`` on ``PP'``, the circle ``(PQX)`` and ``(ABCPQ)``."""
    exact = P.is_exact
    t_Q = as_mode(t_Q, exact)
    Om, Ps, H, D = _isogonal_front(T, P)
    X = second_on(Om, D, P)
    if same_point(X, D, 0.0 if exact else 1e-12):
        raise DegenerateConfig("line DP is tangent to the circumcircle")
    Q = affine_lerp(P, Ps, t_Q)
    if same_point(Q, P, 0.0 if exact else 1e-12) or same_point(Q, Ps, 0.0 if exact else 1e-12):
        raise DegenerateConfig("Q coincides with P or P'")
    Qs = isogonal_conjugate(T, Q)
    if Qs.is_infinite(0.0 if exact else 1e-12):
        raise DegenerateConfig("Q lies on the circumcircle")
    E_conic = circumconic(T, P, Q)
    gamma = circle_through(P, Q, X)
    C1 = circumconic(T, P, X)

    # L: third common point of gamma and (ABCPQ); P is a double root at t = 0
    gp = ConicParam(gamma, P)
    quartic = gp.pullback(E_conic)
    quad_after_p = quartic[2:]
    lin, _ = polys.deflate(quad_after_p, gp.param_of(Q))
    L = V = None
    notes: Dict[str, object] = {}
    if all(c == 0 for c in lin):
        notes["L"] = "gamma lies on (ABCPQ)"
    else:
        rootL = (-lin[0], lin[1])
        qroot = gp.param_of(Q)
        sep_p = polys.root_separation(rootL, (0, 1)) if not exact else (0.0 if rootL[0] == 0 else 1.0)
        if exact:
            sep_q = 0.0 if rootL[0] * qroot[1] - rootL[1] * qroot[0] == 0 else 1.0
        else:
            sep_q = polys.root_separation(rootL, qroot)
        if sep_p <= (0.0 if exact else MERGE_TOL) or sep_q <= (0.0 if exact else MERGE_TOL):
            notes["L"] = "tangent at both P and Q"
        else:
            L = gp.point(rootL)
            notes["L_separation"] = float(min(sep_p, sep_q))
            V = second_on(C1, P, L)
    M = spiral_center(P, Q, Qs, Ps)

    cfg = MainConfigOne(T=T, P=P, Pstar=Ps, t_Q=t_Q, Q=Q, Qstar=Qs, Omega=Om, H=H, E_conic=E_conic,
                        C1=C1, gamma=gamma, D=D, X=X, L=L, V=V, M=M, notes=notes)
    _, d, _ = line_param(P, Ps)
    base = P.affine_vec()
    cfg.X12 = (Om.bilinear(base, base), 2 * Om.bilinear(base, d), Om.bilinear(d, d))
    if auxiliaries:
        _main_auxiliaries(cfg)
    if rng is not None:
        _main_samples(cfg, rng)
    return cfg


def _main_auxiliaries(cfg: MainConfigOne):
    """Auxiliary witnesses: N, E, F, F', G, K, R, S, T, J, H."""
    Om, P, Ps, Qs, M, D, X, Q = cfg.Omega, cfg.P, cfg.Pstar, cfg.Qstar, cfg.M, cfg.D, cfg.X, cfg.Q
    try:
        omega = circle_through(P, Ps, Qs)
        cfg.omega = omega
        cfg.N = second_on_line(Om, M, radical_axis(omega, Om))
        cfg.E = second_on(omega, M, D)
        cfg.G = second_on(Om, cfg.N, P)
        cfg.F = second_on(Om, cfg.N, Ps)
        cfg.Fprime = second_on(Om, X, Q)
        cfg.K = second_on(Om, M, P)
        cfg.R = second_on(Om, cfg.N, Q)
        cfg.S = second_on_line(Om, cfg.N, parallel_through(cfg.N, join(P, Ps)))
        cfg.J = meet(join(P, Ps), join(M, cfg.N))
        cfg.Tpt = meet(join(M, cfg.S), join(D, cfg.R))
        cfg.Hpt = second_on(cfg.gamma, M, cfg.G)
    except GeometryError as exc:
        cfg.notes["auxiliaries"] = f"{type(exc).__name__}: {exc}"


def _main_samples(cfg: MainConfigOne, rng: np.random.Generator):
    exact = cfg.exact
    T = cfg.T
    W = draw_free_point(rng, T)
    cfg.samples["fact_line_dir"] = (draw_rational(rng, -1, 1), draw_rational(rng, -1, 1))
    cfg.samples["fact_E_params"] = [draw_rational(rng, -4, 4) for _ in range(5)]
    cfg.samples["lemma22_params"] = [draw_nonzero(rng, -2, 3, avoid=(0, 1)) for _ in range(4)]
    W = point_in_mode(W, exact)
    cfg.W = W
    try:
        cfg.Wstar = isogonal_conjugate(T, W)
    except GeometryError as exc:
        cfg.notes["W"] = str(exc)


@_wrap
def build_two_tangency_config(T: Triangle, P: HPoint, rng: Optional[np.random.Generator] = None,
                              auxiliaries: bool = True) -> TwoTangencyConfig:
    """Configuration where the circle ``(PXY)`` touches ``(ABCPZ)`` at ``P`` and ``Z``."""
    exact = P.is_exact
    Om, Ps, H, D = _isogonal_front(T, P)
    X = second_on(Om, D, P)
    Y = second_on(Om, D, Ps)
    if same_point(X, D, 0.0 if exact else 1e-12) or same_point(Y, D, 0.0 if exact else 1e-12):
        raise DegenerateConfig("DP or DP' is tangent to the circumcircle")
    if same_point(X, Y, 0.0 if exact else 1e-12):
        raise DegenerateConfig("X coincides with Y")
    gamma = circle_through(P, X, Y)
    Z = second_on(gamma, P, Ps)
    z_is_p = same_point(Z, P, 0.0 if exact else MERGE_TOL)
    C1 = circumconic(T, P, X)
    U = second_on(Om, Y, P)
    C2 = circumconic(T, P, U)
    cfg = TwoTangencyConfig(T=T, P=P, Pstar=Ps, Omega=Om, H=H, D=D, X=X, Y=Y, gamma=gamma, Z=Z,
                            z_is_p=z_is_p, C1=C1, U=U, C2=C2)

    # Z1, Z2: common points of gamma and C1 beyond X and P, as a quadratic on
    # the pencil at X; Z1', Z2' use the same pencil on the circumcircle.
    gp = ConicParam(gamma, X)
    cfg.Z12 = tuple(residual_pair(gp, C1, P))
    op = ConicParam(Om, X, frame=gp.frame)
    try:
        cfg.chord_Z12p = op.chord(cfg.Z12)
    except ValueError:
        cfg.chord_Z12p = None
    if auxiliaries:
        _two_auxiliaries(cfg)
    if rng is not None:
        _two_samples(cfg, rng)
    return cfg


def _two_auxiliaries(cfg: TwoTangencyConfig):
    Om, P, Ps, D, X, Z, T = cfg.Omega, cfg.P, cfg.Pstar, cfg.D, cfg.X, cfg.Z, cfg.T
    try:
        if not cfg.z_is_p:
            cfg.E_conic = circumconic(T, P, Z)
            cfg.G = fourth_common_point(Om, cfg.E_conic, T.A, T.B, T.C)
            cfg.Gprime = second_on(cfg.E_conic, cfg.G, D)
            cfg.I = second_on(cfg.C1, P, Z)
            cfg.F = second_on(Om, X, Z)
            cfg.W = meet(join(D, cfg.F), join(P, Z))
            cfg.Yprime = second_on(cfg.gamma, P, cfg.Gprime)
        A = T.A
        cfg.DA = second_on_line(Om, A, parallel_through(A, join(P, Ps)))
        cfg.PA = second_on(Om, A, P)
        cfg.PAstar = second_on(Om, A, Ps)
        cfg.A1 = second_on(cfg.C1, A, cfg.DA)
    except GeometryError as exc:
        cfg.notes["auxiliaries"] = f"{type(exc).__name__}: {exc}"


def _two_samples(cfg: TwoTangencyConfig, rng: np.random.Generator):
    exact = cfg.exact
    T = cfg.T
    cfg.samples["lemma42_params"] = [draw_nonzero(rng, -4, 4) for _ in range(3)]
    cfg.samples["lemma43_points"] = [point_in_mode(draw_free_point(rng, T), exact) for _ in range(2)]
    cfg.samples["lemma44_points"] = [point_in_mode(draw_free_point(rng, T), exact) for _ in range(3)]


@_wrap
def build_extreme_point_config(T: Triangle, P: HPoint) -> ExtremePointConfig:
    """Configuration of the extreme-point equivalence: ``D'`` with ``DD' || PP'``
    and the circumconic ``(ABCD'P)``."""
    exact = P.is_exact
    Om, Ps, H, D = _isogonal_front(T, P)
    PPs = join(P, Ps)
    Dp = second_on_line(Om, D, parallel_through(D, PPs))
    dprime_is_d = same_point(Dp, D, 0.0 if exact else 1e-12)
    C = circumconic(T, Dp, P)
    cls = conic_classify(C)
    cfg = ExtremePointConfig(T=T, P=P, Pstar=Ps, Omega=Om, H=H, D=D, Dprime=Dp, dprime_is_d=dprime_is_d,
                             C=C, conic_class=cls)
    if cls is ConicClass.CIRCLE:
        raise CircleConic("(ABCD'P) is a circle; axes undefined")
    if cls not in (ConicClass.PARABOLA, ConicClass.DEGENERATE_LINE_PAIR, ConicClass.DEGENERATE_DOUBLE_LINE):
        cfg.center = conic_center(C)
        try:
            cfg.axes = conic_axes(C)
        except GeometryError as exc:
            cfg.notes["axes"] = str(exc)
    else:
        cfg.notes["class"] = cls.value
    tangent = HLine._make(H.apply(Ps.coords))
    try:
        op = ConicParam(Om, T.A)
        cfg.P0_quad = tuple(op.pullback_line(tangent))
    except GeometryError:
        pass
    return cfg
