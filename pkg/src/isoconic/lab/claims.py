"""Claim registry and per-configuration checks.

Every claim maps a configuration record to a scale-free residual. In exact
mode a claim passes only with a residual of exactly zero; in float mode it
passes when the residual is within the tolerance. Any geometric failure while
evaluating a claim (a coincidence, a missing intersection) marks the trial as
degenerate rather than failed.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .. import polys
from ..conics import Conic, ConicParam, fourth_common_point, second_intersection
from ..errors import DegenerateConfig, GeometryError, WrongConfigVariant
from ..projective import (
    HLine,
    HPoint,
    collinearity_residual,
    incidence_residual,
    involution_from_homogeneous_pairs,
    join,
    line_through,
    meet,
    parallel_residual,
    parallel_through,
    vec_distance,
)
from ..scalars import is_exact
from ..triangle import circle_through, circumconic, isogonal_conjugate, radical_axis, spiral_center
from .configs import (
    ExtremePointConfig,
    MainConfigOne,
    TwoTangencyConfig,
    affine_lerp,
    as_mode,
    line_param,
    residual_pair,
    second_on,
    second_on_line,
)

DEFAULT_FLOAT_TOL = 1e-6
#: A root-found premise counts as satisfied at this level.
PREMISE_TOL = 1e-9


class ClaimStatus(enum.Enum):
    PASS = "Pass"
    FAIL = "Fail"
    SKIPPED = "DegenerateSkipped"


@dataclass
class ClaimResult:
    claim_id: str
    status: ClaimStatus
    residual: float = 0.0
    witness: Dict[str, object] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status is ClaimStatus.PASS


class Skip(Exception):
    """Raised inside a check when the trial is degenerate for this claim."""


@dataclass(frozen=True)
class Claim:
    claim_id: str
    variant: type
    exact_capable: bool
    summary: str
    check: Callable


REGISTRY: Dict[str, Claim] = {}


def _register(claim_id: str, variant: type, exact_capable: bool, summary: str):
    def deco(fn):
        REGISTRY[claim_id] = Claim(claim_id, variant, exact_capable, summary, fn)
        return fn

    return deco


def _tangent(C: Conic, p: HPoint):
    return C.apply(p.coords)


def _tangent_residual(C1: Conic, C2: Conic, p: HPoint) -> float:
    """0 when the two conics have the same tangent line at ``p``."""
    return vec_distance(_tangent(C1, p), _tangent(C2, p))


# ---------------------------------------------------------------------------
# main configuration

@_register("fact-2.1", MainConfigOne, True,
           "For a fixed conic H through A, B, C and a line l through a point W, the conic (ABCWE) "
           "meets l again at F; as E moves on H, line EF keeps passing through one point G of H.")
def check_fact_2_1(cfg: MainConfigOne):
    if cfg.W is None:
        raise Skip("no free point")
    T, H, W = cfg.T, cfg.H, cfg.W
    exact = cfg.exact
    dx, dy = (as_mode(v, exact) for v in cfg.samples["fact_line_dir"])
    if dx == 0 and dy == 0:
        raise Skip("zero direction")
    ell = line_through(W, (dx, dy))
    param = ConicParam(H, T.A)
    gs = []
    for t in cfg.samples["fact_E_params"]:
        try:
            E = param.point((as_mode(t, exact), 1))
            Ec = circumconic(T, W, E)
            F = second_on_line(Ec, W, ell)
            G = second_on(H, E, F)
        except GeometryError:
            continue
        gs.append(G)
    if len(gs) < 3:
        raise Skip("fewer than three usable samples of E")
    res = max(vec_distance(gs[0].coords, g.coords) for g in gs[1:])
    return res, {"samples": len(gs), "G": gs[0]}


def _lemma_2_2_residual(cfg: MainConfigOne, Q: HPoint, Qs: HPoint, r, r2) -> float:
    T = cfg.T
    R = affine_lerp(cfg.P, Q, r)
    R2 = affine_lerp(cfg.Pstar, Qs, r2)
    Ca = circumconic(T, cfg.P, R)
    Cb = circumconic(T, Qs, R2)
    S = fourth_common_point(Ca, Cb, T.A, T.B, T.C)
    return collinearity_residual(R, R2, S)


@_register("lemma-2.2", MainConfigOne, True,
           "For isogonal pairs (P, P'), (Q, Q') and points R on PQ, R' on P'Q', the conics (ABCPR) "
           "and (ABCQ'R') meet a fourth time on line RR'.")
def check_lemma_2_2(cfg: MainConfigOne):
    exact = cfg.exact
    r = [as_mode(v, exact) for v in cfg.samples["lemma22_params"]]
    res = []
    if cfg.W is not None and cfg.Wstar is not None:
        res.append(_lemma_2_2_residual(cfg, cfg.W, cfg.Wstar, r[0], r[1]))
    res.append(_lemma_2_2_residual(cfg, cfg.Q, cfg.Qstar, r[2], r[3]))
    return max(res), {"pairs": len(res)}


@_register("lemma-2.3", MainConfigOne, True,
           "The center of the spiral similarity taking P to Q' and Q to P' lies on the circumcircle, "
           "for Q on line PP' and for a free point Q.")
def check_lemma_2_3(cfg: MainConfigOne):
    M = spiral_center(cfg.P, cfg.Q, cfg.Qstar, cfg.Pstar)
    res = [cfg.Omega.residual(M)]
    if cfg.W is not None and cfg.Wstar is not None:
        M2 = spiral_center(cfg.P, cfg.W, cfg.Wstar, cfg.Pstar)
        res.append(cfg.Omega.residual(M2))
    return max(res), {"M": M}


@_register("thm-1.1a", MainConfigOne, True,
           "The circle (PQX) and the conic (ABCPQ) have the same tangent at P.")
def check_thm_1_1a(cfg: MainConfigOne):
    return _tangent_residual(cfg.gamma, cfg.E_conic, cfg.P), {}


@_register("thm-1.1b", MainConfigOne, True,
           "If (PQX) and (ABCPQ) meet again at L, then line PL meets (ABCPX) on the radical axis "
           "of the circumcircle and (PQX).")
def check_thm_1_1b(cfg: MainConfigOne):
    if cfg.V is None:
        raise Skip(cfg.notes.get("L", "L absent"))
    axis = radical_axis(cfg.Omega, cfg.gamma)
    res_v = incidence_residual(cfg.V, axis)
    res_p = incidence_residual(cfg.P, axis)
    which = "V" if res_v <= res_p else "P"
    mx = join(cfg.M, cfg.X)
    return min(res_v, res_p), {"which": which, "on_MX": incidence_residual(cfg.V, mx)}


@_register("thm-3.2-involution", MainConfigOne, True,
           "On line PP', the involution swapping Q with ND meet PP' and P with P' also swaps the "
           "two (possibly complex) points where PP' meets the circumcircle, and swaps MN meet PP' "
           "with the point at infinity.")
def check_thm_3_2(cfg: MainConfigOne):
    if cfg.N is None or cfg.J is None:
        raise Skip(cfg.notes.get("auxiliaries", "auxiliary points missing"))
    P, Ps = cfg.P, cfg.Pstar
    _, _, to_param = line_param(P, Ps)
    nd = meet(join(cfg.N, cfg.D), join(P, Ps))
    one, zero = (1, 0) if cfg.exact else (1.0, 0.0)
    inv = involution_from_homogeneous_pairs((to_param(cfg.Q), to_param(nd)), ((zero, one), (one, one)))
    quad = cfg.X12
    pulled = inv.pullback_quadratic(quad)
    res_quad = vec_distance(pulled, quad)
    jimg = inv.apply_projective(to_param(cfg.J))
    if is_exact(jimg):
        res_j = 0.0 if jimg[1] == 0 else 1.0
    else:
        res_j = polys.root_separation(jimg, (1.0, 0.0))
    return max(res_quad, res_j), {"quadratic": res_quad, "J": res_j}


# ---------------------------------------------------------------------------
# two-tangency configuration

def _need_z(cfg: TwoTangencyConfig):
    if cfg.z_is_p:
        raise Skip("Z coincides with P")


@_register("thm-4.1a", TwoTangencyConfig, True,
           "The circle (PXY) and the conic (ABCPZ) have common tangents at both P and Z.")
def check_thm_4_1a(cfg: TwoTangencyConfig):
    _need_z(cfg)
    E = cfg.E_conic if cfg.E_conic is not None else circumconic(cfg.T, cfg.P, cfg.Z)
    rp = _tangent_residual(cfg.gamma, E, cfg.P)
    rz = _tangent_residual(cfg.gamma, E, cfg.Z)
    return max(rp, rz), {"at_P": rp, "at_Z": rz}


@_register("thm-4.1b", TwoTangencyConfig, True,
           "Project the remaining common points Z1, Z2 of (PXY) and (ABCPX) from X onto the "
           "circumcircle; the chord through the images is the tangent of (ABCPP') at P'.")
def check_thm_4_1b(cfg: TwoTangencyConfig):
    chord = cfg.chord_Z12p
    if chord is None or all(c == 0 for c in chord.coords):
        raise Skip("Z1, Z2 undefined")
    tangent = _tangent(cfg.H, cfg.Pstar)
    return vec_distance(chord.coords, tangent), {}


@_register("lemma-4.2", TwoTangencyConfig, True,
           "Two circles share a point X; parallel chords AB, CD of one circle, projected from X "
           "onto the other, give parallel chords EF, GH.")
def check_lemma_4_2(cfg: TwoTangencyConfig):
    exact = cfg.exact
    gp = ConicParam(cfg.gamma, cfg.X)
    ta, tb, tc = (as_mode(v, exact) for v in cfg.samples["lemma42_params"])
    one = 1 if exact else 1.0
    A, B, C = (gp.point((t, one)) for t in (ta, tb, tc))
    D = second_on_line(cfg.gamma, C, parallel_through(C, join(A, B)))
    Om, X = cfg.Omega, cfg.X
    E, F, G, H = (second_on(Om, X, p) for p in (A, B, C, D))
    return parallel_residual(join(E, F), join(G, H)), {}


@_register("lemma-4.3", TwoTangencyConfig, True,
           "Circles through two fixed points A, B of a conic cut it again in chords that are all "
           "parallel.")
def check_lemma_4_3(cfg: TwoTangencyConfig):
    T, C1 = cfg.T, cfg.C1
    cp = ConicParam(C1, T.A)
    chords = []
    for W in cfg.samples["lemma43_points"]:
        circ = circle_through(T.A, T.B, W)
        chords.append(cp.chord(residual_pair(cp, circ, T.B)))
    return parallel_residual(chords[0], chords[1]), {}


def _lemma_4_4_chords(cfg: TwoTangencyConfig):
    cp = ConicParam(cfg.C1, cfg.X)
    op = ConicParam(cfg.Omega, cfg.X, frame=cp.frame)
    out = []
    for W in cfg.samples["lemma44_points"]:
        circ = circle_through(cfg.P, cfg.X, W)
        quad = residual_pair(cp, circ, cfg.P)
        out.append((cp.chord(quad), op.chord(quad)))
    return out


@_register("lemma-4.4a", TwoTangencyConfig, True,
           "Every circle through P and X cuts (ABCPX) again in a chord parallel to PZ.")
def check_lemma_4_4a(cfg: TwoTangencyConfig):
    _need_z(cfg)
    pz = join(cfg.P, cfg.Z)
    res = [parallel_residual(c, pz) for c, _ in _lemma_4_4_chords(cfg)]
    return max(res), {"circles": len(res)}


@_register("lemma-4.4b", TwoTangencyConfig, True,
           "Projecting those two residual points from X onto the circumcircle gives two points "
           "collinear with P'.")
def check_lemma_4_4b(cfg: TwoTangencyConfig):
    res = [incidence_residual(cfg.Pstar, c) for _, c in _lemma_4_4_chords(cfg)]
    return max(res), {"circles": len(res)}


def _quadratic_divides(quartic, quad) -> float:
    """0 when ``quad`` divides ``quartic`` (exact), else a relative residual at the roots."""
    if is_exact(quartic) and is_exact(quad):
        rem = polys.exact_remainder(quartic, quad)
        return 0.0 if all(r == 0 for r in rem) else 1.0
    q4 = polys.normalized(quartic)
    res = 0.0
    for s, u in polys.quadratic_roots(polys.normalized(quad)):
        n = math.sqrt(abs(s) ** 2 + abs(u) ** 2)
        res = max(res, abs(polys.evaluate(q4, (s / n, u / n))))
    return res


@_register("thm-4.5", TwoTangencyConfig, True,
           "Let P0 be a point where the tangent of (ABCPP') at P' meets the circumcircle. For one "
           "common point X of the circle and the circumcircle, line P0X meets the circle again on "
           "(ABCPX).")
def check_thm_4_5(cfg: TwoTangencyConfig):
    tangent = HLine._make(_tangent(cfg.H, cfg.Pstar))
    best = None
    for name, Xc in (("X", cfg.X), ("Y", cfg.Y)):
        try:
            gp = ConicParam(cfg.gamma, Xc)
            op = ConicParam(cfg.Omega, Xc, frame=gp.frame)
            p0 = op.pullback_line(tangent)
            quartic = gp.pullback(circumconic(cfg.T, cfg.P, Xc))
            r = _quadratic_divides(quartic, p0)
        except GeometryError:
            continue
        if best is None or r < best[0]:
            best = (r, name)
    if best is None:
        raise Skip("no usable common point of the circle and the circumcircle")
    return best[0], {"X": best[1]}


# ---------------------------------------------------------------------------
# extreme-point equivalence (float only)

def _float_entries(C: Conic):
    return tuple(float(v) for v in C.to_float().entries)


def thm51_conditions(cfg: ExtremePointConfig,
                     orientation: Optional[Sequence[float]] = None) -> Dict[str, object]:
    """Signed, scale-free root functions of the three conditions.

    ``tangent``: sine between PP' and the tangent of (ABCD'P) at P.
    ``center``: normalized incidence of the conic's center with PP'.
    ``axis``: vanishes when P lies on an axis of (ABCD'P).

    A conic matrix is only defined up to sign, and no fixed sign rule is
    continuous everywhere (the five-point matrix passes through zero when D'
    crosses a vertex). Callers following a path pass the previous conic's
    entries as ``orientation``; the matrix is flipped to agree with it. The
    oriented entries are returned under ``entries`` for the next step.
    """
    ent = _float_entries(cfg.C)
    if orientation is not None and sum(a * b for a, b in zip(ent, orientation)) < 0:
        ent = tuple(-v for v in ent)
    A, B, C, D, E, F = ent
    px, py = (float(v) for v in cfg.P.affine())
    qx, qy = (float(v) for v in cfg.Pstar.affine())
    dx, dy = qx - px, qy - py
    l = A * px + B * py + D
    m = B * px + C * py + E
    out: Dict[str, object] = {"entries": ent}
    nd = math.hypot(dx, dy) * math.hypot(l, m)
    out["tangent"] = (dx * l + dy * m) / nd if nd > 0 else None
    c = (B * E - C * D, B * D - A * E, A * C - B * B)
    cn = math.sqrt(sum(v * v for v in c))
    n = (py - qy, qx - px, px * qy - py * qx)
    nn = math.sqrt(sum(v * v for v in n))
    out["center"] = sum(a * b for a, b in zip(n, c)) / (nn * cn) if nn * cn > 0 else None
    out["center_z"] = abs(c[2]) / cn if cn > 0 else 0.0
    wx, wy = c[2] * px - c[0], c[2] * py - c[1]
    w2 = wx * wx + wy * wy
    r = math.sqrt((A - C) ** 2 + 4 * B * B)
    if w2 > 0 and r > 0:
        out["axis"] = (B * (wy * wy - wx * wx) + (A - C) * wx * wy) / (w2 * r)
    else:
        out["axis"] = None
    return out


def _axis_residual(cfg: ExtremePointConfig) -> float:
    if cfg.axes is None:
        raise Skip("conic has no axes")
    return min(incidence_residual(cfg.P, a) for a in cfg.axes)


def _float_only(cfg: ExtremePointConfig):
    if cfg.exact:
        raise Skip("axes need square roots; float mode only")


def _premise(cond: Optional[float], name: str):
    if cond is None or abs(cond) > PREMISE_TOL:
        raise Skip(f"premise '{name}' not satisfied at this configuration")


@_register("thm-5.1-fwd-tangent", ExtremePointConfig, False,
           "If PP' is tangent to (ABCD'P), then P lies on an axis of (ABCD'P).")
def check_thm_5_1_fwd_tangent(cfg: ExtremePointConfig):
    _float_only(cfg)
    cond = thm51_conditions(cfg)
    _premise(cond["tangent"], "tangent")
    return _axis_residual(cfg), {"premise": cond["tangent"]}


@_register("thm-5.1-fwd-center", ExtremePointConfig, False,
           "If PP' passes through the center of (ABCD'P), then P lies on an axis of (ABCD'P).")
def check_thm_5_1_fwd_center(cfg: ExtremePointConfig):
    _float_only(cfg)
    cond = thm51_conditions(cfg)
    if cfg.center is None or cond["center_z"] < 1e-6:
        raise Skip("center at infinity")
    _premise(cond["center"], "center")
    return _axis_residual(cfg), {"premise": cond["center"]}


@_register("thm-5.1-rev", ExtremePointConfig, False,
           "If P lies on an axis of (ABCD'P), then PP' is tangent to it or passes through its center.")
def check_thm_5_1_rev(cfg: ExtremePointConfig):
    _float_only(cfg)
    cond = thm51_conditions(cfg)
    _premise(cond["axis"], "axis")
    if cfg.center is None:
        raise Skip("conic has no center")
    ppl = join(cfg.P, cfg.Pstar)
    r_tan = vec_distance(cfg.C.apply(cfg.P.coords), ppl.coords)
    r_cen = incidence_residual(cfg.center, ppl)
    which = "tangent" if r_tan <= r_cen else "center"
    return min(r_tan, r_cen), {"premise": cond["axis"], "which": which}


# ---------------------------------------------------------------------------

CLAIM_IDS: Tuple[str, ...] = tuple(REGISTRY)
EXACT_CLAIMS: Tuple[str, ...] = tuple(k for k, c in REGISTRY.items() if c.exact_capable)
THM51_CLAIMS: Tuple[str, ...] = ("thm-5.1-fwd-tangent", "thm-5.1-fwd-center", "thm-5.1-rev")


def check_claim(claim_id: str, config, tol: Optional[float] = None) -> ClaimResult:
    """Evaluate one registered claim on a configuration record."""
    claim = REGISTRY[claim_id]
    if not isinstance(config, claim.variant):
        raise WrongConfigVariant(
            f"{claim_id} needs a {claim.variant.__name__}, got {type(config).__name__}"
        )
    try:
        residual, witness = claim.check(config)
    except (Skip, DegenerateConfig) as exc:
        return ClaimResult(claim_id, ClaimStatus.SKIPPED, 0.0, {"reason": str(exc)})
    except (GeometryError, ZeroDivisionError) as exc:
        return ClaimResult(claim_id, ClaimStatus.SKIPPED, 0.0, {"reason": f"{type(exc).__name__}: {exc}"})
    residual = float(residual)
    if config.exact:
        ok = residual == 0.0
    else:
        ok = residual <= (DEFAULT_FLOAT_TOL if tol is None else tol)
    status = ClaimStatus.PASS if ok else ClaimStatus.FAIL
    return ClaimResult(claim_id, status, residual, witness)
