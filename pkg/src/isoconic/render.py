"""SVG figures of the named configurations.

Circles become native ``<circle>`` elements. Every other conic is sampled
through its line-pencil parametrization at a point of the conic: the
parameter runs once around the projective line, the sampled points are split
into branches wherever they pass through infinity, and each branch is clipped
to a slightly enlarged viewport. Output depends only on the configuration, so
equal inputs give byte-identical SVG.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
from xml.sax.saxutils import escape

from .conics import Conic, ConicParam, is_circle
from .errors import DegenerateConfig, GeometryError
from .harness import (
    GeneratorBounds,
    check_thm_5_1_equivalence,
    generate_instance,
    trial_rng,
)
from .lab.configs import (
    build_extreme_point_config,
    build_main_config_one,
    build_two_tangency_config,
    point_in_mode,
    triangle_in_mode,
)
from .projective import HLine, HPoint, join

RENDER_CONFIGS = ("thm-1.1", "thm-4.1", "thm-5.1", "lemma-2.2", "lemma-2.3")

_PALETTE = ("#1f4e9c", "#c0392b", "#2e8b57", "#8e44ad", "#d35400", "#16a085", "#7f8c8d")

Point2 = Tuple[float, float]


@dataclass
class RenderSpec:
    """What to draw and how: configuration, seed and drawing parameters."""

    config: str = "thm-1.1"
    seed: int = 0
    width: int = 800
    margin: float = 0.10
    labels: bool = True
    stroke: float = 1.5
    point_radius: float = 3.0
    samples: int = 512


@dataclass
class Scene:
    """Geometry to draw: named conics, lines and labeled points."""

    title: str
    conics: List[Tuple[str, Conic, HPoint]] = field(default_factory=list)
    lines: List[Tuple[str, HLine]] = field(default_factory=list)
    segments: List[Tuple[HPoint, HPoint]] = field(default_factory=list)
    points: List[Tuple[str, HPoint]] = field(default_factory=list)

    def add_points(self, **pts):
        for name, p in pts.items():
            if p is not None and not p.is_infinite(1e-12):
                self.points.append((name.replace("_s", "'"), p))


# ---------------------------------------------------------------------------
# scenes

def _instance(seed: int, index: int, bounds: GeneratorBounds):
    inst = generate_instance(trial_rng(seed, index), bounds)
    return inst, triangle_in_mode(inst.T, False), point_in_mode(inst.P, False)


def _first_valid(seed: int, build, bounds: GeneratorBounds, attempts: int = 50):
    """Run ``build`` on the instances of ``seed`` until one is non-degenerate."""
    last = None
    for index in range(attempts):
        inst, T, P = _instance(seed, index, bounds)
        try:
            return build(inst, T, P)
        except (DegenerateConfig, GeometryError) as exc:
            last = exc
    raise DegenerateConfig(f"no valid configuration in {attempts} instances: {last}")


def _main_scene(cfg, kind: str) -> Scene:
    T = cfg.T
    A, B, C = T.vertices
    sc = Scene(kind)
    sc.conics.append(("Omega", cfg.Omega, A))
    if kind == "thm-1.1":
        sc.conics += [("gamma", cfg.gamma, cfg.P), ("(ABCPQ)", cfg.E_conic, A), ("(ABCPX)", cfg.C1, A)]
        sc.lines.append(("PP'", join(cfg.P, cfg.Pstar)))
        sc.segments += [(cfg.D, cfg.X)]
        if cfg.L is not None:
            sc.segments.append((cfg.P, cfg.L))
        sc.add_points(A=A, B=B, C=C, P=cfg.P, P_s=cfg.Pstar, Q=cfg.Q, D=cfg.D, X=cfg.X, L=cfg.L, V=cfg.V)
    elif kind == "lemma-2.2":
        sc.conics.append(("(ABCPP')", cfg.H, A))
        sc.lines.append(("PP'", join(cfg.P, cfg.Pstar)))
        sc.lines.append(("QQ'", join(cfg.Q, cfg.Qstar)))
        sc.add_points(A=A, B=B, C=C, P=cfg.P, P_s=cfg.Pstar, Q=cfg.Q, Q_s=cfg.Qstar, D=cfg.D,
                      W=cfg.W, W_s=cfg.Wstar)
    else:  # lemma-2.3
        sc.segments += [(cfg.P, cfg.Q), (cfg.Qstar, cfg.Pstar), (cfg.M, cfg.P), (cfg.M, cfg.Qstar)]
        sc.add_points(A=A, B=B, C=C, P=cfg.P, Q=cfg.Q, P_s=cfg.Pstar, Q_s=cfg.Qstar, M=cfg.M)
    return sc


def _two_scene(cfg) -> Scene:
    A, B, C = cfg.T.vertices
    sc = Scene("thm-4.1")
    sc.conics += [("Omega", cfg.Omega, A), ("gamma", cfg.gamma, cfg.P), ("(ABCPX)", cfg.C1, A)]
    if cfg.E_conic is not None:
        sc.conics.append(("(ABCPZ)", cfg.E_conic, A))
    sc.lines.append(("PP'", join(cfg.P, cfg.Pstar)))
    sc.segments += [(cfg.D, cfg.X), (cfg.D, cfg.Y)]
    sc.add_points(A=A, B=B, C=C, P=cfg.P, P_s=cfg.Pstar, D=cfg.D, X=cfg.X, Y=cfg.Y, Z=cfg.Z)
    return sc


def _extreme_scene(cfg) -> Scene:
    A, B, C = cfg.T.vertices
    sc = Scene("thm-5.1")
    sc.conics += [("Omega", cfg.Omega, A), ("(ABCD'P)", cfg.C, A)]
    sc.lines.append(("PP'", join(cfg.P, cfg.Pstar)))
    if cfg.axes is not None:
        sc.lines += [("axis", cfg.axes[0]), ("axis", cfg.axes[1])]
    sc.segments.append((cfg.D, cfg.Dprime))
    sc.add_points(A=A, B=B, C=C, P=cfg.P, P_s=cfg.Pstar, D=cfg.D, D_s=cfg.Dprime, O=cfg.center)
    return sc


def build_scene(name: str, seed: int, bounds: GeneratorBounds = GeneratorBounds()) -> Scene:
    """Scene of configuration ``name`` on the first valid instance of ``seed``."""
    if name in ("thm-1.1", "lemma-2.2", "lemma-2.3"):
        def build(inst, T, P):
            return _main_scene(build_main_config_one(T, P, inst.t_Q, trial_rng(seed, 0, 1)), name)
    elif name == "thm-4.1":
        def build(inst, T, P):
            return _two_scene(build_two_tangency_config(T, P))
    elif name == "thm-5.1":
        def build(inst, T, P):
            # prefer a point where PP' touches (ABCD'P) at P
            res = check_thm_5_1_equivalence(inst.T, trial_rng(seed, 0, 3), ("thm-5.1-fwd-tangent",), bounds)
            Pw = res["thm-5.1-fwd-tangent"].witness.get("P")
            return _extreme_scene(build_extreme_point_config(T, Pw if isinstance(Pw, HPoint) else P))
    else:
        raise ValueError(f"unknown render config {name!r}; choose from {RENDER_CONFIGS}")
    return _first_valid(seed, build, bounds)


# ---------------------------------------------------------------------------
# geometry to screen

def _xy(p: HPoint) -> Point2:
    x, y = p.affine_float()
    return float(x), float(y)


def _circle_data(c: Conic) -> Tuple[float, float, float]:
    A, _, _, D, E, F = (float(v) for v in c.to_float().entries)
    r2 = (D * D + E * E - A * F) / (A * A)
    return -D / A, -E / A, math.sqrt(max(r2, 0.0))


class _View:
    def __init__(self, box: Tuple[float, float, float, float], spec: RenderSpec):
        x0, y0, x1, y1 = box
        w, h = max(x1 - x0, 1e-9), max(y1 - y0, 1e-9)
        mx, my = spec.margin * w, spec.margin * h
        self.x0, self.y0, self.x1, self.y1 = x0 - mx, y0 - my, x1 + mx, y1 + my
        self.scale = spec.width / (self.x1 - self.x0)
        self.width = spec.width
        self.height = int(math.ceil((self.y1 - self.y0) * self.scale))

    def px(self, x: float, y: float) -> Point2:
        return (x - self.x0) * self.scale, (self.y1 - y) * self.scale

    def inside(self, x: float, y: float, slack: float = 0.0) -> bool:
        sx, sy = slack * (self.x1 - self.x0), slack * (self.y1 - self.y0)
        return self.x0 - sx <= x <= self.x1 + sx and self.y0 - sy <= y <= self.y1 + sy


def _fit_box(scene: Scene) -> Tuple[float, float, float, float]:
    pts = [_xy(p) for _, p in scene.points]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    extent = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    for _, c, _ in scene.conics:
        if is_circle(c):
            cx, cy, r = _circle_data(c)
            # keep huge near-line circles from swamping the figure
            if r <= 5 * extent:
                xs += [cx - r, cx + r]
                ys += [cy - r, cy + r]
    return min(xs), min(ys), max(xs), max(ys)


def conic_branches(c: Conic, base: HPoint, samples: int = 512) -> List[List[Point2]]:
    """Affine polylines tracing ``c``; one per branch, split at infinity.

    The homogeneous parameter ``(sin t, cos t)`` for ``t`` in ``[0, pi]``
    covers the projective line once, so the sampled points go once around the
    conic and the closing point repeats the first.
    """
    param = ConicParam(c.to_float(), point_in_mode(base, False))
    vecs = []
    for k in range(samples + 1):
        t = math.pi * k / samples
        vecs.append(param.point_vec((math.sin(t), math.cos(t))))
    scale = max(max(abs(v[0]), abs(v[1]), abs(v[2])) for v in vecs)
    branches: List[List[Point2]] = [[]]
    prev_z = None
    for v in vecs:
        z = v[2]
        if abs(z) <= 1e-12 * scale:
            prev_z = None
            if branches[-1]:
                branches.append([])
            continue
        if prev_z is not None and (z > 0) != (prev_z > 0) and branches[-1]:
            branches.append([])
        prev_z = z
        branches[-1].append((v[0] / z, v[1] / z))
    # the sample at t = pi repeats t = 0, so when no split happens there the
    # last branch continues into the first
    z_first, z_last = vecs[0][2], vecs[-1][2]
    wraps = min(abs(z_first), abs(z_last)) > 1e-12 * scale and (z_first > 0) == (z_last > 0)
    if wraps and len(branches) > 1 and branches[-1] and branches[0]:
        branches[0] = branches.pop()[:-1] + branches[0]
    return [b for b in branches if len(b) > 1]


def _clip_polyline(pts: Sequence[Point2], view: _View, slack: float = 0.25) -> List[List[Point2]]:
    out: List[List[Point2]] = [[]]
    for x, y in pts:
        if view.inside(x, y, slack):
            out[-1].append((x, y))
        elif out[-1]:
            out.append([])
    return [b for b in out if len(b) > 1]


def _clip_line(l: HLine, view: _View) -> Optional[Tuple[Point2, Point2]]:
    a, b, c = (float(v) for v in l.normalized())
    cands = []
    for x in (view.x0, view.x1):
        if abs(b) > 1e-15:
            y = -(a * x + c) / b
            if view.y0 - 1e-9 <= y <= view.y1 + 1e-9:
                cands.append((x, y))
    for y in (view.y0, view.y1):
        if abs(a) > 1e-15:
            x = -(b * y + c) / a
            if view.x0 - 1e-9 <= x <= view.x1 + 1e-9:
                cands.append((x, y))
    if len(cands) < 2:
        return None
    cands.sort()
    return cands[0], cands[-1]


def _f(v: float) -> str:
    s = f"{v:.2f}"
    return "0.00" if s == "-0.00" else s


def render_scene(scene: Scene, spec: RenderSpec = RenderSpec()) -> str:
    """SVG document for ``scene``."""
    view = _View(_fit_box(scene), spec)
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{view.width}" height="{view.height}" '
        f'viewBox="0 0 {view.width} {view.height}">',
        f"<title>{escape(scene.title)}</title>",
        f'<rect x="0" y="0" width="{view.width}" height="{view.height}" fill="white"/>',
    ]
    for k, (name, c, base) in enumerate(scene.conics):
        color = _PALETTE[k % len(_PALETTE)]
        style = f'fill="none" stroke="{color}" stroke-width="{_f(spec.stroke)}"'
        if is_circle(c):
            cx, cy, r = _circle_data(c)
            x, y = view.px(cx, cy)
            out.append(f'<circle class="conic" data-name="{escape(name)}" cx="{_f(x)}" cy="{_f(y)}" '
                       f'r="{_f(r * view.scale)}" {style}/>')
            continue
        for branch in conic_branches(c, base, spec.samples):
            for piece in _clip_polyline(branch, view):
                coords = " ".join(f"{_f(a)},{_f(b)}" for a, b in (view.px(x, y) for x, y in piece))
                out.append(f'<polyline class="conic" data-name="{escape(name)}" points="{coords}" {style}/>')
    for name, l in scene.lines:
        seg = _clip_line(l, view)
        if seg is None:
            continue
        (x0, y0), (x1, y1) = (view.px(*p) for p in seg)
        out.append(f'<line class="line" data-name="{escape(name)}" x1="{_f(x0)}" y1="{_f(y0)}" '
                   f'x2="{_f(x1)}" y2="{_f(y1)}" stroke="#555555" stroke-width="{_f(spec.stroke * 0.6)}" '
                   f'stroke-dasharray="6,4"/>')
    for p, q in scene.segments:
        if p is None or q is None or p.is_infinite(1e-12) or q.is_infinite(1e-12):
            continue
        (x0, y0), (x1, y1) = view.px(*_xy(p)), view.px(*_xy(q))
        out.append(f'<line class="segment" x1="{_f(x0)}" y1="{_f(y0)}" x2="{_f(x1)}" y2="{_f(y1)}" '
                   f'stroke="#333333" stroke-width="{_f(spec.stroke * 0.6)}"/>')
    for name, p in scene.points:
        x, y = view.px(*_xy(p))
        out.append(f'<circle class="point" data-name="{escape(name)}" cx="{_f(x)}" cy="{_f(y)}" '
                   f'r="{_f(spec.point_radius)}" fill="black"/>')
        if spec.labels:
            out.append(f'<text x="{_f(x + 5)}" y="{_f(y - 5)}" font-family="sans-serif" '
                       f'font-size="14">{escape(name)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_svg(spec: RenderSpec, scene: Optional[Scene] = None) -> str:
    """Render ``spec.config`` for ``spec.seed`` (or a prebuilt ``scene``)."""
    if scene is None:
        scene = build_scene(spec.config, spec.seed)
    return render_scene(scene, spec)


def point_positions(scene: Scene, spec: RenderSpec = RenderSpec()) -> Dict[str, Point2]:
    """Projected pixel coordinates of the labeled points (for checks)."""
    view = _View(_fit_box(scene), spec)
    return {name: view.px(*_xy(p)) for name, p in scene.points}
