"""Seeded instance generation, claim-suite runs and JSON reports.

Trial ``i`` of a plan draws everything from generators seeded by
``(master_seed, i, stream)``, so a report does not depend on execution order
or on the number of worker processes.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DegenerateConfig, GeometryError, NoSignChange, PathExhausted
from .lab.claims import (
    CLAIM_IDS,
    DEFAULT_FLOAT_TOL,
    REGISTRY,
    THM51_CLAIMS,
    ClaimResult,
    ClaimStatus,
    check_claim,
    thm51_conditions,
)
from .lab.configs import (
    ExtremePointConfig,
    MainConfigOne,
    TwoTangencyConfig,
    build_extreme_point_config,
    build_main_config_one,
    build_two_tangency_config,
    point_in_mode,
    triangle_in_mode,
)
from .projective import HPoint, vec_distance
from .triangle import Triangle, circumcircle, isogonal_conjugate

MODES = ("rational", "float")

# independent random streams of a trial
_STREAM_INSTANCE, _STREAM_MAIN, _STREAM_TWO, _STREAM_PATHS = range(4)


@dataclass(frozen=True)
class GeneratorBounds:
    coord_range: int = 10
    vertex_den: int = 64
    point_den: int = 256
    min_area: float = 0.5
    min_angle_deg: float = 10.0
    power_margin: float = 0.01
    sideline_margin: float = 0.02
    min_isogonal_gap: float = 0.05
    max_isogonal_dist: float = 20.0
    tq_range: Tuple[float, float] = (-2.0, 3.0)
    tq_exclusion: float = 0.05


@dataclass
class Instance:
    T: Triangle
    P: HPoint
    t_Q: Fraction
    resamples: int = 0


def trial_seed(master_seed: int, index: int, stream: int = _STREAM_INSTANCE) -> int:
    """64-bit seed of one trial stream, a hash of ``(master_seed, index, stream)``."""
    state = np.random.SeedSequence([int(master_seed), int(index), int(stream)]).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def trial_rng(master_seed: int, index: int, stream: int = _STREAM_INSTANCE) -> np.random.Generator:
    return np.random.default_rng(trial_seed(master_seed, index, stream))


def _circle_data(T: Triangle):
    """Circumcenter and squared circumradius as floats."""
    Om = circumcircle(T).to_float()
    A, _, _, D, E, F = Om.entries
    cx, cy = -D / A, -E / A
    return cx, cy, cx * cx + cy * cy - F / A


def _angles_ok(pts, min_deg: float) -> bool:
    for i in range(3):
        a, b, c = pts[i], pts[(i + 1) % 3], pts[(i + 2) % 3]
        u = (b[0] - a[0], b[1] - a[1])
        v = (c[0] - a[0], c[1] - a[1])
        ang = math.degrees(math.atan2(abs(u[0] * v[1] - u[1] * v[0]), u[0] * v[0] + u[1] * v[1]))
        if ang < min_deg:
            return False
    return True


def point_ok(T: Triangle, P: HPoint, bounds: GeneratorBounds, circle=None) -> bool:
    """Whether ``P`` is a well-conditioned choice for the configurations."""
    cx, cy, r2 = circle or _circle_data(T)
    r = math.sqrt(r2)
    px, py = (float(v) for v in P.affine())
    if ((px - cx) ** 2 + (py - cy) ** 2 - r2) / r2 > -bounds.power_margin:
        return False
    for l in T.sidelines():
        a, b, c = (float(v) for v in l.normalized())
        if abs(a * px + b * py + c) / math.hypot(a, b) < bounds.sideline_margin * r:
            return False
    try:
        Ps = isogonal_conjugate(T, P)
    except GeometryError:
        return False
    if Ps.is_infinite():
        return False
    qx, qy = (float(v) for v in Ps.affine())
    if math.hypot(qx - px, qy - py) < bounds.min_isogonal_gap * r:
        return False
    if math.hypot(qx - cx, qy - cy) > bounds.max_isogonal_dist * r:
        return False
    return True


def generate_triangle(rng: np.random.Generator, bounds: GeneratorBounds = GeneratorBounds()) -> Tuple[Triangle, int]:
    lim = bounds.coord_range * bounds.vertex_den
    resamples = 0
    while True:
        ks = rng.integers(-lim, lim + 1, size=6)
        pts = [(Fraction(int(ks[2 * i]), bounds.vertex_den), Fraction(int(ks[2 * i + 1]), bounds.vertex_den))
               for i in range(3)]
        area = abs((pts[1][0] - pts[0][0]) * (pts[2][1] - pts[0][1])
                   - (pts[2][0] - pts[0][0]) * (pts[1][1] - pts[0][1])) / 2
        if area >= bounds.min_area and _angles_ok([(float(x), float(y)) for x, y in pts], bounds.min_angle_deg):
            return Triangle(*(HPoint(x, y) for x, y in pts)), resamples
        resamples += 1


def generate_point(rng: np.random.Generator, T: Triangle, bounds: GeneratorBounds = GeneratorBounds()) -> Tuple[HPoint, int]:
    """Rational point inside the circumdisk satisfying :func:`point_ok`."""
    cx, cy, r2 = _circle_data(T)
    r = math.sqrt(r2)
    den = bounds.point_den
    resamples = 0
    while True:
        x = Fraction(int(rng.integers(math.floor((cx - r) * den), math.ceil((cx + r) * den) + 1)), den)
        y = Fraction(int(rng.integers(math.floor((cy - r) * den), math.ceil((cy + r) * den) + 1)), den)
        P = HPoint(x, y)
        if point_ok(T, P, bounds, (cx, cy, r2)):
            return P, resamples
        resamples += 1


def generate_tq(rng: np.random.Generator, bounds: GeneratorBounds = GeneratorBounds()) -> Fraction:
    lo, hi = bounds.tq_range
    den = bounds.point_den
    while True:
        t = Fraction(int(rng.integers(int(lo * den), int(hi * den) + 1)), den)
        if abs(t) > bounds.tq_exclusion and abs(t - 1) > bounds.tq_exclusion:
            return t


def generate_instance(rng: np.random.Generator, bounds: GeneratorBounds = GeneratorBounds()) -> Instance:
    """Random rational triangle, point ``P`` and parameter ``t_Q`` (resamples counted)."""
    T, r1 = generate_triangle(rng, bounds)
    P, r2 = generate_point(rng, T, bounds)
    return Instance(T, P, generate_tq(rng, bounds), r1 + r2)


# ---------------------------------------------------------------------------
# root finding for the extreme-point equivalence

def root_find_condition(path: Callable[[float], HPoint], condition: Callable[[HPoint], Optional[float]],
                        bracket: Tuple[float, float] = (0.0, 1.0), s_tol: float = 1e-12,
                        f_tol: float = 1e-9, values: Optional[Tuple[float, float]] = None) -> float:
    """Bisect ``condition(path(s))`` on ``bracket`` down to ``|ds| <= s_tol``.

    Raises :class:`NoSignChange` when the end values do not differ in sign,
    or when the bracket turns out to straddle a jump rather than a root.
    """
    lo, hi = bracket
    flo, fhi = values if values is not None else (condition(path(lo)), condition(path(hi)))
    if flo is None or fhi is None or flo * fhi > 0:
        raise NoSignChange("condition has the same sign at both ends of the bracket")
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    while hi - lo > s_tol:
        mid = 0.5 * (lo + hi)
        fm = condition(path(mid))
        if fm is None:
            raise NoSignChange("condition undefined inside the bracket")
        if fm == 0:
            lo = hi = mid
            break
        if (fm < 0) == (flo < 0):
            lo, flo = mid, fm
        else:
            hi, fhi = mid, fm
    s = lo if abs(flo) <= abs(fhi) else hi
    f = condition(path(s))
    if f is None or abs(f) > f_tol:
        raise NoSignChange("bracket straddles a discontinuity, not a root")
    return s


_CONDITION_OF = {
    "thm-5.1-fwd-tangent": "tangent",
    "thm-5.1-fwd-center": "center",
    "thm-5.1-rev": "axis",
}


def _extreme_conditions(T: Triangle, P: HPoint, orientation=None) -> Optional[Dict[str, object]]:
    try:
        cfg = build_extreme_point_config(T, P)
    except (GeometryError, ZeroDivisionError):
        return None
    cond = thm51_conditions(cfg, orientation)
    if cfg.center is None or cond["center_z"] < 1e-6:
        cond["center"] = None
    return cond


def _random_disk_point(rng: np.random.Generator, T: Triangle, bounds: GeneratorBounds) -> HPoint:
    P, _ = generate_point(rng, T, bounds)
    return point_in_mode(P, False)


def check_thm_5_1_equivalence(T: Triangle, rng: np.random.Generator, claims: Sequence[str] = THM51_CLAIMS,
                              bounds: GeneratorBounds = GeneratorBounds(), retry_cap: int = 12,
                              grid: int = 24, tol: float = DEFAULT_FLOAT_TOL) -> Dict[str, ClaimResult]:
    """Check the three directions of the extreme-point equivalence on ``T``.

    Random segments ``P(s)`` inside the circumdisk are scanned for sign
    changes of each condition; the first root found is bisected and the
    other side of the equivalence is checked there. Paths are shared between
    the three directions. A direction with no root after ``retry_cap`` paths
    is reported as skipped (path exhausted).
    """
    Tf = triangle_in_mode(T, False)
    pending = [c for c in claims if c in _CONDITION_OF]
    results: Dict[str, ClaimResult] = {}
    tries = 0
    while pending and tries < retry_cap:
        tries += 1
        Pa = _random_disk_point(rng, T, bounds)
        Pb = _random_disk_point(rng, T, bounds)
        (ax, ay), (bx, by) = Pa.affine(), Pb.affine()

        def path(s, ax=ax, ay=ay, bx=bx, by=by):
            return HPoint(ax + s * (bx - ax), ay + s * (by - ay), 1.0)

        ss = [k / (grid - 1) for k in range(grid)]
        # orient each conic like its predecessor so the scan stays continuous
        scan, ref = [], None
        for s in ss:
            c = _extreme_conditions(Tf, path(s), ref)
            if c is not None:
                ref = c["entries"]
            scan.append(c)
        for cid in list(pending):
            key = _CONDITION_OF[cid]
            for k in range(grid - 1):
                c0, c1 = scan[k], scan[k + 1]
                if c0 is None or c1 is None or c0[key] is None or c1[key] is None:
                    continue
                if c0[key] * c1[key] > 0:
                    continue

                def cond(P, key=key, ref=c0["entries"]):
                    c = _extreme_conditions(Tf, P, ref)
                    return None if c is None else c[key]

                try:
                    s = root_find_condition(path, cond, (ss[k], ss[k + 1]), values=(c0[key], c1[key]))
                    cfg = build_extreme_point_config(Tf, path(s))
                except (NoSignChange, GeometryError, ZeroDivisionError):
                    continue
                res = check_claim(cid, cfg, tol)
                if res.status is ClaimStatus.SKIPPED:
                    continue
                res.witness["s"] = s
                res.witness["paths"] = tries
                res.witness["P"] = cfg.P
                if cid == "thm-5.1-fwd-tangent":
                    res = _with_two_tangency_check(res, Tf, cfg.P, tol)
                results[cid] = res
                pending.remove(cid)
                break
    for cid in pending:
        exc = PathExhausted(f"no root of the '{_CONDITION_OF[cid]}' condition on {retry_cap} paths")
        results[cid] = ClaimResult(cid, ClaimStatus.SKIPPED, 0.0, {"reason": str(exc)})
    return results


def _with_two_tangency_check(res: ClaimResult, T: Triangle, P: HPoint, tol: float) -> ClaimResult:
    """At a tangency root the circle (PXY) must touch PP' at P, i.e. Z = P."""
    try:
        two = build_two_tangency_config(T, P, auxiliaries=False)
        z_res = vec_distance(two.Z.coords, P.coords)
    except GeometryError as exc:
        res.witness["Z"] = f"unavailable: {exc}"
        return res
    res.witness["Z_minus_P"] = z_res
    residual = max(res.residual, z_res)
    status = ClaimStatus.PASS if residual <= tol else ClaimStatus.FAIL
    return ClaimResult(res.claim_id, status, residual, res.witness)


# ---------------------------------------------------------------------------
# suites and reports

@dataclass
class TrialPlan:
    claims: Sequence[str] = CLAIM_IDS
    trials: int = 100
    seed: int = 0
    mode: str = "float"
    tol: float = DEFAULT_FLOAT_TOL
    bounds: GeneratorBounds = GeneratorBounds()
    workers: int = 1

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        unknown = [c for c in self.claims if c not in REGISTRY]
        if unknown:
            raise ValueError(f"unknown claim ids: {unknown}")
        self.claims = tuple(self.claims)


@dataclass
class ClaimReport:
    claim_id: str
    mode: str
    trials: int = 0
    passed: int = 0
    failed: int = 0
    skipped: int = 0
    max_residual: float = 0.0
    mean_residual: float = 0.0
    failing_seeds: List[int] = field(default_factory=list)
    wall_ms: float = 0.0


@dataclass
class TrialReport:
    seed: int
    mode: str
    trials: int
    claims: List[ClaimReport]
    diagnostics: Dict[str, object] = field(default_factory=dict)

    @property
    def any_failed(self) -> bool:
        return any(c.failed > 0 for c in self.claims)

    def claim(self, claim_id: str) -> ClaimReport:
        return next(c for c in self.claims if c.claim_id == claim_id)

    def to_dict(self, include_wall: bool = True) -> dict:
        claims = []
        for c in self.claims:
            d = asdict(c)
            if not include_wall:
                d.pop("wall_ms")
            claims.append(d)
        return {"seed": self.seed, "mode": self.mode, "trials": self.trials, "claims": claims,
                "diagnostics": self.diagnostics}

    def to_json(self, include_wall: bool = True) -> str:
        return json.dumps(self.to_dict(include_wall), indent=2, sort_keys=True, default=str)


#: JSON schema of one per-claim record.
CLAIM_RECORD_SCHEMA = {
    "type": "object",
    "required": ["claim_id", "mode", "trials", "passed", "failed", "skipped", "max_residual",
                 "mean_residual", "failing_seeds", "wall_ms"],
    "additionalProperties": False,
    "properties": {
        "claim_id": {"type": "string"},
        "mode": {"enum": list(MODES)},
        "trials": {"type": "integer", "minimum": 0},
        "passed": {"type": "integer", "minimum": 0},
        "failed": {"type": "integer", "minimum": 0},
        "skipped": {"type": "integer", "minimum": 0},
        "max_residual": {"type": "number", "minimum": 0},
        "mean_residual": {"type": "number", "minimum": 0},
        "failing_seeds": {"type": "array", "items": {"type": "integer", "minimum": 0,
                                                     "maximum": 2**64 - 1}},
        "wall_ms": {"type": "number", "minimum": 0},
    },
}

REPORT_SCHEMA = {
    "type": "object",
    "required": ["seed", "mode", "trials", "claims"],
    "properties": {
        "seed": {"type": "integer"},
        "mode": {"enum": list(MODES)},
        "trials": {"type": "integer", "minimum": 0},
        "claims": {"type": "array", "items": CLAIM_RECORD_SCHEMA},
        "diagnostics": {"type": "object"},
    },
}


def _dump_config(cfg) -> Dict[str, object]:
    out = {}
    for name, v in cfg.witnesses().items():
        if v is None:
            continue
        if isinstance(v, HPoint):
            out[name] = [str(c) for c in v.coords]
        elif hasattr(v, "coords"):
            out[name] = [str(c) for c in v.coords]
        else:
            out[name] = [str(c) for c in v.coefficients()]
    return out


def run_trial(plan: TrialPlan, index: int) -> Tuple[int, Dict[str, Tuple[ClaimResult, float]], Dict[str, object]]:
    """Run every claim of ``plan`` on trial ``index``; returns per-claim results and timings."""
    seed = trial_seed(plan.seed, index)
    rng = np.random.default_rng(seed)
    inst = generate_instance(rng, plan.bounds)
    exact = plan.mode == "rational"
    T = triangle_in_mode(inst.T, exact)
    P = point_in_mode(inst.P, exact)
    extra: Dict[str, object] = {"resamples": inst.resamples}
    out: Dict[str, Tuple[ClaimResult, float]] = {}
    builders = {
        MainConfigOne: lambda: build_main_config_one(T, P, inst.t_Q, trial_rng(plan.seed, index, _STREAM_MAIN)),
        TwoTangencyConfig: lambda: build_two_tangency_config(T, P, trial_rng(plan.seed, index, _STREAM_TWO)),
    }
    for variant, build in builders.items():
        ids = [c for c in plan.claims if REGISTRY[c].variant is variant]
        if not ids:
            continue
        t0 = time.perf_counter()
        try:
            cfg = build()
            err = None
        except DegenerateConfig as exc:
            cfg, err = None, str(exc)
        share = (time.perf_counter() - t0) / len(ids)
        for cid in ids:
            t1 = time.perf_counter()
            if cfg is None:
                res = ClaimResult(cid, ClaimStatus.SKIPPED, 0.0, {"reason": err})
            else:
                res = check_claim(cid, cfg, plan.tol)
                if res.status is ClaimStatus.FAIL:
                    extra.setdefault("failures", {})[cid] = _dump_config(cfg)
            out[cid] = (res, share + time.perf_counter() - t1)
    ids = [c for c in plan.claims if c in THM51_CLAIMS]
    if ids:
        t0 = time.perf_counter()
        if exact:
            res51 = {c: ClaimResult(c, ClaimStatus.SKIPPED, 0.0, {"reason": "float-only claim"}) for c in ids}
        else:
            res51 = check_thm_5_1_equivalence(inst.T, trial_rng(plan.seed, index, _STREAM_PATHS), ids,
                                              plan.bounds, tol=plan.tol)
        share = (time.perf_counter() - t0) / len(ids)
        for c in ids:
            out[c] = (res51[c], share)
    return seed, out, extra


def _run_chunk(args):
    plan, indices = args
    return [run_trial(plan, i) for i in indices]


def run_suite(plan: TrialPlan) -> TrialReport:
    """Run all trials of ``plan`` and aggregate a :class:`TrialReport`."""
    indices = list(range(plan.trials))
    if plan.workers > 1 and plan.trials > 1:
        chunks = [indices[k::plan.workers] for k in range(plan.workers)]
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            parts = list(pool.map(_run_chunk, [(plan, ch) for ch in chunks]))
        by_index = {}
        for ch, part in zip(chunks, parts):
            for i, r in zip(ch, part):
                by_index[i] = r
        trials = [by_index[i] for i in indices]
    else:
        trials = [run_trial(plan, i) for i in indices]

    reports = {c: ClaimReport(c, plan.mode) for c in plan.claims}
    sums = {c: 0.0 for c in plan.claims}
    skip_reasons: Dict[str, Dict[str, int]] = {c: {} for c in plan.claims}
    failures: Dict[str, object] = {}
    correlations: Dict[str, Dict[str, int]] = {}
    resamples = 0
    for seed, out, extra in trials:
        resamples += int(extra.get("resamples", 0))
        for cid, fail_dump in extra.get("failures", {}).items():
            if len(failures) < 10:
                failures[f"{cid}@{seed}"] = fail_dump
        for cid in plan.claims:
            res, dt = out[cid]
            rep = reports[cid]
            rep.trials += 1
            rep.wall_ms += dt * 1000.0
            if res.status is ClaimStatus.SKIPPED:
                rep.skipped += 1
                reason = str(res.witness.get("reason", ""))
                key = reason.split(":")[0][:60]
                skip_reasons[cid][key] = skip_reasons[cid].get(key, 0) + 1
                continue
            if res.status is ClaimStatus.PASS:
                rep.passed += 1
            else:
                rep.failed += 1
                rep.failing_seeds.append(seed)
            rep.max_residual = max(rep.max_residual, res.residual)
            sums[cid] += res.residual
            which = res.witness.get("which")
            if isinstance(which, str):
                corr = correlations.setdefault(cid, {})
                corr[which] = corr.get(which, 0) + 1
    for cid, rep in reports.items():
        evaluated = rep.passed + rep.failed
        rep.mean_residual = sums[cid] / evaluated if evaluated else 0.0
        rep.wall_ms = round(rep.wall_ms, 3)
    diagnostics: Dict[str, object] = {"resamples": resamples,
                                      "skip_reasons": {c: r for c, r in skip_reasons.items() if r}}
    if correlations:
        diagnostics["which"] = correlations
    if failures:
        diagnostics["failures"] = failures
    return TrialReport(plan.seed, plan.mode, plan.trials, [reports[c] for c in plan.claims], diagnostics)


def write_report(report: TrialReport, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(report.to_json())
        fh.write("\n")
