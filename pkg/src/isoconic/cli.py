"""Command-line front end: ``verify``, ``render``, ``list`` and ``inspect``.

Exit codes: 0 when everything passed, 1 when a claim failed, 2 on usage or
I/O errors. All randomness comes from ``--seed``.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional, Sequence

from .errors import DegenerateConfig, GeometryError
from .harness import MODES, TrialPlan, generate_instance, run_suite, trial_rng, write_report
from .lab.claims import CLAIM_IDS, DEFAULT_FLOAT_TOL, REGISTRY
from .lab.configs import (
    build_extreme_point_config,
    build_main_config_one,
    build_two_tangency_config,
    point_in_mode,
    triangle_in_mode,
)
from .projective import HLine, HPoint
from .render import RENDER_CONFIGS, RenderSpec, render_svg

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2

# configuration names accepted by ``inspect``, mapped to the builder variant
_INSPECT_VARIANTS = {
    "thm-1.1": "main",
    "lemma-2.2": "main",
    "lemma-2.3": "main",
    "main": "main",
    "thm-4.1": "two-tangency",
    "two-tangency": "two-tangency",
    "thm-5.1": "extreme-point",
    "extreme-point": "extreme-point",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_claims(values: Sequence[str]) -> List[str]:
    ids: List[str] = []
    for v in values:
        ids += [c for c in v.split(",") if c]
    if not ids or ids == ["all"]:
        return list(CLAIM_IDS)
    unknown = [c for c in ids if c not in REGISTRY]
    if unknown:
        raise ValueError(f"unknown claim ids: {', '.join(unknown)} (see 'list')")
    return ids


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="isoconic", description="Check and draw isogonal-conic configurations.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("verify", help="run randomized claim checks and report")
    v.add_argument("--claims", nargs="+", default=["all"], help="claim ids (comma or space separated) or 'all'")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--mode", choices=MODES, default="float")
    v.add_argument("--tol", type=float, default=DEFAULT_FLOAT_TOL)
    v.add_argument("--workers", type=int, default=1, help="worker processes")
    v.add_argument("--report", help="write the JSON report to this path")

    r = sub.add_parser("render", help="draw a configuration as SVG")
    r.add_argument("--config", choices=RENDER_CONFIGS, required=True)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--out", required=True, help="output SVG path ('-' for stdout)")
    r.add_argument("--width", type=int, default=800)
    r.add_argument("--no-labels", action="store_true")

    sub.add_parser("list", help="list the claim registry")

    i = sub.add_parser("inspect", help="dump the witnesses of one seeded configuration as JSON")
    i.add_argument("--config", choices=sorted(_INSPECT_VARIANTS), required=True)
    i.add_argument("--seed", type=int, default=0)
    i.add_argument("--mode", choices=MODES, default="rational")
    return p


def _cmd_verify(args) -> int:
    try:
        claims = _parse_claims(args.claims)
    except ValueError as exc:
        print(f"isoconic verify: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.trials < 1:
        print("isoconic verify: --trials must be positive", file=sys.stderr)
        return EXIT_USAGE
    plan = TrialPlan(claims=claims, trials=args.trials, seed=args.seed, mode=args.mode, tol=args.tol,
                     workers=max(1, args.workers))
    report = run_suite(plan)
    print(f"{'claim':<22} {'pass':>5} {'fail':>5} {'skip':>5} {'max residual':>13}")
    for c in report.claims:
        print(f"{c.claim_id:<22} {c.passed:>5} {c.failed:>5} {c.skipped:>5} {c.max_residual:>13.3e}")
    if args.report:
        try:
            write_report(report, args.report)
        except OSError as exc:
            print(f"isoconic verify: cannot write report: {exc}", file=sys.stderr)
            return EXIT_USAGE
    return EXIT_FAILED if report.any_failed else EXIT_OK


def _cmd_render(args) -> int:
    spec = RenderSpec(config=args.config, seed=args.seed, width=args.width, labels=not args.no_labels)
    try:
        svg = render_svg(spec)
    except DegenerateConfig as exc:
        print(f"isoconic render: {exc}", file=sys.stderr)
        return EXIT_FAILED
    if args.out == "-":
        sys.stdout.write(svg)
        return EXIT_OK
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(svg)
    except OSError as exc:
        print(f"isoconic render: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def _cmd_list(args) -> int:
    width = max(len(c) for c in CLAIM_IDS)
    for cid in CLAIM_IDS:
        claim = REGISTRY[cid]
        modes = "rational+float" if claim.exact_capable else "float"
        print(f"{cid:<{width}}  [{claim.variant.__name__}; {modes}]  {claim.summary}")
    return EXIT_OK


def _encode(v) -> Optional[Dict[str, object]]:
    if v is None:
        return None
    if isinstance(v, (HPoint, HLine)):
        out: Dict[str, object] = {"coords": [str(c) for c in v.coords]}
        if isinstance(v, HPoint) and not v.is_infinite(1e-15):
            out["affine"] = [float(c) for c in v.affine_float()]
        return out
    return {"coefficients": [str(c) for c in v.coefficients()]}


def inspect_config(name: str, seed: int, mode: str = "rational", attempts: int = 50) -> Dict[str, object]:
    """Witness coordinates of configuration ``name`` on the first valid instance of ``seed``."""
    variant = _INSPECT_VARIANTS[name]
    exact = mode == "rational"
    last = None
    for index in range(attempts):
        inst = generate_instance(trial_rng(seed, index))
        T, P = triangle_in_mode(inst.T, exact), point_in_mode(inst.P, exact)
        try:
            if variant == "main":
                cfg = build_main_config_one(T, P, inst.t_Q, trial_rng(seed, index, 1))
            elif variant == "two-tangency":
                cfg = build_two_tangency_config(T, P, trial_rng(seed, index, 2))
            else:
                cfg = build_extreme_point_config(triangle_in_mode(inst.T, False), point_in_mode(inst.P, False))
        except (DegenerateConfig, GeometryError) as exc:
            last = exc
            continue
        return {
            "config": name,
            "variant": variant,
            "seed": seed,
            "instance_index": index,
            "mode": mode if variant != "extreme-point" else "float",
            "triangle": {k: _encode(v) for k, v in zip("ABC", inst.T.vertices)},
            "t_Q": str(inst.t_Q),
            "witnesses": {k: _encode(v) for k, v in cfg.witnesses().items()},
            "notes": {k: str(v) for k, v in cfg.notes.items()},
        }
    raise DegenerateConfig(f"no valid configuration in {attempts} instances: {last}")


def _cmd_inspect(args) -> int:
    try:
        data = inspect_config(args.config, args.seed, args.mode)
    except DegenerateConfig as exc:
        print(f"isoconic inspect: {exc}", file=sys.stderr)
        return EXIT_FAILED
    json.dump(data, sys.stdout, indent=2)
    sys.stdout.write("\n")
    return EXIT_OK


_COMMANDS = {"verify": _cmd_verify, "render": _cmd_render, "list": _cmd_list, "inspect": _cmd_inspect}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
