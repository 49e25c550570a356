from __future__ import annotations

import dataclasses
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from isoconic.conics import ConicClass, intersection_multiplicity_at
from isoconic.errors import CircleConic, DegenerateConfig, DegenerateTriangle, WrongConfigVariant
from isoconic.harness import generate_instance, trial_rng
from isoconic.lab import (
    CLAIM_IDS,
    EXACT_CLAIMS,
    REGISTRY,
    ClaimStatus,
    build_extreme_point_config,
    build_main_config_one,
    build_two_tangency_config,
    check_claim,
)
from isoconic.lab.configs import point_in_mode, triangle_in_mode
from isoconic.projective import HPoint, collinearity_residual, incidence_residual, join, parallel_residual
from isoconic.triangle import Triangle, from_barycentric, spiral_center

F = Fraction
T0 = Triangle(HPoint(0, 0), HPoint(4, 0), HPoint(1, 3))
CENTROID = HPoint(F(5, 3), 1)


def on(C, p) -> float:
    return C.residual(p)


def collinear(a, b, c) -> float:
    return collinearity_residual(a, b, c)


def main_incidences(cfg):
    """Defining incidence residuals of every witness of a main configuration."""
    Om, P, Ps, Q = cfg.Omega, cfg.P, cfg.Pstar, cfg.Q
    r = {
        "D": max(on(Om, cfg.D), on(cfg.H, cfg.D)),
        "X": max(on(Om, cfg.X), collinear(cfg.D, P, cfg.X)),
        "Q": collinear(P, Ps, Q),
        "gamma": max(on(cfg.gamma, p) for p in (P, Q, cfg.X)),
        "E_conic": max(on(cfg.E_conic, p) for p in (*cfg.T.vertices, P, Q)),
        "C1": max(on(cfg.C1, p) for p in (*cfg.T.vertices, P, cfg.X)),
        "H": max(on(cfg.H, p) for p in (*cfg.T.vertices, P, Ps)),
        "M": spiral_center(P, Q, cfg.Qstar, Ps).distance(cfg.M),
        "N": max(on(Om, cfg.N), on(cfg.omega, cfg.N)),
        "E": max(on(cfg.omega, cfg.E), collinear(cfg.M, cfg.D, cfg.E)),
        "G": max(on(Om, cfg.G), collinear(cfg.N, P, cfg.G)),
        "F": max(on(Om, cfg.F), collinear(cfg.N, Ps, cfg.F)),
        "Fprime": max(on(Om, cfg.Fprime), collinear(cfg.X, Q, cfg.Fprime)),
        "K": max(on(Om, cfg.K), collinear(cfg.M, P, cfg.K)),
        "R": max(on(Om, cfg.R), collinear(cfg.N, Q, cfg.R)),
        "S": max(on(Om, cfg.S), parallel_residual(join(cfg.N, cfg.S), join(P, Ps))),
        "J": max(collinear(P, Ps, cfg.J), collinear(cfg.M, cfg.N, cfg.J)),
        "T": max(collinear(cfg.M, cfg.S, cfg.Tpt), collinear(cfg.D, cfg.R, cfg.Tpt)),
        "H_pt": max(on(cfg.gamma, cfg.Hpt), collinear(cfg.M, cfg.G, cfg.Hpt)),
    }
    if cfg.L is not None:
        r["L"] = max(on(cfg.gamma, cfg.L), on(cfg.E_conic, cfg.L))
        r["V"] = max(on(cfg.C1, cfg.V), collinear(P, cfg.L, cfg.V))
    return r


def two_incidences(cfg):
    Om, P, Ps = cfg.Omega, cfg.P, cfg.Pstar
    r = {
        "X": max(on(Om, cfg.X), collinear(cfg.D, P, cfg.X)),
        "Y": max(on(Om, cfg.Y), collinear(cfg.D, Ps, cfg.Y)),
        "Z": max(on(cfg.gamma, cfg.Z), collinear(P, Ps, cfg.Z)),
        "U": max(on(Om, cfg.U), collinear(P, cfg.Y, cfg.U)),
        "C2": max(on(cfg.C2, p) for p in (*cfg.T.vertices, P, cfg.U)),
        "G": max(on(Om, cfg.G), on(cfg.E_conic, cfg.G)),
        "Gprime": max(on(cfg.E_conic, cfg.Gprime), collinear(cfg.D, cfg.G, cfg.Gprime)),
        "I": max(on(cfg.C1, cfg.I), collinear(P, cfg.Z, cfg.I)),
        "F": max(on(Om, cfg.F), collinear(cfg.X, cfg.Z, cfg.F)),
        "W": max(collinear(cfg.D, cfg.F, cfg.W), collinear(P, cfg.Z, cfg.W)),
        "DA": max(on(Om, cfg.DA), parallel_residual(join(cfg.T.A, cfg.DA), join(P, Ps))),
        "A1": max(on(cfg.C1, cfg.A1), collinear(cfg.T.A, cfg.DA, cfg.A1)),
    }
    return r


def seeded(seed: int, exact: bool):
    inst = generate_instance(trial_rng(seed, 0))
    return inst, triangle_in_mode(inst.T, exact), point_in_mode(inst.P, exact)


class TestMainConfig:
    def test_exact_reference_instance(self):
        cfg = build_main_config_one(T0, CENTROID, F(1, 3), trial_rng(1, 0, 1))
        assert cfg.exact
        audit = main_incidences(cfg)
        assert all(v == 0 for v in audit.values()), audit
        for cid in EXACT_CLAIMS:
            if REGISTRY[cid].variant is type(cfg):
                res = check_claim(cid, cfg)
                assert res.status is not ClaimStatus.FAIL, (cid, res)
                if res.status is ClaimStatus.PASS:
                    assert res.residual == 0

    def test_equilateral_incenter(self):
        s = math.sqrt(3)
        T = Triangle(HPoint(0.0, 0.0), HPoint(2.0, 0.0), HPoint(1.0, s))
        with pytest.raises(DegenerateConfig):
            build_main_config_one(T, HPoint(1.0, s / 3), 0.5)

    def test_point_on_circumcircle(self):
        with pytest.raises(DegenerateConfig):
            build_main_config_one(T0, HPoint(3, 3), F(1, 3))

    def test_q_equal_to_p(self):
        with pytest.raises(DegenerateConfig):
            build_main_config_one(T0, CENTROID, 0)

    @pytest.mark.parametrize("seed", range(8))
    def test_float_incidences(self, seed):
        inst, T, P = seeded(seed, False)
        cfg = build_main_config_one(T, P, inst.t_Q, trial_rng(seed, 0, 1))
        audit = main_incidences(cfg)
        assert max(audit.values()) <= 1e-8, audit

    @pytest.mark.parametrize("seed", range(3))
    def test_exact_incidences(self, seed):
        inst, T, P = seeded(seed, True)
        cfg = build_main_config_one(T, P, inst.t_Q, trial_rng(seed, 0, 1))
        audit = main_incidences(cfg)
        assert all(v == 0 for v in audit.values()), audit


class TestTwoTangencyConfig:
    @pytest.mark.parametrize("seed", range(8))
    def test_float_incidences(self, seed):
        _, T, P = seeded(seed, False)
        cfg = build_two_tangency_config(T, P, trial_rng(seed, 0, 2))
        assert not cfg.z_is_p
        audit = two_incidences(cfg)
        assert max(audit.values()) <= 1e-9, audit

    @pytest.mark.parametrize("seed", range(3))
    def test_exact_incidences(self, seed):
        _, T, P = seeded(seed, True)
        cfg = build_two_tangency_config(T, P)
        audit = two_incidences(cfg)
        assert all(v == 0 for v in audit.values()), audit

    def test_degenerate_triangle(self):
        with pytest.raises(DegenerateTriangle):
            build_two_tangency_config(Triangle(HPoint(0, 0), HPoint(1, 1), HPoint(2, 2)), HPoint(1, 0))

    def test_dg_parallel_pz(self):
        for seed in range(5):
            _, T, P = seeded(seed, True)
            cfg = build_two_tangency_config(T, P)
            assert parallel_residual(join(cfg.D, cfg.G), join(cfg.P, cfg.Z)) == 0


class TestExtremePointConfig:
    @pytest.mark.parametrize("seed", range(6))
    def test_random_instance(self, seed):
        _, T, P = seeded(seed, False)
        cfg = build_extreme_point_config(T, P)
        assert cfg.conic_class in (ConicClass.REAL_ELLIPSE, ConicClass.HYPERBOLA)
        assert parallel_residual(join(cfg.D, cfg.Dprime), join(cfg.P, cfg.Pstar)) <= 1e-9
        assert max(cfg.C.residual(p) for p in (*T.vertices, cfg.Dprime, P)) <= 1e-9
        assert max(incidence_residual(cfg.center, a) for a in cfg.axes) <= 1e-9

    def test_exact_conic_is_exact(self):
        cfg = build_extreme_point_config(T0, CENTROID)
        assert cfg.C.is_exact and all(cfg.C.value(p) == 0 for p in (*T0.vertices, cfg.Dprime, CENTROID))


class TestClaims:
    def test_registry(self):
        assert len(CLAIM_IDS) == 16
        assert set(EXACT_CLAIMS) == set(CLAIM_IDS) - {"thm-5.1-fwd-tangent", "thm-5.1-fwd-center", "thm-5.1-rev"}
        for cid in CLAIM_IDS:
            assert REGISTRY[cid].summary

    def test_wrong_variant(self):
        cfg = build_two_tangency_config(T0, CENTROID)
        with pytest.raises(WrongConfigVariant):
            check_claim("thm-1.1a", cfg)

    def test_tangent_claim_on_reference(self):
        cfg = build_main_config_one(T0, CENTROID, F(1, 3))
        res = check_claim("thm-1.1a", cfg)
        assert res.status is ClaimStatus.PASS and res.residual == 0
        assert intersection_multiplicity_at(cfg.gamma, cfg.E_conic, cfg.P) >= 2

    def test_collapsed_pair_is_skipped(self):
        cfg = build_main_config_one(T0, CENTROID, F(1, 3))
        collapsed = dataclasses.replace(cfg, Q=cfg.P, Qstar=cfg.Pstar, W=None)
        assert check_claim("lemma-2.3", collapsed).status is ClaimStatus.SKIPPED

    def test_missing_l_is_skipped(self):
        cfg = build_main_config_one(T0, CENTROID, F(1, 3))
        both = dataclasses.replace(cfg, L=None, V=None, notes={"L": "tangent at both P and Q"})
        res = check_claim("thm-1.1b", both)
        assert res.status is ClaimStatus.SKIPPED and "tangent at both" in res.witness["reason"]

    def test_failure_is_detected(self):
        # swapping the circle for another conic through P breaks the shared tangent
        cfg = build_main_config_one(T0, CENTROID, F(1, 3))
        broken = dataclasses.replace(cfg, gamma=cfg.C1)
        assert check_claim("thm-1.1a", broken).status is ClaimStatus.FAIL

    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
    @given(st.integers(0, 10**6))
    def test_exact_claims_hold(self, seed):
        inst, T, P = seeded(seed, True)
        try:
            main = build_main_config_one(T, P, inst.t_Q, trial_rng(seed, 0, 1))
            two = build_two_tangency_config(T, P, trial_rng(seed, 0, 2))
        except DegenerateConfig:
            assume(False)
        for cid in EXACT_CLAIMS:
            cfg = main if REGISTRY[cid].variant is type(main) else two
            res = check_claim(cid, cfg)
            assert res.status is not ClaimStatus.FAIL, (cid, res)
