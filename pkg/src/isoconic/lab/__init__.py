"""Configurations from the isogonal-conic theorems and the claims checked on them."""

from .claims import (
    CLAIM_IDS,
    EXACT_CLAIMS,
    REGISTRY,
    THM51_CLAIMS,
    ClaimResult,
    ClaimStatus,
    check_claim,
    thm51_conditions,
)
from .configs import (
    ExtremePointConfig,
    MainConfigOne,
    TwoTangencyConfig,
    build_extreme_point_config,
    build_main_config_one,
    build_two_tangency_config,
)

__all__ = [
    "CLAIM_IDS",
    "EXACT_CLAIMS",
    "REGISTRY",
    "THM51_CLAIMS",
    "ClaimResult",
    "ClaimStatus",
    "check_claim",
    "thm51_conditions",
    "ExtremePointConfig",
    "MainConfigOne",
    "TwoTangencyConfig",
    "build_extreme_point_config",
    "build_main_config_one",
    "build_two_tangency_config",
]
