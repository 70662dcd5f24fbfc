"""Numerical laboratory for monotone-map calculus, integral divergence
classification, the spherical mean inequality and extremal radial maps."""

from qlab._qlab import (
    ConditionReport,
    ConvexityReport,
    DistortionProfile,
    Distortions,
    ExtremalMap,
    GrowthWitness,
    LogMap,
    MonotoneMap,
    NormalizeResult,
    RadialField,
    VerificationRecord,
    Verdict,
    __version__,
    analytic_oracle,
    ball_mean,
    check_convex,
    classify,
    classify_all_equivalent,
    dimension_constants,
    jensen_gap,
    lemma31_sweep,
    log_transform,
    norm_divergence,
    normalize_phi,
    ring_modulus,
    run_acceptance_suite,
    solve_profile,
    spherical_average,
    spherical_norm,
    verify_lemma31,
)

__all__ = [
    "ConditionReport",
    "ConvexityReport",
    "DistortionProfile",
    "Distortions",
    "ExtremalMap",
    "GrowthWitness",
    "LogMap",
    "MonotoneMap",
    "NormalizeResult",
    "RadialField",
    "VerificationRecord",
    "Verdict",
    "__version__",
    "analytic_oracle",
    "ball_mean",
    "check_convex",
    "classify",
    "classify_all_equivalent",
    "dimension_constants",
    "jensen_gap",
    "lemma31_sweep",
    "log_transform",
    "norm_divergence",
    "normalize_phi",
    "ring_modulus",
    "run_acceptance_suite",
    "solve_profile",
    "spherical_average",
    "spherical_norm",
    "verify_lemma31",
]
