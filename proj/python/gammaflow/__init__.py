"""Python interface to the gammaflow core (curvature calculus, exact
translators, profile ODEs, flow stepping, diagnostics)."""

from ._core import (
    ConeExit,
    CurvatureSpec,
    DomainError,
    NotATranslatorError,
    c_alpha,
    classify,
    cone_margin,
    cutoff_f,
    elementary_symmetric,
    euler_residual,
    eval_gamma,
    flow_grim_error,
    grad_gamma,
    grim_max_residual,
    grim_verdict,
    parse_spec,
    patch_csv_roundtrip_error,
    shoot_bowl,
)

__all__ = [
    "ConeExit",
    "CurvatureSpec",
    "DomainError",
    "NotATranslatorError",
    "c_alpha",
    "classify",
    "cone_margin",
    "cutoff_f",
    "elementary_symmetric",
    "euler_residual",
    "eval_gamma",
    "flow_grim_error",
    "grad_gamma",
    "grim_max_residual",
    "grim_verdict",
    "parse_spec",
    "patch_csv_roundtrip_error",
    "shoot_bowl",
]
