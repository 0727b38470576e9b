"""Cohomogeneity one Einstein metrics on two-summands double disk bundles.

The structural triple (d1, d2, A) is the only input: ``classify`` gives an
exact verdict, ``shoot`` constructs the heterocline numerically and
``reconstruct_profile`` turns it back into a metric.
"""

__version__ = "0.1.0"

from .exactpoly import PolyQ, QuadraticSurd, count_roots, sign_on_interval, sturm_sequence
from .thresholds import (
    StructuralTriple,
    Verdict,
    VerdictTag,
    a1_threshold,
    build_families,
    chi_tilde,
    classify,
    psi,
    threshold_report,
)
from .dynamics import IntegrationControls, critical_points, phi_trajectory, shoot, theta_ivp
from .reconstruct import einstein_residual, reconstruct_profile, sine_cone_closed_form
from .catalog import builtin_catalog, check_catalog, emit_tables, load_catalog

__all__ = [
    "PolyQ", "QuadraticSurd", "count_roots", "sign_on_interval", "sturm_sequence",
    "StructuralTriple", "Verdict", "VerdictTag", "a1_threshold", "build_families", "chi_tilde",
    "classify", "psi", "threshold_report", "IntegrationControls", "critical_points",
    "phi_trajectory", "shoot", "theta_ivp", "einstein_residual", "reconstruct_profile",
    "sine_cone_closed_form", "builtin_catalog", "check_catalog", "emit_tables", "load_catalog",
]
