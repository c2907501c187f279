"""Exact disk-count generating functions for semi-Fano toric manifolds.

The pipeline: validate a fan, pick a nef basis of the curve-class lattice,
enumerate the hypergeometric correction series per ray, assemble and invert
the coordinate change they generate, and read off the one-pointed disk
invariants and corrected superpotentials.  All arithmetic is exact.
"""

from .fans import (
    CurveClass,
    CurveLattice,
    Fan,
    FanError,
    alpha_class,
    cone_coordinates,
    curve_lattice,
    fan_polytope_vertices,
    is_semi_fano,
    nef_check,
    validate_fan,
    wall_curve_classes,
)
from .mirror import (
    GZeroFamily,
    MirrorMapPair,
    assemble_mirror_map,
    compute_g0_family,
    enumerate_g0_classes,
    g0_series,
    pullback_g0,
)
from .series import (
    DiagonalUnitMap,
    MultiSeries,
    SeriesError,
    TruncationBox,
    add,
    exp_series,
    invert_diagonal_unit,
    log_series,
    mul,
    render,
    sub,
    substitute,
)
from .superpotential import (
    CheckReport,
    InvariantSeries,
    InvariantTable,
    SuperpotentialExpr,
    ToricAnalysis,
    analyze,
    assemble_W_HV,
    assemble_W_LF,
    assemble_W_PF,
    check_multiplicative_consistency,
    check_PF_equals_LF,
    cross_validate_surface,
    delta_series,
    invariant_table,
    normalize_W_LF,
    render_table,
    structural_report,
    surface_admissible_delta,
)

__version__ = "0.1.0"
