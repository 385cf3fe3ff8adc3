"""Numerical quadratic differentials on the Riemann sphere."""

from .differential import (
    Classification,
    DegenerateInput,
    NoTrivalentCellulation,
    NonSimpleZero,
    NotDoublePole,
    Pole,
    QuadraticDifferential,
    SignedResidue,
    WKBError,
    Zero,
    ZeroResidue,
    asymptotic_directions,
    cellulation_face_count,
    check_cellulation_possible,
    classify_points,
    residue_at_double_pole,
    sign_residue,
)
from .periods import BranchAmbiguity, PeriodResult, constant_triangle_index, phase_and_period
from .tracer import (
    SaddleConnection,
    Separatrix,
    StartAtSingularity,
    Terminal,
    TracerParams,
    Trajectory,
    detect_saddle_connections,
    launch_angles,
    separatrices,
    trace_trajectory,
)
from .triangulation import (
    HalfPlane,
    SaddleConnectionPresent,
    SimplePolePresent,
    Strip,
    TracingInconclusive,
    WKBResult,
    wkb_triangulation,
)
