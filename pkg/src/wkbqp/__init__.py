"""Quivers with potential from triangulated surfaces and quadratic differentials."""

from .novikov import NovikovScalar, invert_to_order, valuation
from .surface import IdealTriangulation, MarkedSurface, Signing, flip, rank_formula, validate
from .quiver import Quiver, QuiverWithPotential, Potential, qp_from_triangulation, reduce_qp
from .ginzburg import check_d_squared, jacobian_dims
from .ainfty import build_category, verify_ainfty
from .config import PipelineConfig

__version__ = "0.1.0"
