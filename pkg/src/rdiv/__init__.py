"""Exact R-divisor calculus on complete toric varieties and Hirzebruch surfaces."""

from .errors import RdivError
from .scalars import Scalar, parse_scalar, scalar_cmp, scalar_floor, sqrt
from .polyhedra import HPolytope, LPProblem, lp_solve
from .toric import Fan, TDivisor, preset_fan
from .surface import SDivisor, SurfaceModel

__version__ = "0.1.0"

__all__ = [
    "RdivError",
    "Scalar",
    "parse_scalar",
    "scalar_cmp",
    "scalar_floor",
    "sqrt",
    "HPolytope",
    "LPProblem",
    "lp_solve",
    "Fan",
    "TDivisor",
    "preset_fan",
    "SDivisor",
    "SurfaceModel",
    "__version__",
]
