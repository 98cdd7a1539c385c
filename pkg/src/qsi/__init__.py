"""Semi-invariants of quiver representations in exact arithmetic."""

from .quiver import (AddMap, Arrow, DimVector, FunctorData, Path, PathComb, Quiver, QuiverError,
                     apply_functor_dim, compose_paths, dimvector, enumerate_cycles, enumerate_paths,
                     euler_form, make_path, validate_quiver)
from .poly import (CoordRing, Poly, RepPoint, a_degree_component, coord_ring, determinant, evaluate,
                   poly_arith, ring_of, v_weight_of)

__version__ = "0.1.0"

__all__ = [
    "AddMap", "Arrow", "CoordRing", "DimVector", "FunctorData", "Path", "PathComb", "Poly", "Quiver",
    "QuiverError", "RepPoint", "a_degree_component", "apply_functor_dim", "compose_paths", "coord_ring",
    "determinant", "dimvector", "enumerate_cycles", "enumerate_paths", "euler_form", "evaluate",
    "make_path", "poly_arith", "ring_of", "v_weight_of", "validate_quiver",
]
