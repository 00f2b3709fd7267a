"""Harmonic hulls of domains in R^n and the geometry around them.

Submodules
----------
core
    Complex vectors, the bilinear form, projective points, tolerances.
twistor
    Lines in CP^3, Pluecker coordinates and the fibration over S^4.
regions, hull
    Constructive regions and exact pointwise hull membership (even n).
integrands, bateman
    Bateman's contour integral, its residue oracle and harmonicity checks.
odd_dim
    Branch tracking, reduced hulls, Kelvin and Moebius transforms for n = 3.
lie
    SO(2m+2, C), its parabolic subgroups and the PQP membership test.
"""
from .core import (
    DEFAULT_TOL,
    ConsistencyError,
    HarmHullError,
    ProjectivePoint,
    SingularError,
    Tolerances,
    bilinear,
    proj_equal,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOL",
    "ConsistencyError",
    "HarmHullError",
    "ProjectivePoint",
    "SingularError",
    "Tolerances",
    "bilinear",
    "proj_equal",
    "__version__",
]
