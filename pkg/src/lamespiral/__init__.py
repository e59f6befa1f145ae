"""Sinusoidal spirals, Lame curves and policles.

Numerical geometry, integral identities and keplerian dynamics linking the
arc length of the spirals ``r**n = cos(n*theta)`` to areas bounded by the Lame
curves ``x**(2n) + y**(2n) = 1`` and by the policles.
"""

from lamespiral.curves import (
    CurveFamily,
    PlanePoint,
    PolarPoint,
    Superellipse,
    lame_implicit,
    lame_param_point,
    lame_polar_radius,
    policle_radius,
    radial_projection,
    spiral_radius,
    spiral_theta_from_radius,
)
from lamespiral.errors import (
    ConsistencyError,
    ConvergenceError,
    DomainError,
    IntegrandError,
    LameSpiralError,
    NumericalError,
    SimulationError,
)

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "ConvergenceError",
    "CurveFamily",
    "DomainError",
    "IntegrandError",
    "LameSpiralError",
    "NumericalError",
    "PlanePoint",
    "PolarPoint",
    "SimulationError",
    "Superellipse",
    "lame_implicit",
    "lame_param_point",
    "lame_polar_radius",
    "policle_radius",
    "radial_projection",
    "spiral_radius",
    "spiral_theta_from_radius",
]
