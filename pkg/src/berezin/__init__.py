"""Berezin transform kernels, spectral calculus and Fourier-Jacobi
transforms on the complex hyperbolic ball."""

from .geometry import (
    BallPoint,
    BoundaryPoint,
    GroupElement,
    Parameters,
    hyperbolic_distance,
    inner,
    make_rotation,
    make_transvection,
    measure_weight,
    mobius_apply,
)
from .jacobi import (JacobiParams, RadialProfile, berezin_profile, forward,
                     inverse, transform_symbol)
from .kernels import (
    berezin_kernel,
    berezin_kernel_alt,
    harish_chandra_c,
    plancherel_density,
    poisson_kernel,
    reproducing_constant,
    reproducing_kernel,
)
from .numerics import QuadratureSpec, Stencil, apply_laplacian_fd, ball_integral, integrate_adaptive
from .spectral import (
    berezin_heat_kernel,
    berezin_symbol,
    discrete_eigenvalue,
    heat_kernel,
    spectral_kernel,
)

__version__ = "0.1.0"

__all__ = [
    "BallPoint",
    "BoundaryPoint",
    "GroupElement",
    "JacobiParams",
    "Parameters",
    "QuadratureSpec",
    "RadialProfile",
    "Stencil",
    "apply_laplacian_fd",
    "ball_integral",
    "berezin_heat_kernel",
    "berezin_kernel",
    "berezin_kernel_alt",
    "berezin_profile",
    "berezin_symbol",
    "discrete_eigenvalue",
    "forward",
    "harish_chandra_c",
    "heat_kernel",
    "hyperbolic_distance",
    "inner",
    "integrate_adaptive",
    "inverse",
    "make_rotation",
    "make_transvection",
    "measure_weight",
    "mobius_apply",
    "plancherel_density",
    "poisson_kernel",
    "reproducing_constant",
    "reproducing_kernel",
    "spectral_kernel",
    "transform_symbol",
]
