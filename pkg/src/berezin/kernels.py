"""Kernels on the weighted ball: the Poisson eigenfunction family, the
reproducing kernel of the eigenspace, the Berezin kernel in both radial
forms, the Harish-Chandra c-function with its Plancherel density, and the
residues of the reciprocal c-function product at its upper-half-plane poles.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .geometry import BallPoint, BoundaryPoint, Parameters, hyperbolic_distance, inner
from .special import (
    gamma_abs_sq,
    gamma_real,
    hyp2f1,
    ln_gamma,
    snap_nonpos_int,
    GammaPoleError,
)

__all__ = [
    "poisson_kernel",
    "projection_constant",
    "reproducing_constant",
    "reproducing_kernel",
    "berezin_kernel",
    "berezin_kernel_alt",
    "harish_chandra_c",
    "c_general",
    "plancherel_density",
    "plancherel_density_general",
    "inverse_c_product",
    "DiscretePole",
    "discrete_poles",
    "ResiduePair",
    "c_product_residue",
]


def _principal_power(base: complex, expo: complex) -> complex:
    """Principal branch base**expo; safe for Re(base) > 0."""
    return cmath.exp(expo * cmath.log(base))


def poisson_kernel(z: BallPoint, omega: BoundaryPoint, lam, p: Parameters) -> complex:
    """Eigenfunction family
    P_lam(z, w) = ((1-|z|^2)/|1-<z,w>|^2)^((i lam + n - nu)/2) (1-<z,w>)^(-nu).
    """
    ip = inner(z, omega)
    base = (1.0 - z.norm_sq()) / abs(1.0 - ip) ** 2
    expo = (1j * complex(lam) + p.n - p.nu) / 2.0
    return _principal_power(base, expo) * _principal_power(1.0 - ip, -p.nu)


def projection_constant(j: int, p: Parameters) -> float:
    """Normalizing constant of the j-th discrete spectral projector:
    c_j = 2 Gamma(n+j)(nu-n-2j) Gamma(nu-j) / (pi^n Gamma(n) j! Gamma(nu-n-j+1)).
    """
    if not (0 <= j and 2 * j < p.nu - p.n):
        raise ValueError(f"index j={j} outside the discrete range")
    n, nu = p.n, p.nu
    return (
        2.0 * math.gamma(n + j) / (math.pi ** n * math.gamma(n) * math.factorial(j))
        * (nu - n - 2 * j) * math.gamma(nu - j) / math.gamma(nu - n - j + 1)
    )


def reproducing_constant(p: Parameters) -> float:
    """c_l for the eigenspace the parameters select; strictly positive."""
    return projection_constant(p.l, p)


def _radial_factor(d: float, p: Parameters) -> complex:
    return hyp2f1(-p.l, p.l - p.nu + p.n, p.n, -math.sinh(d) ** 2)


def reproducing_kernel(z: BallPoint, w: BallPoint, p: Parameters) -> complex:
    """K(z,w) = c_l (1-<z,w>)^(-nu) 2F1(-l, l-nu+n; n; -sinh^2 d(z,w))."""
    d = hyperbolic_distance(z, w)
    return (
        reproducing_constant(p)
        * _principal_power(1.0 - inner(z, w), -p.nu)
        * _radial_factor(d, p)
    )


def berezin_kernel(z: BallPoint, w: BallPoint, p: Parameters) -> complex:
    """Normalized squared reproducing kernel, radial form:
    (1-<z,w>)^(-nu) cosh^(-2 nu) d |2F1(-l, l-nu+n; n; -sinh^2 d)|^2.
    """
    d = hyperbolic_distance(z, w)
    return (
        _principal_power(1.0 - inner(z, w), -p.nu)
        * math.cosh(d) ** (-2.0 * p.nu)
        * abs(_radial_factor(d, p)) ** 2
    )


def berezin_kernel_alt(z: BallPoint, w: BallPoint, p: Parameters) -> complex:
    """Independent evaluation path via the Euler-transformed series:
    (1-<z,w>)^(-nu) cosh^(4l-2nu) d |2F1(-l, nu-l; n; tanh^2 d)|^2.
    """
    d = hyperbolic_distance(z, w)
    f = hyp2f1(-p.l, p.nu - p.l, p.n, math.tanh(d) ** 2)
    return (
        _principal_power(1.0 - inner(z, w), -p.nu)
        * math.cosh(d) ** (4.0 * p.l - 2.0 * p.nu)
        * abs(f) ** 2
    )


def c_general(lam, alpha: float, beta: float) -> complex:
    """c-function of the (alpha, beta) family:
    C(lam) = 2^(rho - i lam) Gamma(alpha+1) Gamma(i lam)
             / (Gamma((rho + i lam)/2) Gamma((alpha - beta + 1 + i lam)/2)),
    rho = alpha + beta + 1.
    """
    lam = complex(lam)
    rho = alpha + beta + 1.0
    il = 1j * lam
    for g, where in (((rho + il) / 2, "rho"), ((alpha - beta + 1 + il) / 2, "a-b")):
        if snap_nonpos_int(g) is not None:
            raise GammaPoleError(f"c-function denominator pole ({where}) at lam={lam}")
    log_val = (
        (rho - il) * math.log(2.0)
        + ln_gamma(alpha + 1.0)
        + ln_gamma(il)
        - ln_gamma((rho + il) / 2.0)
        - ln_gamma((alpha - beta + 1.0 + il) / 2.0)
    )
    return cmath.exp(log_val)


def harish_chandra_c(lam, p: Parameters) -> complex:
    """The ball's c-function; equals c_general(lam, n-1, -nu)."""
    return c_general(lam, p.n - 1.0, -p.nu)


def plancherel_density_general(lam: float, alpha: float, beta: float) -> float:
    """|C(lam)|^(-2) for real lam, with the lam -> 0 limit value 0."""
    if lam == 0.0:
        return 0.0
    rho = alpha + beta + 1.0
    il = 1j * float(lam)
    c_abs_sq = (
        2.0 ** (2.0 * rho)
        * gamma_abs_sq(alpha + 1.0)
        * gamma_abs_sq(il)
        / (gamma_abs_sq((rho + il) / 2.0) * gamma_abs_sq((alpha - beta + 1.0 + il) / 2.0))
    )
    return 1.0 / c_abs_sq


def plancherel_density(lam: float, p: Parameters) -> float:
    """|c(lam)|^(-2); even in lam, vanishing like lam^2 at the origin."""
    return plancherel_density_general(abs(lam), p.n - 1.0, -p.nu)


def inverse_c_product(lam, p: Parameters) -> complex:
    """(c(lam) c(-lam))^(-1), via log-gamma sums:
    2^(2(nu-n)) / Gamma(n)^2 *
    G((n+nu+il)/2) G((n+nu-il)/2) G((n-nu-il)/2) G((n-nu+il)/2) / (G(il) G(-il)).
    """
    lam = complex(lam)
    n, nu = p.n, p.nu
    il = 1j * lam
    log_val = (
        2.0 * (nu - n) * math.log(2.0)
        - 2.0 * ln_gamma(float(n))
        + ln_gamma((n + nu + il) / 2.0)
        + ln_gamma((n + nu - il) / 2.0)
        + ln_gamma((n - nu - il) / 2.0)
        + ln_gamma((n - nu + il) / 2.0)
        - ln_gamma(il)
        - ln_gamma(-il)
    )
    return cmath.exp(log_val)


@dataclass(frozen=True)
class DiscretePole:
    """Upper-half-plane pole data of the reciprocal c-function product."""

    j: int
    xi: complex       # i (nu - n - 2j), Im > 0
    lam: complex      # i (2j + n - nu) = -xi
    c: float          # projection constant c_j

    def __post_init__(self):
        if self.xi.imag <= 0:
            raise ValueError("pole must lie in the upper half-plane")


def discrete_poles(p: Parameters) -> list[DiscretePole]:
    out = []
    for j in p.discrete_indices():
        gap = p.nu - p.n - 2 * j
        out.append(
            DiscretePole(j=j, xi=1j * gap, lam=1j * (-gap), c=projection_constant(j, p))
        )
    return out


@dataclass(frozen=True)
class ResiduePair:
    """Residue of the reciprocal c-product at xi_j, by two routes."""

    closed_form: complex
    numeric_limit: complex


def c_product_residue(j: int, p: Parameters) -> ResiduePair:
    """Res((c(lam) c(-lam))^(-1); lam = i(nu-n-2j)), both as the closed
    gamma-product form and as a Richardson-extrapolated numerical limit
    eps * eta(xi_j + eps) along the real direction, eps in {1e-4, 1e-5, 1e-6}.
    """
    if not (0 <= j and 2 * j < p.nu - p.n):
        raise ValueError(f"index j={j} outside the discrete range")
    n, nu = p.n, p.nu
    closed = (
        (-1) ** j
        * 2.0 ** (2.0 * (nu - n) + 1.0)
        / (math.factorial(j) * math.gamma(n) ** 2)
        * math.gamma(nu - j) * math.gamma(j + n) * gamma_real(j + n - nu)
        / (gamma_real(nu - n - 2 * j) * gamma_real(2 * j + n - nu))
        * 1j
    )
    xi = 1j * (nu - n - 2 * j)
    eps_list = [1e-4, 1e-5, 1e-6]
    samples = [eps * inverse_c_product(xi + eps, p) for eps in eps_list]
    # Lagrange extrapolation of the degree-2 polynomial in eps to eps = 0
    numeric = complex(0.0)
    for i, (ei, fi) in enumerate(zip(eps_list, samples)):
        li = 1.0
        for k, ek in enumerate(eps_list):
            if k != i:
                li *= ek / (ek - ei)
        numeric += fi * li
    return ResiduePair(closed_form=closed, numeric_limit=numeric)
