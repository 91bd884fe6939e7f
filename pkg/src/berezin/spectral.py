"""Spectral calculus for the invariant Laplacian on the weighted ball: its
spectrum, the spectral density profile, kernels of functions of the shifted
operator, heat kernels, and the closed-form Berezin spectral symbol built
from continuous dual Hahn polynomials.

Spectral s-integrals are computed in the variable lam with s = lam^2 (the
Jacobian absorbs the s^(-1/2) endpoint factor exactly).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import BallPoint, Parameters, hyperbolic_distance, inner
from .jacobi import _integrate_outward
from .kernels import projection_constant
from .numerics import DEFAULT_SPEC, QuadratureSpec
from .special import (
    dual_hahn,
    gamma_abs_sq,
    hyp3f2_unit,
    jacobi_function,
    jacobi_function_grid,
    jacobi_polynomial,
    ln_gamma,
    pochhammer,
)

__all__ = [
    "NonDecayingSymbolError",
    "DiscreteEigenvalue",
    "discrete_eigenvalue",
    "SpectrumDescriptor",
    "spectrum",
    "spectral_profile",
    "SpectralAtom",
    "spectral_atoms",
    "SymbolCoefficients",
    "expansion_coefficient",
    "symbol_coefficients",
    "profile_moment",
    "profile_moment_gauss_form",
    "berezin_symbol",
    "spectral_kernel",
    "heat_kernel",
    "berezin_heat_kernel",
]

_SCAN_MAX_LAM = 400.0


class NonDecayingSymbolError(RuntimeError):
    """The spectral symbol does not decay against the continuous density."""


@dataclass(frozen=True)
class DiscreteEigenvalue:
    """Point-spectrum data: invariant-Laplacian eigenvalue rho, spectral
    parameter lam (purely imaginary), shifted eigenvalue s = lam^2 < 0."""

    j: int
    rho: float
    lam: complex
    s: float


def discrete_eigenvalue(j: int, p: Parameters) -> DiscreteEigenvalue:
    """Eigenvalue triple of the j-th discrete mode:
    lam_j = i(2j + n - nu), s_j = -(nu - n - 2j)^2, rho_j = -4j(nu - n - j).
    """
    if not (0 <= j and 2 * j < p.nu - p.n):
        raise ValueError(f"index j={j} outside the discrete range")
    gap = p.nu - p.n - 2 * j
    lam = 1j * (2 * j + p.n - p.nu)
    s = -(gap ** 2)
    rho = -4.0 * j * (p.nu - p.n - j)
    return DiscreteEigenvalue(j=j, rho=rho, lam=lam, s=s)


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Continuous branch maps and the discrete eigenvalue list."""

    shift: float  # (nu - n)^2
    atoms: tuple[DiscreteEigenvalue, ...]

    def continuous_invariant(self, lam: float) -> float:
        """Invariant-Laplacian eigenvalue at real spectral parameter lam."""
        return -(lam ** 2 + self.shift)

    def continuous_shifted(self, lam: float) -> float:
        """Shifted-operator eigenvalue s = lam^2."""
        return lam ** 2


def spectrum(p: Parameters) -> SpectrumDescriptor:
    atoms = tuple(discrete_eigenvalue(j, p) for j in p.discrete_indices())
    return SpectrumDescriptor(shift=(p.nu - p.n) ** 2, atoms=atoms)


def _density(lam: float, p: Parameters) -> float:
    # |c(lam)|^(-2) via log-gamma sums (no pole guards: lam > 0 real)
    n, nu = p.n, p.nu
    il = 1j * float(lam)
    c_sq = (
        2.0 ** (2.0 * (n - nu))
        * math.gamma(n) ** 2
        * gamma_abs_sq(il)
        / (gamma_abs_sq((il + n - nu) / 2.0) * gamma_abs_sq((il + n + nu) / 2.0))
    )
    return 1.0 / c_sq


def _density_vec(lams: np.ndarray, p: Parameters) -> np.ndarray:
    n, nu = p.n, p.nu
    il = 1j * np.asarray(lams, dtype=np.float64)
    log_abs_sq = lambda z: 2.0 * np.real(ln_gamma(z))
    log_c_sq = (
        2.0 * (n - nu) * math.log(2.0)
        + 2.0 * math.lgamma(n)
        + log_abs_sq(il)
        - log_abs_sq((il + n - nu) / 2.0)
        - log_abs_sq((il + n + nu) / 2.0)
    )
    return np.exp(-log_c_sq)


def _continuous_norm(p: Parameters) -> float:
    """Gamma(n) / (4 pi^(n+1) 2^(2(nu-n))), prefactor of the continuous
    spectral density in the variable s."""
    return math.gamma(p.n) / (
        4.0 * math.pi ** (p.n + 1) * 2.0 ** (2.0 * (p.nu - p.n))
    )


def spectral_profile(s: float, t: float, p: Parameters) -> float:
    """Continuous part of the spectral function at shifted eigenvalue s > 0
    and radius t, with the twist prefactor (1-<z,w>)^(-nu) factored out:

    Gamma(n)/(4 pi^(n+1) 2^(2(nu-n))) |c(sqrt s)|^(-2) s^(-1/2)
        phi_sqrt(s)^(n-1, -nu)(t).
    """
    if s <= 0:
        raise ValueError("continuous spectral profile needs s > 0")
    lam = math.sqrt(s)
    phi = jacobi_function(lam, p.n - 1.0, -p.nu, t)
    return _continuous_norm(p) * _density(lam, p) / lam * phi.real


@dataclass(frozen=True)
class SpectralAtom:
    """One discrete term of the spectral function: weight c_j at s = s_j
    with radial profile t -> phi_(lam_j)(t)."""

    s: float
    weight: float
    profile: Callable[[float], float]


def spectral_atoms(p: Parameters) -> list[SpectralAtom]:
    out = []
    alpha, beta = p.n - 1.0, -p.nu
    for j in p.discrete_indices():
        ev = discrete_eigenvalue(j, p)
        lam_j = ev.lam

        def profile(t: float, _lam=lam_j) -> float:
            return jacobi_function(_lam, alpha, beta, t).real

        out.append(SpectralAtom(s=ev.s, weight=projection_constant(j, p), profile=profile))
    return out


def expansion_coefficient(q: int, p: Parameters) -> float:
    """Coefficient A_q of the power expansion of the squared Jacobi
    polynomial factor of the radial Berezin profile:

    A_q = 2^(-q) sum_p binom(l, q-p) binom(l, p)
          Gamma(nu-l+q-p) Gamma(nu-l+p) / (Gamma(n+p) Gamma(n+q-p)),
    summed over p in [max(0, q-l), min(l, q)].  Strictly positive.
    """
    if not 0 <= q <= 2 * p.l:
        raise ValueError(f"q={q} outside [0, 2l]")
    n, nu, l = p.n, p.nu, p.l
    acc = 0.0
    for pp in range(max(0, q - l), min(l, q) + 1):
        acc += (
            math.comb(l, q - pp) * math.comb(l, pp)
            * math.gamma(nu - l + q - pp) * math.gamma(nu - l + pp)
            / (math.gamma(n + pp) * math.gamma(n + q - pp))
        )
    return 2.0 ** (-q) * acc


@dataclass(frozen=True)
class SymbolCoefficients:
    """All expansion data of the closed-form symbol: the A_q list, the
    profile decay exponent mu = 2 nu - 4l, and the normalization
    pi^n (l!)^2 / ((n)_l^2 Gamma(n))."""

    coefficients: tuple[float, ...]
    mu: float
    normalization: float


def symbol_coefficients(p: Parameters) -> SymbolCoefficients:
    coeffs = tuple(expansion_coefficient(q, p) for q in range(2 * p.l + 1))
    poch = pochhammer(float(p.n), p.l).real
    norm = math.pi ** p.n * math.factorial(p.l) ** 2 / (poch ** 2 * math.gamma(p.n))
    return SymbolCoefficients(
        coefficients=coeffs, mu=2.0 * p.nu - 4.0 * p.l, normalization=norm
    )


def _dual_hahn_args(p: Parameters) -> tuple[float, float, float]:
    n, nu, l = p.n, p.nu, p.l
    return (3.0 * nu - 4.0 * l - n) / 2.0, (nu + n) / 2.0, (n - nu) / 2.0


def profile_moment(lam, q: int, p: Parameters) -> complex:
    """q-th beta-weighted hypergeometric moment of the radial profile, in
    its closed dual-Hahn form:

    Gamma(n) Gamma((i lam + 3nu-4l-n)/2) Gamma((-i lam + 3nu-4l-n)/2)
      / (Gamma(2(nu-l)+q) Gamma(nu-2l+q))
      * S_q(lam^2/4; (3nu-4l-n)/2, (nu+n)/2, (n-nu)/2).
    """
    if not 0 <= q <= 2 * p.l:
        raise ValueError(f"q={q} outside [0, 2l]")
    n, nu, l = p.n, p.nu, p.l
    lam = complex(lam)
    a, b, c = _dual_hahn_args(p)
    il = 1j * lam
    gam = cmath.exp(
        ln_gamma(float(n))
        + ln_gamma((il + 3 * nu - 4 * l - n) / 2.0)
        + ln_gamma((-il + 3 * nu - 4 * l - n) / 2.0)
        - ln_gamma(2.0 * (nu - l) + q)
        - ln_gamma(nu - 2.0 * l + q)
    )
    x_sq = (lam ** 2 / 4.0).real
    if abs((lam ** 2).imag) > 1e-12 * max(abs(lam) ** 2, 1.0):
        raise ValueError("moment defined for real or purely imaginary lam")
    return gam * dual_hahn(q, x_sq, a, b, c)


def profile_moment_gauss_form(lam, q: int, p: Parameters) -> complex:
    """The same moment via the non-terminating unit-argument 3F2 route:

    Gamma(n+q) Gamma((i lam + 3nu-4l-n)/2) / Gamma((i lam + 3nu-4l+n)/2 + q)
      * 3F2((i lam+n-nu)/2, (i lam+n+nu)/2, n+q; n, (i lam+3nu-4l+n)/2+q; 1).

    Used as an independent cross-check of profile_moment.
    """
    if not 0 <= q <= 2 * p.l:
        raise ValueError(f"q={q} outside [0, 2l]")
    n, nu, l = p.n, p.nu, p.l
    lam = complex(lam)
    il = 1j * lam
    head = (il + 3 * nu - 4 * l - n) / 2.0
    if head.real <= 0:
        raise ValueError("gamma argument not in the right half-plane")
    e_par = (il + 3 * nu - 4 * l + n) / 2.0 + q
    pref = cmath.exp(ln_gamma(float(n + q)) + ln_gamma(head) - ln_gamma(e_par))
    f32 = hyp3f2_unit(
        (il + n - nu) / 2.0, (il + n + nu) / 2.0, float(n + q), float(n), e_par
    )
    return pref * f32


def berezin_symbol(lam, p: Parameters) -> float:
    """Closed-form spectral symbol g(lam) of the Berezin operator:

    g(lam) = pi^n Gamma(n)^2 / (2 Gamma(nu-l)^2)
             * Gamma((i lam + 3nu-4l-n)/2) Gamma((-i lam + 3nu-4l-n)/2)
             * sum_{q=0}^{2l} (-1)^q 2^q A_q
               S_q(lam^2/4; (3nu-4l-n)/2, (nu+n)/2, (n-nu)/2)
               / (Gamma(2(nu-l)+q) Gamma(nu-2l+q)).

    Real and even in lam; the same formula evaluates at the purely
    imaginary discrete spectral parameters.  (The 2^q factor follows from
    the power expansion of the squared Jacobi polynomial; the transform
    quadrature pins it down.)
    """
    n, nu, l = p.n, p.nu, p.l
    lam = complex(lam)
    acc = complex(0.0)
    for q in range(2 * l + 1):
        acc += (-1) ** q * 2.0 ** q * expansion_coefficient(q, p) * profile_moment(
            lam, q, p
        )
    val = math.pi ** n * math.gamma(n) / (2.0 * math.gamma(nu - l) ** 2) * acc
    if abs(val.imag) > 1e-10 * max(abs(val), 1e-30):
        raise ValueError(f"symbol value has imaginary residue: {val}")
    return val.real


def _continuous_quad(radial_symbol, d: float, p: Parameters,
                     spec: QuadratureSpec, error_cls=NonDecayingSymbolError):
    """int_0^inf radial_symbol(lam) |c(lam)|^(-2) phi_lam(d) dlam with
    decay-scanned truncation; radial_symbol maps a lam array to values."""
    alpha, beta = p.n - 1.0, -p.nu

    def fmat(lams):
        lams = np.asarray(lams)
        vals = (
            np.asarray(radial_symbol(lams), dtype=np.complex128)
            * _density_vec(lams, p)
            * jacobi_function_grid(lams, alpha, beta, d)
        )
        return vals[:, None]

    totals, _ = _integrate_outward(fmat, spec, _SCAN_MAX_LAM,
                                   error_cls=error_cls)
    return complex(totals[0])


def spectral_kernel(f: Callable[[float], complex], z: BallPoint, w: BallPoint,
                    p: Parameters, spec: QuadratureSpec | None = None) -> complex:
    """Kernel of f applied to the shifted invariant Laplacian:

    (1-<z,w>)^(-nu) [ Gamma(n)/(2 pi^(n+1) 2^(2(nu-n)))
                      int_0^inf f(lam^2) |c(lam)|^(-2) phi_lam(d) dlam
                      + sum_j c_j phi_(lam_j)(d) f(s_j) ].

    f must be evaluable on s >= 0 and at the discrete s_j < 0, and decay
    against the continuous density (NonDecayingSymbolError otherwise).
    """
    spec = spec or DEFAULT_SPEC
    d = hyperbolic_distance(z, w)
    alpha, beta = p.n - 1.0, -p.nu

    def radial_symbol(lams):
        return np.array([f(float(v) ** 2) for v in np.asarray(lams)],
                        dtype=np.complex128)

    cont = 2.0 * _continuous_norm(p) * _continuous_quad(radial_symbol, d, p, spec)
    disc = complex(0.0)
    for j in p.discrete_indices():
        ev = discrete_eigenvalue(j, p)
        disc += (
            projection_constant(j, p)
            * jacobi_function(ev.lam, alpha, beta, d)
            * complex(f(ev.s))
        )
    twist = cmath.exp(-p.nu * cmath.log(1.0 - inner(z, w)))
    return twist * (cont + disc)


def heat_kernel(t: float, z: BallPoint, w: BallPoint, p: Parameters,
                spec: QuadratureSpec | None = None) -> complex:
    """Heat kernel of the invariant Laplacian at time t > 0:

    (1-<z,w>)^(-nu) [ sum_j tau_j e^(t rho_j) P_j^(n-1,-nu)(cosh 2d)
      + e^(-t (nu-n)^2) Gamma(n)/(2 pi^(n+1) 2^(2(nu-n)))
        int_0^inf e^(-t lam^2) |c(lam)|^(-2) phi_lam(d) dlam ],

    tau_j = 2 (nu-n-2j) Gamma(nu-j) / (pi^n Gamma(nu-n-j+1)),
    rho_j = -4j(nu-n-j).
    """
    if not t > 0:
        raise ValueError("heat kernel requires t > 0")
    spec = spec or DEFAULT_SPEC
    n, nu = p.n, p.nu
    d = hyperbolic_distance(z, w)
    y = math.cosh(2.0 * d)
    disc = 0.0
    for j in p.discrete_indices():
        ev = discrete_eigenvalue(j, p)
        tau = (
            2.0 * (nu - n - 2 * j) * math.gamma(nu - j)
            / (math.pi ** n * math.gamma(nu - n - j + 1))
        )
        disc += tau * math.exp(t * ev.rho) * jacobi_polynomial(j, n - 1.0, -nu, y)
    radial_symbol = lambda lams: np.exp(-t * np.asarray(lams) ** 2)
    cont = (
        math.exp(-t * (nu - n) ** 2)
        * 2.0 * _continuous_norm(p)
        * _continuous_quad(radial_symbol, d, p, spec)
    )
    twist = cmath.exp(-p.nu * cmath.log(1.0 - inner(z, w)))
    return twist * (disc + cont)


def berezin_heat_kernel(t: float, z: BallPoint, w: BallPoint, p: Parameters,
                        spec: QuadratureSpec | None = None) -> complex:
    """Off-diagonal heat kernel of the Berezin operator at time t > 0.

    The symbol e^(-t g(lam)) tends to 1 at infinity, so the assembly splits
    off the identity atom: this function returns the kernel of
    e^(-t B) - I, which is the full heat kernel pointwise for z != w (the
    identity contributes a point mass on the diagonal only; z == w raises).
    """
    if not t > 0:
        raise ValueError("Berezin heat kernel requires t > 0")
    spec = spec or DEFAULT_SPEC
    d = hyperbolic_distance(z, w)
    if d == 0.0:
        raise ValueError(
            "the Berezin heat kernel carries a point mass on the diagonal; "
            "evaluate off-diagonal or apply it spectrally"
        )
    alpha, beta = p.n - 1.0, -p.nu

    def radial_symbol(lams):
        return np.array(
            [math.expm1(-t * berezin_symbol(float(v), p)) for v in np.asarray(lams)],
            dtype=np.complex128,
        )

    cont = 2.0 * _continuous_norm(p) * _continuous_quad(radial_symbol, d, p, spec)
    disc = complex(0.0)
    for j in p.discrete_indices():
        ev = discrete_eigenvalue(j, p)
        disc += (
            projection_constant(j, p)
            * jacobi_function(ev.lam, alpha, beta, d)
            * math.expm1(-t * berezin_symbol(ev.lam, p))
        )
    twist = cmath.exp(-p.nu * cmath.log(1.0 - inner(z, w)))
    return twist * (cont + disc)
