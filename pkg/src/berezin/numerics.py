"""Shared numerical engines: adaptive 1-d quadrature (Gauss-Kronrod 15/7
with bisection, tanh-sinh option for endpoint singularities), periodic
circle averages, ball volume integration for n in {1, 2}, and the
finite-difference invariant Laplacian.

Integrands passed to the quadrature routines must accept numpy arrays of
abscissae and return arrays (complex ok).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass

import numpy as np

from .geometry import BallPoint, Parameters

__all__ = [
    "QuadratureSpec",
    "Stencil",
    "ToleranceNotMetError",
    "MaxPanelsExceededError",
    "BoundaryMarginError",
    "integrate_adaptive",
    "circle_average",
    "ball_integral",
    "apply_laplacian_fd",
]


class ToleranceNotMetError(RuntimeError):
    """Quadrature subdivision stalled before reaching the requested tolerance."""


class MaxPanelsExceededError(RuntimeError):
    """Panel budget exhausted before reaching the requested tolerance."""


class BoundaryMarginError(ValueError):
    """Finite-difference stencil would leave the safe interior margin."""


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-13
    max_panels: int = 4000
    truncation_threshold: float = 1e-16

    def __post_init__(self):
        if self.rel_tol < 1e-13:
            raise ValueError("rel_tol below 1e-13 is not resolvable in doubles")
        if self.max_panels < 1:
            raise ValueError("max_panels must be positive")


@dataclass(frozen=True)
class Stencil:
    h: float = 1e-3
    order: int = 2

    def __post_init__(self):
        if not 1e-5 <= self.h <= 1e-2:
            raise ValueError("stencil step must lie in [1e-5, 1e-2]")
        if self.order not in (2, 4):
            raise ValueError("stencil order must be 2 or 4")


DEFAULT_SPEC = QuadratureSpec()

# Gauss-Kronrod 15/7 abscissae and weights (positive half).
_XGK = np.array(
    [
        0.991455371120813,
        0.949107912342759,
        0.864864423359769,
        0.741531185599394,
        0.586087235467691,
        0.405845151377397,
        0.207784955007898,
        0.0,
    ]
)
_WGK = np.array(
    [
        0.022935322010529,
        0.063092092629979,
        0.104790010322250,
        0.140653259715525,
        0.169004726639267,
        0.190350578064785,
        0.204432940075298,
        0.209482141084728,
    ]
)
_WG = np.array(
    [
        0.129484966168870,
        0.279705391489277,
        0.381830050505119,
        0.417959183673469,
    ]
)

# full 15-node rule, ascending
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_WEIGHTS_K = np.concatenate([_WGK[:-1], _WGK[::-1]])
# Gauss-7 weights aligned with nodes 1,3,5,7,9,11,13 of the 15-node set
_WEIGHTS_G = np.zeros(15)
_WEIGHTS_G[1:14:2] = np.concatenate([_WG[:-1], _WG[::-1]])


def _gk_panel(f, lo: float, hi: float):
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    fx = np.asarray(f(mid + half * _NODES), dtype=np.complex128)
    val_k = half * np.sum(_WEIGHTS_K * fx)
    val_g = half * np.sum(_WEIGHTS_G * fx)
    return val_k, abs(val_k - val_g)


def _integrate_gk(f, a: float, b: float, spec: QuadratureSpec):
    val, err = _gk_panel(f, a, b)
    heap = [(-err, 0, a, b, val, err)]
    total_val, total_err = val, err
    counter = 1
    span = b - a
    while True:
        tol = max(spec.abs_tol, spec.rel_tol * abs(total_val))
        if total_err <= tol:
            return total_val, total_err
        if len(heap) >= spec.max_panels:
            raise MaxPanelsExceededError(
                f"error {total_err:.3g} > tol {tol:.3g} after {len(heap)} panels"
            )
        neg_err, _, lo, hi, pval, perr = heapq.heappop(heap)
        if hi - lo < 1e-14 * span:
            raise ToleranceNotMetError(
                f"panel width collapsed near [{lo}, {hi}] with error {perr:.3g}"
            )
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk_panel(f, lo, mid)
        v2, e2 = _gk_panel(f, mid, hi)
        total_val += v1 + v2 - pval
        total_err += e1 + e2 - perr
        heapq.heappush(heap, (-e1, counter, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, counter + 1, mid, hi, v2, e2))
        counter += 2


def _integrate_tanh_sinh(f, a: float, b: float, spec: QuadratureSpec):
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    u_max = 4.0

    def level_sum(us):
        arg = 0.5 * math.pi * np.sinh(us)
        x = mid + half * np.tanh(arg)
        w = half * 0.5 * math.pi * np.cosh(us) / np.cosh(arg) ** 2
        keep = (x > a) & (x < b) & (w > 0)
        if not np.any(keep):
            return 0.0
        return np.sum(w[keep] * np.asarray(f(x[keep]), dtype=np.complex128))

    h = 0.5
    us = np.arange(-u_max, u_max + h / 2, h)
    total = level_sum(us) * h
    prev = total
    for _ in range(8):
        h *= 0.5
        us = np.arange(-u_max + h, u_max, 2 * h)
        total = 0.5 * prev + level_sum(us) * h
        err = abs(total - prev)
        tol = max(spec.abs_tol, spec.rel_tol * abs(total))
        if err <= tol:
            return total, err
        prev = total
    raise ToleranceNotMetError("tanh-sinh levels exhausted")


def integrate_adaptive(f, a: float, b, spec: QuadratureSpec | None = None,
                       method: str = "gauss-kronrod"):
    """Integrate a vectorized callable over (a, b); b may be math.inf.

    Returns (value, error_estimate) with error <= max(abs_tol, rel_tol |value|),
    or raises ToleranceNotMetError / MaxPanelsExceededError.
    """
    spec = spec or DEFAULT_SPEC
    if b == math.inf:
        def mapped(us):
            us = np.asarray(us)
            xs = a + us / (1.0 - us)
            return np.asarray(f(xs)) / (1.0 - us) ** 2
        return integrate_adaptive(mapped, 0.0, 1.0, spec, method)
    a, b = float(a), float(b)
    if not b > a:
        raise ValueError("integration interval must have b > a")
    if method == "gauss-kronrod":
        return _integrate_gk(f, a, b, spec)
    if method == "tanh-sinh":
        return _integrate_tanh_sinh(f, a, b, spec)
    raise ValueError(f"unknown quadrature method {method!r}")


def circle_average(f, points: int = 2048) -> complex:
    """Average of f over the unit circle parameter theta in [0, 2pi).

    Uniform (trapezoid) rule; spectrally accurate for smooth periodic f.
    """
    thetas = 2.0 * math.pi * np.arange(points) / points
    vals = np.asarray([f(th) for th in thetas], dtype=np.complex128)
    return complex(np.mean(vals))


def _angle_mean_n1(f, r: float, angle_points: int) -> complex:
    thetas = 2.0 * math.pi * np.arange(angle_points) / angle_points
    vals = [f(BallPoint([r * complex(math.cos(t), math.sin(t))])) for t in thetas]
    return complex(np.mean(np.asarray(vals, dtype=np.complex128)))


def ball_integral(f, p: Parameters, spec: QuadratureSpec | None = None,
                  angle_points: int = 512) -> complex:
    """Integral of f over the ball against the weighted measure
    (1-|z|^2)^(nu-n-1) dm(z), for n in {1, 2}.

    Polar product quadrature: adaptive in the radius, uniform in the angles
    (n = 1), Gauss-Legendre x uniform Hopf angles (n = 2).
    """
    spec = spec or DEFAULT_SPEC
    nu, n = p.nu, p.n
    # radial substitution r = sin(pi u / 2): the factor (1-r^2)^p dr becomes
    # (pi/2) cos^(2p+1)(pi u / 2) du, removing boundary singularities for
    # every weight exponent p > -1/2.
    u_hi = 1.0 - 3e-7  # keeps r <= 1 - 1e-13, inside the point constructor margin
    if n == 1:
        def radial(us):
            us = np.atleast_1d(us)
            out = np.empty(us.shape, dtype=np.complex128)
            for i, u in enumerate(us):
                r = math.sin(0.5 * math.pi * u)
                jac = 0.5 * math.pi * math.cos(0.5 * math.pi * u)
                out[i] = (
                    2.0 * math.pi * r * (1.0 - r * r) ** (nu - 2.0) * jac
                    * _angle_mean_n1(f, r, angle_points)
                )
            return out
        val, _ = integrate_adaptive(radial, 0.0, u_hi, spec)
        return complex(val)
    if n == 2:
        chi_nodes, chi_w = np.polynomial.legendre.leggauss(16)
        chi = 0.25 * math.pi * (chi_nodes + 1.0)
        chi_w = chi_w * 0.25 * math.pi * np.sin(chi) * np.cos(chi)
        m = max(8, angle_points // 32)
        thetas = 2.0 * math.pi * np.arange(m) / m
        dtheta = (2.0 * math.pi / m) ** 2

        def sphere_mean(r: float) -> complex:
            acc = 0.0 + 0.0j
            for ci, cw in zip(chi, chi_w):
                z1 = r * math.cos(ci)
                z2 = r * math.sin(ci)
                for t1 in thetas:
                    e1 = z1 * complex(math.cos(t1), math.sin(t1))
                    for t2 in thetas:
                        e2 = z2 * complex(math.cos(t2), math.sin(t2))
                        acc += cw * f(BallPoint([e1, e2]))
            return acc * dtheta

        def radial(us):
            us = np.atleast_1d(us)
            out = np.empty(us.shape, dtype=np.complex128)
            for i, u in enumerate(us):
                r = math.sin(0.5 * math.pi * u)
                jac = 0.5 * math.pi * math.cos(0.5 * math.pi * u)
                out[i] = r ** 3 * (1.0 - r * r) ** (nu - 3.0) * jac * sphere_mean(r)
            return out
        val, _ = integrate_adaptive(radial, 0.0, u_hi, spec)
        return complex(val)
    raise ValueError("ball_integral supports n in {1, 2} only")


_D1_OFFSETS = {2: ((1, 0.5), (-1, -0.5)),
               4: ((2, -1.0 / 12), (1, 8.0 / 12), (-1, -8.0 / 12), (-2, 1.0 / 12))}


def apply_laplacian_fd(F, z: BallPoint, p: Parameters,
                       st: Stencil | None = None) -> complex:
    """Finite-difference invariant Laplacian
    4(1-|z|^2) { sum (delta_ij - z_i conj(z_j)) d^2/dz_i dconj(z_j)
                 - nu sum conj(z_j) d/dconj(z_j) } F(z).

    Wirtinger derivatives are assembled from real central differences:
    d/dz = (dx - i dy)/2, d/dzbar = (dx + i dy)/2.
    """
    st = st or Stencil()
    h = st.h
    if 1.0 - z.norm() < 10.0 * h:
        raise BoundaryMarginError("point too close to the boundary for the stencil")
    n = z.dim
    base = np.concatenate([z.coords.real, z.coords.imag])
    cache: dict[tuple, complex] = {}

    def ev(offsets: dict[int, float]) -> complex:
        key = tuple(sorted(offsets.items()))
        if key not in cache:
            x = base.copy()
            for axis, mult in offsets.items():
                x[axis] += mult * h
            pt = BallPoint(x[:n] + 1j * x[n:])
            cache[key] = complex(F(pt))
        return cache[key]

    c1 = _D1_OFFSETS[st.order]
    if st.order == 2:
        c2 = ((1, 1.0), (0, -2.0), (-1, 1.0))
    else:
        c2 = ((2, -1.0 / 12), (1, 16.0 / 12), (0, -30.0 / 12),
              (-1, 16.0 / 12), (-2, -1.0 / 12))

    def d1(axis: int) -> complex:
        return sum(w * ev({axis: o}) for o, w in c1) / h

    def d2(axis: int) -> complex:
        return sum(w * ev({axis: o}) for o, w in c2) / (h * h)

    def d_mixed(ax1: int, ax2: int) -> complex:
        if st.order == 2:
            return (
                ev({ax1: 1, ax2: 1}) - ev({ax1: 1, ax2: -1})
                - ev({ax1: -1, ax2: 1}) + ev({ax1: -1, ax2: -1})
            ) / (4.0 * h * h)
        acc = 0.0 + 0.0j
        for o1, w1 in c1:
            for o2, w2 in c1:
                acc += w1 * w2 * ev({ax1: o1, ax2: o2})
        return acc / (h * h)

    zc = z.coords
    second_sum = 0.0 + 0.0j
    for i in range(n):
        for j in range(n):
            coef = (1.0 if i == j else 0.0) - zc[i] * np.conj(zc[j])
            if abs(coef) == 0.0:
                continue
            xi, yi, xj, yj = i, n + i, j, n + j
            if i == j:
                wij = 0.25 * (d2(xi) + d2(yi))
            else:
                wij = 0.25 * (
                    d_mixed(xi, xj) + 1j * d_mixed(xi, yj)
                    - 1j * d_mixed(yi, xj) + d_mixed(yi, yj)
                )
            second_sum += coef * wij
    first_sum = 0.0 + 0.0j
    for j in range(n):
        dbar = 0.5 * (d1(j) + 1j * d1(n + j))
        first_sum += np.conj(zc[j]) * dbar
    return complex(4.0 * (1.0 - z.norm_sq()) * (second_sum - p.nu * first_sum))
