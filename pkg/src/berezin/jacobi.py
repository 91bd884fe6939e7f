"""Forward and inverse Fourier-Jacobi transforms for the weight
Delta(t) = (2 sinh t)^(2 alpha + 1) (2 cosh t)^(2 beta + 1), together with
the discrete spectrum coefficients and the radial profile whose transform
is the Berezin spectral symbol.

The transform engines integrate on Gauss-Kronrod panels of width <= 0.5
with adaptive bisection, truncating where the integrand falls below
truncation_threshold times its peak.  Integrands are evaluated on node
arrays, and several transform targets (a lambda grid, a radius grid) are
integrated simultaneously.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import Parameters
from .kernels import plancherel_density_general
from .numerics import (
    DEFAULT_SPEC,
    MaxPanelsExceededError,
    QuadratureSpec,
    ToleranceNotMetError,
    _NODES,
    _WEIGHTS_G,
    _WEIGHTS_K,
)
from .special import _series_2f1, gamma_real, jacobi_function_grid

__all__ = [
    "DivergenceError",
    "JacobiParams",
    "RadialProfile",
    "weight",
    "forward",
    "inverse",
    "transform_symbol",
    "discrete_coefficient",
    "berezin_profile",
]

_SCAN_STEP = 0.25
_SCAN_MAX_T = 80.0
_SCAN_MAX_LAM = 400.0


class DivergenceError(RuntimeError):
    """The transform integrand failed its decay check."""


@dataclass(frozen=True)
class JacobiParams:
    """Weight exponents (alpha, beta); rho = alpha + beta + 1.

    The classical inversion hypotheses require alpha > -1 and
    |beta| > alpha + 1 (the discrete spectrum is non-empty for beta < 0).
    """

    alpha: float
    beta: float

    def __post_init__(self):
        if not self.alpha > -1.0:
            raise ValueError("alpha must exceed -1")
        if not abs(self.beta) > self.alpha + 1.0:
            raise ValueError("need |beta| > alpha + 1")

    @property
    def rho(self) -> float:
        return self.alpha + self.beta + 1.0

    @classmethod
    def from_parameters(cls, p: Parameters) -> "JacobiParams":
        return cls(alpha=p.n - 1.0, beta=-p.nu)

    def discrete_xis(self) -> list[complex]:
        """Upper-half-plane spectrum i(|beta| - alpha - 1 - 2j), j = 0, 1, ..."""
        out = []
        j = 0
        while abs(self.beta) - self.alpha - 1.0 - 2 * j > 0:
            out.append(1j * (abs(self.beta) - self.alpha - 1.0 - 2 * j))
            j += 1
        return out


@dataclass(frozen=True)
class RadialProfile:
    """A scalar profile on [0, inf) with a declared decay class.

    evaluator must accept numpy arrays of radii.  decay is "exponential"
    (with `rate` the net integrand decay exponent against the transform
    weight) or "compact" (with `support` the cutoff radius).
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay: str = "exponential"
    rate: float | None = None
    support: float | None = None

    def __post_init__(self):
        if self.decay not in ("exponential", "compact"):
            raise ValueError("decay must be 'exponential' or 'compact'")
        if self.decay == "compact" and self.support is None:
            raise ValueError("compact profiles must declare their support")

    def __call__(self, ts):
        return self.evaluator(np.asarray(ts, dtype=np.float64))


def weight(t, jp: JacobiParams):
    """(2 sinh t)^(2 alpha + 1) (2 cosh t)^(2 beta + 1); vanishes at t = 0
    like t^(2 alpha + 1)."""
    t = np.asarray(t, dtype=np.float64)
    val = (2.0 * np.sinh(t)) ** (2.0 * jp.alpha + 1.0) * (
        2.0 * np.cosh(t)
    ) ** (2.0 * jp.beta + 1.0)
    return float(val) if val.ndim == 0 else val


def _gk_panel_matrix(fmat, lo: float, hi: float):
    half, mid = 0.5 * (hi - lo), 0.5 * (hi + lo)
    fx = np.asarray(fmat(mid + half * _NODES), dtype=np.complex128)
    if fx.ndim == 1:
        fx = fx[:, None]
    val_k = half * (_WEIGHTS_K @ fx)
    val_g = half * (_WEIGHTS_G @ fx)
    l1 = half * (_WEIGHTS_K @ np.abs(fx))
    return [lo, hi, val_k, np.abs(val_k - val_g), l1]


def _refine_panels(panels, fmat, spec: QuadratureSpec, span: float):
    """Bisect the worst panel until per-column errors meet
    max(abs_tol, rel_tol |total|, cancellation floor from the L1 mass).

    Integrands assembled from large-parameter hypergeometric series carry
    pointwise cancellation noise the panel error estimate cannot shrink;
    when refinement stops improving, the current values are returned with
    their (stalled) error estimates rather than ground further — callers
    treat values at that floor as zero.
    """
    stall_window, stall_gain = 64, 0.9
    history: list[float] = []
    while True:
        totals = np.sum([pl[2] for pl in panels], axis=0)
        errors = np.sum([pl[3] for pl in panels], axis=0)
        l1 = np.sum([pl[4] for pl in panels], axis=0)
        floor = 32.0 * 2.2e-16 * l1
        tol = np.maximum(spec.abs_tol, np.maximum(spec.rel_tol * np.abs(totals), floor))
        worst_err = float(np.max(errors))
        history.append(worst_err)
        # window scales with panel count so slow-but-real convergence of
        # wide oscillatory integrands is not mistaken for a stall
        w = max(stall_window, len(panels))
        stalled = len(history) > w and worst_err > stall_gain * history[-w]
        if np.all(errors <= tol) or stalled:
            return totals, np.maximum(errors, floor)
        if len(panels) >= spec.max_panels:
            raise MaxPanelsExceededError(
                f"transform quadrature: {len(panels)} panels, "
                f"max error {worst_err:.3g}"
            )
        worst = max(range(len(panels)), key=lambda i: float(np.max(panels[i][3])))
        lo, hi = panels[worst][0], panels[worst][1]
        if hi - lo < 1e-13 * span:
            raise ToleranceNotMetError("transform panel width collapsed")
        mid = 0.5 * (lo + hi)
        panels[worst : worst + 1] = [
            _gk_panel_matrix(fmat, lo, mid), _gk_panel_matrix(fmat, mid, hi)
        ]


def _integrate_matrix(fmat, a: float, b: float, spec: QuadratureSpec,
                      max_width: float = 0.5):
    """Adaptive GK15 integration of a matrix-valued integrand.

    fmat(ts) returns shape (len(ts), M); integrates each column over (a, b)
    simultaneously, refining the panel whose worst column error is largest.
    Returns (totals (M,), errors (M,)).
    """
    n_init = max(1, int(math.ceil((b - a) / max_width)))
    edges = np.linspace(a, b, n_init + 1)
    panels = [_gk_panel_matrix(fmat, lo, hi)
              for lo, hi in zip(edges[:-1], edges[1:])]
    return _refine_panels(panels, fmat, spec, b - a)


def _integrate_outward(fmat, spec: QuadratureSpec, max_x: float,
                       width: float = 0.5, error_cls=None):
    """March GK15 panels away from 0 until 3 consecutive panels contribute
    below truncation_threshold of the accumulated L1 mass, then refine.

    Contribution-based truncation is robust against noise plateaus in
    integrands assembled from other quadratures.
    """
    panels = []
    l1_total = None
    run = 0
    k = 0
    while k * width < max_x:
        pl = _gk_panel_matrix(fmat, k * width, (k + 1) * width)
        panels.append(pl)
        l1_total = pl[4] if l1_total is None else l1_total + pl[4]
        scale = float(np.max(l1_total))
        contrib = float(np.max(pl[4]))
        if k >= 2 and contrib <= spec.truncation_threshold * scale:
            run += 1
            if run >= 3:
                return _refine_panels(panels, fmat, spec, (k + 1) * width)
        else:
            run = 0
        k += 1
    err = error_cls or ToleranceNotMetError
    raise err(f"integrand shows no decay on (0, {max_x})")


def _truncation_point(magnitude, grid, threshold: float):
    """First grid point after the peak with 3 consecutive values below
    threshold * peak, or None."""
    peak = float(np.max(magnitude))
    if peak == 0.0:
        return grid[1]
    below = magnitude < threshold * peak
    run = 0
    i_peak = int(np.argmax(magnitude))
    for i in range(i_peak, len(grid)):
        run = run + 1 if below[i] else 0
        if run >= 3:
            return float(grid[i])
    return None


def forward(profile: RadialProfile, lam, jp: JacobiParams,
            spec: QuadratureSpec | None = None):
    """Fourier-Jacobi transform
    phi_hat(lam) = int_0^inf profile(t) phi_lam(t) Delta(t) dt.

    lam may be a complex scalar or a 1-d array (a shared radial quadrature
    is used for the whole grid).  Even in lam.
    """
    vals, _ = _forward_engine(profile, lam, jp, spec)
    return vals


def transform_symbol(profile: RadialProfile, jp: JacobiParams,
                     spec: QuadratureSpec | None = None):
    """A caching spectral-symbol callable lam -> forward(profile, lam).

    Values indistinguishable from zero at the quadrature's cancellation
    floor are clipped to exactly zero, so the inverse transform's
    contribution-based truncation sees genuine decay instead of the noise
    plateau of an oscillatory-quadrature tail.  A quadrature whose error
    estimate stalls at that floor (series cancellation grows like
    e^(c lam) for large real lam) is likewise reported as zero.
    """
    cache: dict[complex, complex] = {}

    def symbol(lam):
        key = complex(lam)
        if key not in cache:
            try:
                val, err = _forward_engine(profile, key, jp, spec)
            except MaxPanelsExceededError:
                # The estimate stalls only when cancellation noise dominates
                # the value itself; the transform is below its floor there.
                val, err = 0.0, math.inf
            cache[key] = 0.0 if abs(val) <= 2.0 * err else val
        return cache[key]

    return symbol


def _forward_engine(profile: RadialProfile, lam, jp: JacobiParams,
                    spec: QuadratureSpec | None = None):
    spec = spec or DEFAULT_SPEC
    lams = np.atleast_1d(np.asarray(lam, dtype=np.complex128))
    scalar = np.isscalar(lam) or np.asarray(lam).ndim == 0
    if profile.decay == "compact":
        T = float(profile.support)
    else:
        # log-domain envelope scan (factors overflow separately at large t):
        # |phi_lam(t)| <~ (1+t) e^((max |Im lam| - rho) t) and
        # log Delta(t) = (2a+1) log(2 sinh t) + (2b+1) log(2 cosh t).
        growth = float(np.max(np.abs(lams.imag))) - jp.rho
        grid = np.arange(_SCAN_STEP, _SCAN_MAX_T, _SCAN_STEP)
        with np.errstate(divide="ignore"):
            logs = (
                np.log(np.abs(profile(grid)))
                + (2.0 * jp.alpha + 1.0) * np.log(2.0 * np.sinh(grid))
                + (2.0 * jp.beta + 1.0) * np.log(2.0 * np.cosh(grid))
                + growth * grid
                + np.log1p(grid)
            )
        finite = np.isfinite(logs)
        if not np.any(finite):
            zeros = np.zeros(lams.shape, dtype=np.complex128)
            return ((complex(0.0), 0.0) if scalar
                    else (zeros, np.zeros(lams.shape)))
        mag = np.zeros_like(logs)
        mag[finite] = np.exp(logs[finite] - np.max(logs[finite]))
        T = _truncation_point(mag, grid, spec.truncation_threshold)
        if T is None:
            raise DivergenceError(
                "transform integrand shows no decay; profile too heavy for "
                f"(alpha, beta) = ({jp.alpha}, {jp.beta})"
            )

    def fmat(ts):
        ts = np.asarray(ts)
        base = profile(ts) * weight(ts, jp)
        phis = jacobi_function_grid(lams[:, None], jp.alpha, jp.beta, ts[None, :])
        return (base[None, :] * phis).T

    totals, errors = _integrate_matrix(fmat, 0.0, T, spec)
    if scalar:
        return complex(totals[0]), float(errors[0])
    return totals, errors


def discrete_coefficient(j: int, jp: JacobiParams) -> float:
    """Weight of the j-th discrete term of the inversion formula:
    d_j = -i Res((C(z) C(-z))^(-1); z = i(|beta| - alpha - 1 - 2j)).
    """
    rho = jp.rho
    if not -rho - 2 * j > 0:
        raise ValueError(f"discrete index {j} out of range")
    alpha, beta = jp.alpha, jp.beta
    return (
        (-1) ** j
        * 2.0 ** (1.0 - 2.0 * rho)
        / (math.factorial(j) * math.gamma(alpha + 1.0) ** 2)
        * gamma_real(rho + j) * math.gamma(alpha + 1.0 + j) * gamma_real(-beta - j)
        / (gamma_real(rho + 2 * j) * gamma_real(-rho - 2 * j))
    )


def inverse(symbol: Callable[[complex], complex], t, jp: JacobiParams,
            spec: QuadratureSpec | None = None):
    """Inverse Fourier-Jacobi transform at radii t (scalar or 1-d array):

    (1/2pi) int_0^inf symbol(lam) |C(lam)|^(-2) phi_lam(t) dlam
      + sum_j d_j symbol(xi_j) phi_xi_j(t).

    The symbol must be evaluable at the purely imaginary discrete points
    xi_j as well as on the positive real axis.  Returns the real part.
    """
    spec = spec or DEFAULT_SPEC
    ts = np.atleast_1d(np.asarray(t, dtype=np.float64))
    scalar = np.isscalar(t) or np.asarray(t).ndim == 0

    cache: dict[float, complex] = {}

    def sym(lam_val: float) -> complex:
        if lam_val not in cache:
            cache[lam_val] = complex(symbol(lam_val))
        return cache[lam_val]

    def fmat(lams):
        lams = np.asarray(lams)
        sd = np.array(
            [sym(float(v)) * plancherel_density_general(float(v), jp.alpha, jp.beta)
             for v in lams],
            dtype=np.complex128,
        )
        phis = jacobi_function_grid(lams[:, None], jp.alpha, jp.beta, ts[None, :])
        return sd[:, None] * phis

    totals, _ = _integrate_outward(fmat, spec, _SCAN_MAX_LAM,
                                   error_cls=DivergenceError)
    out = totals / (2.0 * math.pi)
    for j, xi in enumerate(jp.discrete_xis()):
        dj = discrete_coefficient(j, jp)
        phi_vals = jacobi_function_grid(xi, jp.alpha, jp.beta, ts)
        out = out + dj * complex(symbol(xi)) * phi_vals
    out = np.real(out)
    return float(out[0]) if scalar else out


def berezin_profile(p: Parameters) -> RadialProfile:
    """Radial profile of the Berezin kernel against the twist factor:
    h(t) = 2^(2(nu-n)) pi^n / Gamma(n) * cosh^(-mu) t
           * 2F1(-l, nu-l; n; tanh^2 t)^2,   mu = 2 nu - 4l.

    Its transform against the (n-1, -nu) weight is the Berezin spectral
    symbol; the net integrand decay rate is 3 nu - 4l - n > 0.
    """
    n, nu, l = p.n, p.nu, p.l
    mu = 2.0 * nu - 4.0 * l
    const = 2.0 ** (2.0 * (nu - n)) * math.pi ** n / math.gamma(n)

    def evaluator(ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=np.float64)
        x = np.tanh(ts) ** 2
        f = np.real(_series_2f1(complex(-l), complex(nu - l), float(n), x))
        return const * np.cosh(ts) ** (-mu) * f ** 2

    return RadialProfile(
        evaluator=evaluator,
        decay="exponential",
        rate=3.0 * nu - 4.0 * l - n,
    )
