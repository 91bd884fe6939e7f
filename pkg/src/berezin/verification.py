"""Verification suites: each acceptance-grade identity of the library as an
executable check with a measured error and a pinned tolerance.

Suites (used by the CLI `verify` subcommand and the acceptance tests):

  theorem             A1 symbol = transform quadrature, A2 l = 0 collapse,
                      A8 moment-integral three-way chain
  residues            A4 residue lemma
  kernels             A3 kernel-form equality, A9 reproducing property,
                      A10 uniform kernel mass, A11 boundary product identity
  eigen               A5 finite-difference eigenvalue checks
  heat                A6 spectral-path consistency of the heat kernel
  transform-roundtrip A7 inverse(forward) round trips
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .geometry import BallPoint, BoundaryPoint, Parameters, hyperbolic_distance, inner
from .jacobi import (JacobiParams, RadialProfile, berezin_profile, forward,
                     inverse, transform_symbol)
from .kernels import (
    berezin_kernel,
    berezin_kernel_alt,
    c_product_residue,
    poisson_kernel,
    projection_constant,
    reproducing_kernel,
)
from .numerics import QuadratureSpec, apply_laplacian_fd, ball_integral, circle_average, integrate_adaptive, Stencil
from .special import gamma_abs_sq, hyp2f1, jacobi_function
from .spectral import (
    berezin_symbol,
    discrete_eigenvalue,
    heat_kernel,
    profile_moment,
    profile_moment_gauss_form,
    spectral_kernel,
)

__all__ = ["CheckResult", "run_suite", "SUITES", "PARAMETER_GRID", "LAMBDA_GRID"]

PARAMETER_GRID = (
    Parameters(1, 3.5, 0),
    Parameters(1, 3.5, 1),
    Parameters(1, 5.3, 2),
    Parameters(2, 4.7, 1),
    Parameters(2, 6.3, 1),
)
LAMBDA_GRID = (0.1, 0.5, 1.0, 2.0, 5.0)


@dataclass
class CheckResult:
    criterion: str
    name: str
    measured: float
    tolerance: float
    passed: bool = field(init=False)
    detail: str = ""

    def __post_init__(self):
        self.passed = bool(self.measured <= self.tolerance)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        msg = (f"[{status}] {self.criterion} {self.name}: "
               f"measured {self.measured:.3e} vs tol {self.tolerance:.1e}")
        if self.detail:
            msg += f"  ({self.detail})"
        return msg


def _rel_err(approx, exact) -> float:
    return abs(approx - exact) / abs(exact)


def _random_ball_point(rng, n: int, radius: float = 0.85) -> BallPoint:
    while True:
        v = rng.uniform(-radius, radius, 2 * n)
        z = v[:n] + 1j * v[n:]
        if np.sum(np.abs(z) ** 2) < radius ** 2:
            return BallPoint(z)


def check_main_theorem(quick: bool = False,
                       params_list=None) -> list[CheckResult]:
    """A1: the closed-form symbol equals the Fourier-Jacobi transform of the
    radial Berezin profile, rel err <= 1e-8 across the parameter grid."""
    params_list = params_list or (PARAMETER_GRID[1::2] if quick else PARAMETER_GRID)
    lams = LAMBDA_GRID[1::2] if quick else LAMBDA_GRID
    out = []
    for p in params_list:
        jp = JacobiParams.from_parameters(p)
        profile = berezin_profile(p)
        vals = forward(profile, np.asarray(lams, dtype=np.complex128), jp)
        worst = 0.0
        for lam, val in zip(lams, vals):
            worst = max(worst, _rel_err(val.real, berezin_symbol(lam, p)))
        out.append(CheckResult(
            "A1", f"symbol=transform (n={p.n}, nu={p.nu}, l={p.l})", worst, 1e-8,
            detail=f"lambda grid {list(lams)}"))
    return out


def check_l0_reduction(quick: bool = False) -> list[CheckResult]:
    """A2: at l = 0 the symbol collapses to
    (pi^n / 2) |Gamma((i lam + 3 nu - n)/2)|^2 / (Gamma(2 nu) Gamma(nu))."""
    params_list = [Parameters(1, 3.5, 0), Parameters(2, 6.3, 0)]
    if quick:
        params_list = params_list[:1]
    out = []
    for p in params_list:
        worst = 0.0
        for lam in LAMBDA_GRID:
            closed = (
                math.pi ** p.n / 2.0
                * gamma_abs_sq((1j * lam + 3 * p.nu - p.n) / 2.0)
                / (math.gamma(2 * p.nu) * math.gamma(p.nu))
            )
            worst = max(worst, _rel_err(berezin_symbol(lam, p), closed))
        out.append(CheckResult(
            "A2", f"l=0 collapse (n={p.n}, nu={p.nu})", worst, 1e-13))
    return out


def check_kernel_forms(quick: bool = False) -> list[CheckResult]:
    """A3: the two radial Berezin kernel forms agree on random pairs."""
    rng = np.random.default_rng(1730)
    n_pairs = 40 if quick else 200
    out = []
    for p in PARAMETER_GRID:
        worst = 0.0
        for _ in range(n_pairs):
            z = _random_ball_point(rng, p.n)
            w = _random_ball_point(rng, p.n)
            worst = max(worst, _rel_err(berezin_kernel_alt(z, w, p),
                                        berezin_kernel(z, w, p)))
        out.append(CheckResult(
            "A3", f"kernel forms (n={p.n}, nu={p.nu}, l={p.l})", worst, 1e-12,
            detail=f"{n_pairs} random pairs"))
    return out


def check_residue_lemma(quick: bool = False) -> list[CheckResult]:
    """A4: projection constants reconstructed from the numeric residue of
    the reciprocal c-function product; closed-form vs numeric residues."""
    seen = set()
    out = []
    for p in PARAMETER_GRID:
        key = (p.n, p.nu)
        if key in seen:
            continue
        seen.add(key)
        worst_lemma = 0.0
        worst_paths = 0.0
        for j in p.discrete_indices():
            pair = c_product_residue(j, p)
            recon = (
                2.0 ** (2 * (p.n - p.nu)) * math.gamma(p.n) / math.pi ** p.n
                * (-1j * pair.numeric_limit)
            )
            worst_lemma = max(worst_lemma, _rel_err(recon, projection_constant(j, p)))
            worst_paths = max(worst_paths, _rel_err(pair.numeric_limit, pair.closed_form))
        out.append(CheckResult(
            "A4", f"residue lemma (n={p.n}, nu={p.nu})", worst_lemma, 1e-7,
            detail=f"all {p.discrete_count} poles"))
        out.append(CheckResult(
            "A4", f"residue closed=limit (n={p.n}, nu={p.nu})", worst_paths, 1e-7))
    return out


def check_eigenfunctions(quick: bool = False) -> list[CheckResult]:
    """A5: finite-difference invariant Laplacian reproduces the eigenvalue
    -(lam^2 + (nu-n)^2) on the Poisson kernel and rho_l on the reproducing
    kernel; the measured rho_l adjudicates the two candidate formulas."""
    p = Parameters(1, 3.5, 1)
    st = Stencil(h=1e-3, order=2)
    lam = 2.0
    omega = BoundaryPoint([1.0 + 0.0j])
    pts = [BallPoint([c]) for c in
           (0.1 + 0.0j, 0.25 + 0.2j, -0.3 + 0.1j, 0.05 - 0.4j, 0.45 + 0.0j)]
    pts = pts[:2] if quick else pts
    expected_p = -(lam ** 2 + (p.nu - p.n) ** 2)
    worst = 0.0
    for z in pts:
        F = lambda zz: poisson_kernel(zz, omega, lam, p)
        ratio = apply_laplacian_fd(F, z, p, st) / F(z)
        worst = max(worst, _rel_err(ratio.real, expected_p))
    res_p = CheckResult("A5", "Poisson eigenfunction (n=1)", worst, 1e-4,
                        detail=f"eigenvalue {expected_p}")

    w0 = BallPoint([0.2 + 0.1j])
    rho_spectral = -4.0 * p.l * (p.nu - p.n - p.l)          # from the lam_j family
    rho_square = -((p.nu - p.n - 2 * p.l) ** 2)             # competing claim
    worst = 0.0
    measured = []
    for z in pts:
        F = lambda zz: reproducing_kernel(zz, w0, p)
        ratio = apply_laplacian_fd(F, z, p, st) / F(z)
        measured.append(ratio.real)
        worst = max(worst, _rel_err(ratio.real, rho_spectral))
    mean_measured = float(np.mean(measured))
    verdict = (
        f"measured {mean_measured:.6f}; candidates: -4l(nu-n-l) = {rho_spectral}, "
        f"-(nu-n-2l)^2 = {rho_square}; the -4l(nu-n-l) family wins"
    )
    res_k = CheckResult("A5", "reproducing-kernel eigenvalue (n=1)", worst, 1e-4,
                        detail=verdict)
    return [res_p, res_k]


def check_heat_consistency(quick: bool = False) -> list[CheckResult]:
    """A6: the direct heat-kernel formula matches the spectral-kernel path
    with symbol e^(-t s), shifted by e^(-t (nu-n)^2)."""
    p = Parameters(1, 3.5, 1)
    rng = np.random.default_rng(815)
    n_samples = 5 if quick else 20
    worst = 0.0
    for _ in range(n_samples):
        t = float(rng.uniform(0.05, 2.0))
        z = _random_ball_point(rng, p.n, 0.8)
        w = _random_ball_point(rng, p.n, 0.8)
        direct = heat_kernel(t, z, w, p)
        via_symbol = (
            math.exp(-t * (p.nu - p.n) ** 2)
            * spectral_kernel(lambda s: math.exp(-t * s), z, w, p)
        )
        worst = max(worst, _rel_err(via_symbol, direct))
    return [CheckResult("A6", "heat kernel = spectral path", worst, 1e-10,
                        detail=f"{n_samples} random (t, z, w)")]


def check_transform_roundtrip(quick: bool = False) -> list[CheckResult]:
    """A7: inverse(forward(profile)) returns the profile, sup-norm error
    <= 1e-6 on [0, 2], for a generic profile and for the Berezin profile."""
    ts = np.linspace(0.0, 2.0, 5 if quick else 9)
    out = []

    jp = JacobiParams(alpha=0.0, beta=-3.5)
    generic = RadialProfile(
        evaluator=lambda t: np.exp(-t ** 2) * np.cos(t),
        decay="exponential", rate=2.5,
    )
    rec = inverse(transform_symbol(generic, jp), ts, jp)
    err = float(np.max(np.abs(rec - generic(ts))))
    out.append(CheckResult("A7", "round trip, generic profile", err, 1e-6,
                           detail="exp(-t^2) cos t, (alpha, beta) = (0, -3.5)"))

    p = Parameters(1, 3.5, 1)
    jp = JacobiParams.from_parameters(p)
    prof = berezin_profile(p)
    rec = inverse(transform_symbol(prof, jp), ts, jp)
    err = float(np.max(np.abs(rec - prof(ts)) / np.abs(prof(ts))))
    out.append(CheckResult("A7", "round trip, radial Berezin profile", err, 1e-6,
                           detail="(n, nu, l) = (1, 3.5, 1); relative sup norm"))
    return out


def check_moment_chain(quick: bool = False) -> list[CheckResult]:
    """A8: defining integral = gauss-series form = dual-Hahn form for the
    profile moments, every link <= 1e-8."""
    p = Parameters(1, 3.5, 1)
    n, nu, l = p.n, p.nu, p.l
    qs = (0, 1) if quick else (0, 1, 2)
    worst_link1 = 0.0
    worst_link2 = 0.0
    for q in qs:
        for lam in (1.0, 2.0):
            sigma = (1j * lam - n - 4 * l + 3 * nu) / 2.0

            def integrand(ys):
                ys = np.atleast_1d(ys)
                out = np.empty(ys.shape, dtype=np.complex128)
                for i, y in enumerate(ys):
                    out[i] = (
                        np.exp((sigma - 1.0) * np.log1p(-y)) * y ** (n + q - 1)
                        * hyp2f1((1j * lam + n - nu) / 2.0,
                                 (1j * lam + n + nu) / 2.0, n, float(y))
                    )
                return out

            quad, _ = integrate_adaptive(
                integrand, 0.0, 1.0 - 1e-14,
                QuadratureSpec(rel_tol=1e-11, abs_tol=1e-14, max_panels=8000),
            )
            gauss = profile_moment_gauss_form(lam, q, p)
            hahn = profile_moment(lam, q, p)
            worst_link1 = max(worst_link1, _rel_err(quad, gauss))
            worst_link2 = max(worst_link2, _rel_err(gauss, hahn))
    return [
        CheckResult("A8", "moment integral = gauss form", worst_link1, 1e-8,
                    detail=f"q in {list(qs)}, lambda in [1, 2]"),
        CheckResult("A8", "gauss form = dual-Hahn form", worst_link2, 1e-8),
    ]


def check_reproducing_property(quick: bool = False) -> list[CheckResult]:
    """A9: the reproducing kernel is a projector kernel:
    int K(z, w) K(w, w0) dmu(w) = K(z, w0)."""
    p = Parameters(1, 3.5, 1)
    z = BallPoint([0.3 + 0.0j])
    w0 = BallPoint([0.1 + 0.2j])
    f = lambda w: reproducing_kernel(z, w, p) * reproducing_kernel(w, w0, p)
    val = ball_integral(f, p, QuadratureSpec(rel_tol=1e-9, abs_tol=1e-12),
                        angle_points=256 if quick else 512)
    expected = reproducing_kernel(z, w0, p)
    return [CheckResult("A9", "reproducing property", _rel_err(val, expected), 1e-6,
                        detail="(n, nu, l) = (1, 3.5, 1)")]


def check_boundedness(quick: bool = False) -> list[CheckResult]:
    """A10: the absolute Berezin kernel mass int |B(z, w)| dmu(w) is finite
    and uniformly bounded over |z| in {0, 0.5, 0.9}."""
    p = Parameters(1, 3.5, 1)
    radii = (0.0, 0.5) if quick else (0.0, 0.5, 0.9)
    masses = []
    for r in radii:
        z = BallPoint([complex(r)])
        f = lambda w: abs(berezin_kernel(z, w, p))
        val = ball_integral(f, p, QuadratureSpec(rel_tol=1e-8, abs_tol=1e-11),
                            angle_points=256 if quick else 512)
        masses.append(val.real)
    bound = max(masses)
    spread = bound / min(masses) - 1.0
    ok = all(math.isfinite(m) for m in masses)
    return [CheckResult(
        "A10", "uniform kernel mass", spread if ok else math.inf, 0.5,
        detail=f"masses {['%.6f' % m for m in masses]} at |z| in {list(radii)}; "
               f"C = {bound:.6f}")]


def check_poisson_identity(quick: bool = False) -> list[CheckResult]:
    """A11: boundary-circle product identity at n = 1:
    avg_omega P_lam(z, omega) conj(P_lam(w, omega))
      = (1 - <z,w>)^(-nu) phi_lam^(0, -nu)(d(z, w)),
    adjudicating the conjugate-pair hypergeometric form."""
    p = Parameters(1, 3.5, 1)
    cases = [
        (BallPoint([0.3 + 0.0j]), BallPoint([0.1 + 0.2j]), 2.0),
        (BallPoint([0.5 + 0.0j]), BallPoint([-0.2 + 0.35j]), 0.7),
        (BallPoint([0.15 - 0.3j]), BallPoint([0.4 + 0.1j]), 1.3),
    ]
    if quick:
        cases = cases[:1]
    worst = 0.0
    for z, w, lam in cases:
        def integrand(theta):
            om = BoundaryPoint([cmath.exp(1j * theta)])
            return poisson_kernel(z, om, lam, p) * poisson_kernel(w, om, lam, p).conjugate()
        lhs = circle_average(integrand, points=2048)
        d = hyperbolic_distance(z, w)
        rhs = (
            cmath.exp(-p.nu * cmath.log(1.0 - inner(z, w)))
            * jacobi_function(lam, p.n - 1.0, -p.nu, d)
        )
        worst = max(worst, _rel_err(lhs, rhs))
    return [CheckResult("A11", "boundary product identity (n=1)", worst, 1e-8,
                        detail="conjugate-pair form; 2048-point circle rule")]


SUITES = {
    "theorem": (check_main_theorem, check_l0_reduction, check_moment_chain),
    "residues": (check_residue_lemma,),
    "kernels": (check_kernel_forms, check_reproducing_property,
                check_boundedness, check_poisson_identity),
    "eigen": (check_eigenfunctions,),
    "heat": (check_heat_consistency,),
    "transform-roundtrip": (check_transform_roundtrip,),
}
SUITES["all"] = tuple(fn for suite in
                      ("theorem", "residues", "kernels", "eigen", "heat",
                       "transform-roundtrip")
                      for fn in SUITES[suite])


def run_suite(name: str, quick: bool = False,
              params_list=None) -> list[CheckResult]:
    """Run one named suite and return its check results."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    results = []
    for fn in SUITES[name]:
        t0 = time.perf_counter()
        if fn is check_main_theorem and params_list:
            rs = fn(quick=quick, params_list=params_list)
        else:
            rs = fn(quick=quick)
        elapsed = time.perf_counter() - t0
        for r in rs:
            r.detail = (r.detail + f"; {elapsed:.1f}s").lstrip("; ")
        results.extend(rs)
    return results
