"""Scalar special functions: complex log-gamma, Gauss and generalized
hypergeometric series, Jacobi polynomials and functions, continuous dual
Hahn polynomials.

Evaluation strategy for the Gauss series 2F1(a,b;c;x) with real argument:

* terminating (a or b a non-positive integer): exact finite sum,
* x in [0, 0.75]: direct series,
* x in (0.75, 1): linear connection formula in 1-x,
* x < 0: Pfaff transformation onto [0, 1), then the rules above.

All series stop when the last term falls below 1e-17 of the partial sum,
with a hard cap of 10_000 terms.
"""

from __future__ import annotations

import cmath
import math

import numpy as np

__all__ = [
    "GammaPoleError",
    "NonConvergenceError",
    "ln_gamma",
    "gamma",
    "gamma_real",
    "gamma_abs_sq",
    "pochhammer",
    "hyp2f1",
    "hyp3f2_terminating",
    "hyp3f2_unit",
    "jacobi_polynomial",
    "jacobi_function",
    "jacobi_function_grid",
    "dual_hahn",
]

SERIES_TOL = 1e-17
MAX_TERMS = 10_000
INT_SNAP = 1e-12


class GammaPoleError(ValueError):
    """A gamma factor was requested at a non-positive integer."""


class NonConvergenceError(RuntimeError):
    """A hypergeometric series failed its convergence preconditions."""


# Lanczos rational approximation, g = 607/128, 15 coefficients.  Good to
# ~15 significant digits for Re z >= 0.5; the reflection formula covers the
# left half-strip.
_LANCZOS_G = 607.0 / 128.0
_LANCZOS_C = np.array(
    [
        0.99999999999999709182,
        57.156235665862923517,
        -59.597960355475491248,
        14.136097974741747174,
        -0.49191381609762019978,
        0.33994649984811888699e-4,
        0.46523628927048575665e-4,
        -0.98374475304879564677e-4,
        0.15808870322491248884e-3,
        -0.21026444172410488319e-3,
        0.21743961811521264320e-3,
        -0.16431810653676389022e-3,
        0.84418223983852743293e-4,
        -0.26190838401581408670e-4,
        0.36899182659531622704e-5,
    ]
)
_LOG_SQRT_2PI = 0.91893853320467274178


def _is_nonpos_int_scalar(z: complex) -> bool:
    z = complex(z)
    return (
        abs(z.imag) <= INT_SNAP
        and abs(z.real - round(z.real)) <= INT_SNAP
        and round(z.real) <= 0
    )


def snap_nonpos_int(z: complex):
    """Return the non-positive integer that z sits on (within 1e-12), or None."""
    if _is_nonpos_int_scalar(z):
        return int(round(complex(z).real))
    return None


def _ln_gamma_core(z):
    # Re z >= 0.5 assumed; z scalar complex or complex ndarray.
    zm1 = z - 1.0
    x = _LANCZOS_C[0] + np.sum(
        _LANCZOS_C[1:] / (zm1[..., None] + np.arange(1, 15)), axis=-1
    )
    t = zm1 + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (zm1 + 0.5) * np.log(t) - t + np.log(x)


def ln_gamma(z):
    """Principal-branch log-gamma for complex scalars or complex arrays.

    Raises GammaPoleError at non-positive integers (scalar input only; array
    input is for internal off-pole use).
    """
    if np.isscalar(z) or isinstance(z, complex):
        zc = complex(z)
        if _is_nonpos_int_scalar(zc):
            raise GammaPoleError(f"log-gamma pole at z = {zc}")
        if zc.real >= 0.5:
            return complex(_ln_gamma_core(np.complex128(zc)))
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        val = (
            math.log(math.pi)
            - np.log(np.sin(np.pi * np.complex128(zc)))
            - _ln_gamma_core(np.complex128(1.0 - zc))
        )
        return complex(val)
    z = np.asarray(z, dtype=np.complex128)
    out = np.empty_like(z)
    right = z.real >= 0.5
    if np.any(right):
        out[right] = _ln_gamma_core(z[right])
    if np.any(~right):
        zl = z[~right]
        out[~right] = (
            math.log(math.pi)
            - np.log(np.sin(np.pi * zl))
            - _ln_gamma_core(1.0 - zl)
        )
    return out


def gamma(z) -> complex:
    """Complex gamma via exp(ln_gamma)."""
    return cmath.exp(ln_gamma(complex(z)))


def gamma_real(x: float) -> float:
    """Signed real gamma for real non-integer arguments of either sign."""
    if x > 0:
        return math.gamma(x)
    if x == math.floor(x):
        raise GammaPoleError(f"gamma pole at x = {x}")
    return math.pi / (math.sin(math.pi * x) * math.gamma(1.0 - x))


def gamma_abs_sq(z) -> float:
    """|Gamma(z)|^2 = Gamma(z) * Gamma(conj z), via 2 Re ln_gamma."""
    return math.exp(2.0 * ln_gamma(complex(z)).real)


def pochhammer(a, k: int) -> complex:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1), (a)_0 = 1."""
    if k < 0:
        raise ValueError("pochhammer order must be non-negative")
    out = complex(1.0)
    a = complex(a)
    for i in range(k):
        out *= a + i
    return out


def _series_2f1(a, b, c, x, max_terms=MAX_TERMS):
    """Gauss series with numpy broadcasting over a, b, x (c scalar).

    Assumes |x| < 1 elementwise or a terminating numerator parameter.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    shape = np.broadcast_shapes(a.shape, b.shape, x.shape)
    term = np.ones(shape, dtype=np.complex128)
    total = np.ones(shape, dtype=np.complex128)
    for k in range(max_terms):
        ck = c + k
        if _is_nonpos_int_scalar(complex(ck)):
            raise GammaPoleError(f"2F1 denominator parameter hit a pole: c = {c}")
        term = term * ((a + k) * (b + k) * x) / (ck * (k + 1))
        total = total + term
        if np.all(np.abs(term) <= SERIES_TOL * np.maximum(np.abs(total), 1e-300)):
            return total
    raise NonConvergenceError(
        f"2F1 series did not converge within {max_terms} terms"
    )


def _connection_coeff(num, den):
    """exp(sum ln_gamma(num) - sum ln_gamma(den)); zero if a denominator
    gamma sits on a pole, error if a numerator gamma does."""
    acc = complex(0.0)
    for g in num:
        acc += ln_gamma(complex(g))
    for g in den:
        if _is_nonpos_int_scalar(complex(g)):
            return complex(0.0)
        acc -= ln_gamma(complex(g))
    return cmath.exp(acc)


def _2f1_near_one(a, b, c, x):
    """Connection formula at 1-x for scalar parameters, x in (0.75, 1)."""
    cab = c - a - b
    if (
        abs(complex(cab).imag) <= INT_SNAP
        and abs(complex(cab).real - round(complex(cab).real)) <= INT_SNAP
    ):
        raise NonConvergenceError(
            "2F1 connection formula degenerate: c-a-b is an integer"
        )
    y = 1.0 - x
    coef1 = _connection_coeff([c, cab], [c - a, c - b])
    coef2 = _connection_coeff([c, -cab], [a, b])
    f1 = _series_2f1(a, b, a + b - c + 1.0, y) if coef1 != 0 else 0.0
    f2 = _series_2f1(c - a, c - b, cab + 1.0, y) if coef2 != 0 else 0.0
    return coef1 * f1 + np.exp(cab * np.log(y)) * coef2 * f2


def _2f1_unit_interval(a, b, c, x):
    # scalar path, x in [0, 1)
    if x <= 0.75:
        return complex(_series_2f1(a, b, c, x))
    return complex(_2f1_near_one(a, b, c, x))


def hyp2f1(a, b, c, x: float) -> complex:
    """Gauss hypergeometric 2F1(a, b; c; x) for complex parameters and real x.

    Preconditions: a terminating numerator parameter, or x < 1.
    """
    a, b, c = complex(a), complex(b), complex(c)
    x = float(x)
    ma, mb = snap_nonpos_int(a), snap_nonpos_int(b)
    if ma is not None or mb is not None:
        if ma is not None and (mb is None or ma >= mb):
            m, aa, bb = -ma, float(ma), b
        else:
            m, aa, bb = -mb, float(mb), a
        term = complex(1.0)
        total = complex(1.0)
        for k in range(m):
            ck = c + k
            if _is_nonpos_int_scalar(ck):
                raise GammaPoleError(
                    f"2F1 denominator parameter hit a pole: c = {c}"
                )
            term *= (aa + k) * (bb + k) * x / (ck * (k + 1))
            total += term
        return total
    if x >= 1.0:
        raise NonConvergenceError(
            "non-terminating 2F1 requires x < 1 (got x = %g)" % x
        )
    if x < 0.0:
        # Pfaff: F(a,b;c;x) = (1-x)^(-a) F(a, c-b; c; x/(x-1))
        u = x / (x - 1.0)
        pref = cmath.exp(-a * math.log(1.0 - x))
        return pref * _2f1_unit_interval(a, c - b, c, u)
    return _2f1_unit_interval(a, b, c, x)


def hyp3f2_terminating(q: int, a, b, d, e) -> complex:
    """3F2(-q, a, b; d, e; 1) as the exact finite sum of q+1 terms."""
    if q < 0:
        raise ValueError("q must be a non-negative integer")
    a, b, d, e = complex(a), complex(b), complex(d), complex(e)
    term = complex(1.0)
    total = complex(1.0)
    for k in range(q):
        dk, ek = d + k, e + k
        if _is_nonpos_int_scalar(dk) or _is_nonpos_int_scalar(ek):
            raise GammaPoleError(
                f"3F2 denominator parameter pole within range: d={d}, e={e}"
            )
        term *= (-q + k) * (a + k) * (b + k) / (dk * ek * (k + 1))
        total += term
    return total


def hyp3f2_unit(a, b, c, d, e, rel_tol: float = 1e-12) -> complex:
    """Non-terminating 3F2(a, b, c; d, e; 1).

    The series converges when Re(d+e-a-b-c) > 0; term decay is algebraic of
    that order, so the stopping rule is looser than for the Gauss series.
    """
    s = complex(d) + complex(e) - complex(a) - complex(b) - complex(c)
    if s.real <= 0.05:
        raise NonConvergenceError(
            "3F2 at unit argument requires Re(d+e-a-b-c) > 0"
        )
    a, b, c, d, e = (complex(v) for v in (a, b, c, d, e))
    term = complex(1.0)
    total = complex(1.0)
    for k in range(MAX_TERMS):
        dk, ek = d + k, e + k
        if _is_nonpos_int_scalar(dk) or _is_nonpos_int_scalar(ek):
            raise GammaPoleError("3F2 denominator parameter pole")
        term *= (a + k) * (b + k) * (c + k) / (dk * ek * (k + 1))
        total += term
        if abs(term) <= rel_tol * abs(total):
            return total
    raise NonConvergenceError("3F2 unit-argument series hit the term cap")


def jacobi_polynomial(k: int, alpha: float, beta: float, y: float) -> float:
    """Jacobi polynomial P_k^(alpha,beta)(y) via its terminating 2F1 form."""
    if k < 0:
        raise ValueError("degree must be non-negative")
    pref = pochhammer(1.0 + alpha, k).real / math.factorial(k)
    val = hyp2f1(-k, alpha + beta + k + 1.0, alpha + 1.0, (1.0 - y) / 2.0)
    return pref * val.real


def _canonical_lambda(lam: complex) -> complex:
    lam = complex(lam)
    if lam.real < 0.0 or (lam.real == 0.0 and lam.imag < 0.0):
        return -lam
    return lam


def jacobi_function(lam, alpha: float, beta: float, t: float) -> complex:
    """Jacobi function phi_lam^(alpha,beta)(t)
    = 2F1((alpha+beta+1-i lam)/2, (alpha+beta+1+i lam)/2; 1+alpha; -sinh^2 t).

    Even in lam by construction (lam is canonicalized before use), and
    phi(0) = 1.
    """
    if t < 0:
        raise ValueError("t must be non-negative")
    lam = _canonical_lambda(lam)
    rho = alpha + beta + 1.0
    a = (rho - 1j * lam) / 2.0
    b = (rho + 1j * lam) / 2.0
    sh2 = math.sinh(t) ** 2
    return hyp2f1(a, b, 1.0 + alpha, -sh2)


def _2f1_unit_interval_vec(a, b, c, x: np.ndarray) -> np.ndarray:
    """Vectorized 2F1 over an array x in [0, 1); a, b broadcastable, c scalar."""
    x = np.asarray(x, dtype=np.float64)
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    shape = np.broadcast_shapes(a.shape, b.shape, x.shape)
    a, b, x = (np.broadcast_to(v, shape) for v in (a, b, x))
    out = np.empty(shape, dtype=np.complex128)
    small = x <= 0.75
    if np.any(small):
        out[small] = _series_2f1(a[small], b[small], c, x[small])
    if np.any(~small):
        aa, bb, xx = a[~small], b[~small], x[~small]
        cab = c - aa - bb
        y = 1.0 - xx
        lg = ln_gamma
        coef1 = np.exp(lg(np.full_like(aa, c)) + lg(cab) - lg(c - aa) - lg(c - bb))
        coef2 = np.exp(lg(np.full_like(aa, c)) + lg(-cab) - lg(aa) - lg(bb))
        # the induced denominator parameters vary with a, b
        f1 = _series_2f1_carray(aa, bb, aa + bb - c + 1.0, y)
        f2 = _series_2f1_carray(c - aa, c - bb, cab + 1.0, y)
        out[~small] = coef1 * f1 + np.exp(cab * np.log(y)) * coef2 * f2
    return out


def _series_2f1_carray(a, b, c, x, max_terms=MAX_TERMS):
    """Gauss series where the denominator parameter c is also an array."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    c = np.asarray(c, dtype=np.complex128)
    x = np.asarray(x, dtype=np.complex128)
    shape = np.broadcast_shapes(a.shape, b.shape, c.shape, x.shape)
    term = np.ones(shape, dtype=np.complex128)
    total = np.ones(shape, dtype=np.complex128)
    for k in range(max_terms):
        term = term * ((a + k) * (b + k) * x) / ((c + k) * (k + 1))
        total = total + term
        if np.all(np.abs(term) <= SERIES_TOL * np.maximum(np.abs(total), 1e-300)):
            return total
    raise NonConvergenceError("vectorized 2F1 series hit the term cap")


def jacobi_function_grid(lam, alpha: float, beta: float, ts) -> np.ndarray:
    """phi_lam^(alpha,beta) evaluated on an array of radii t >= 0.

    Either lam is a scalar and ts an array, or lam an array and ts a scalar;
    broadcasting follows numpy rules.  Used by the transform engines.
    """
    lam = np.asarray(_canonical_lambda(lam) if np.isscalar(lam) else lam)
    if lam.ndim > 0:
        flip = (lam.real < 0) | ((lam.real == 0) & (lam.imag < 0))
        lam = np.where(flip, -lam, lam)
    ts = np.asarray(ts, dtype=np.float64)
    rho = alpha + beta + 1.0
    a = (rho - 1j * lam) / 2.0
    b = (rho + 1j * lam) / 2.0
    c = 1.0 + alpha
    sh2 = np.sinh(ts) ** 2
    # Pfaff onto [0, 1): argument tanh^2 t, prefactor cosh^(-2a) t.  The
    # argument is kept strictly below 1 (it rounds to 1 for t >~ 19).
    u = np.where(sh2 > 0, sh2 / (1.0 + sh2), 0.0)
    u = np.minimum(u, 1.0 - 1e-16)
    pref = np.exp(-np.asarray(a, dtype=np.complex128) * np.log1p(sh2))
    return pref * _2f1_unit_interval_vec(a, c - b, c, u)


def dual_hahn(q: int, x_sq: float, a: float, b: float, c: float) -> float:
    """Continuous dual Hahn polynomial S_q(x^2; a, b, c)
    = (a+b)_q (a+c)_q 3F2(-q, a+ix, a-ix; a+b, a+c; 1).

    Real for real x^2 (of either sign); raises if the imaginary residue of
    the assembled complex sum exceeds 1e-13 relative.
    """
    if q < 0:
        raise ValueError("q must be a non-negative integer")
    x = cmath.sqrt(complex(x_sq))
    val = (
        pochhammer(a + b, q)
        * pochhammer(a + c, q)
        * hyp3f2_terminating(q, a + 1j * x, a - 1j * x, a + b, a + c)
    )
    if abs(val.imag) > 1e-13 * max(abs(val), 1.0):
        raise ValueError(
            f"dual Hahn value has non-negligible imaginary residue: {val}"
        )
    return val.real
