"""The complex unit ball model: points, parameters, the Bergman hyperbolic
distance, the weighted measure, and the SU(n,1) Moebius action used for
invariance testing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Parameters",
    "BallPoint",
    "BoundaryPoint",
    "GroupElement",
    "MobiusDenominatorError",
    "inner",
    "hyperbolic_distance",
    "measure_weight",
    "mobius_apply",
    "make_transvection",
    "make_rotation",
    "identity_element",
    "ball_point_from_json",
    "boundary_point_from_json",
    "group_element_from_json",
]

BOUNDARY_MARGIN = 1e-14
FORM_TOL = 1e-12


class MobiusDenominatorError(ValueError):
    """The Moebius cocycle factor cz + d degenerated (invalid group element)."""


@dataclass(frozen=True)
class Parameters:
    """The triple (n, nu, l): complex dimension, measure weight, eigenspace index.

    Validity: nu > n, nu not an integer, 0 <= l and 2l < nu - n.
    """

    n: int
    nu: float
    l: int

    def __post_init__(self):
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError("n must be a positive integer")
        if not (isinstance(self.l, int) and self.l >= 0):
            raise ValueError("l must be a non-negative integer")
        if not self.nu > self.n:
            raise ValueError(f"nu must exceed n (got nu={self.nu}, n={self.n})")
        if abs(self.nu - round(self.nu)) <= 1e-9:
            raise ValueError("nu must not be an integer")
        if not 2 * self.l < self.nu - self.n:
            raise ValueError(
                f"l out of range: need 2l < nu - n (got l={self.l}, nu-n={self.nu - self.n})"
            )

    @property
    def discrete_count(self) -> int:
        """Number of admissible indices j with 2j < nu - n."""
        return int(math.floor((self.nu - self.n) / 2.0)) + 1

    def discrete_indices(self) -> range:
        return range(self.discrete_count)


def _as_complex_vector(coords) -> np.ndarray:
    arr = np.atleast_1d(np.asarray(coords, dtype=np.complex128))
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("coordinates must form a non-empty 1-d complex vector")
    if not np.all(np.isfinite(arr.view(np.float64))):
        raise ValueError("coordinates must be finite")
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A point of the open unit ball of C^n, |z| < 1 strictly."""

    coords: np.ndarray = field()

    def __post_init__(self):
        arr = _as_complex_vector(self.coords)
        object.__setattr__(self, "coords", arr)
        if self.norm() >= 1.0 - BOUNDARY_MARGIN:
            raise ValueError(
                f"point too close to the boundary: |z| = {self.norm():.17g}"
            )

    @property
    def dim(self) -> int:
        return self.coords.size

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.coords) ** 2))

    def norm(self) -> float:
        return math.sqrt(self.norm_sq())


@dataclass(frozen=True, eq=False)
class BoundaryPoint:
    """A point of the unit sphere bounding the ball, | |w| - 1 | <= 1e-14."""

    coords: np.ndarray = field()

    def __post_init__(self):
        arr = _as_complex_vector(self.coords)
        object.__setattr__(self, "coords", arr)
        nrm = math.sqrt(float(np.sum(np.abs(arr) ** 2)))
        if abs(nrm - 1.0) > BOUNDARY_MARGIN:
            raise ValueError(f"not a boundary point: |w| = {nrm:.17g}")

    @property
    def dim(self) -> int:
        return self.coords.size


@dataclass(frozen=True, eq=False)
class GroupElement:
    """Block matrix (a b; c d) preserving sum |z_j|^2 - |z_(n+1)|^2, det = 1."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: complex

    def __post_init__(self):
        a = np.asarray(self.a, dtype=np.complex128)
        n = a.shape[0]
        if a.shape != (n, n):
            raise ValueError("block a must be square")
        b = np.asarray(self.b, dtype=np.complex128).reshape(n)
        c = np.asarray(self.c, dtype=np.complex128).reshape(n)
        d = complex(self.d)
        for arr in (a, b, c):
            arr.flags.writeable = False
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "d", d)
        g = self.matrix
        J = np.diag(np.concatenate([np.ones(n), [-1.0]])).astype(np.complex128)
        defect = np.max(np.abs(g.conj().T @ J @ g - J))
        if defect > FORM_TOL:
            raise ValueError(f"indefinite form not preserved: defect {defect:.3g}")
        det = np.linalg.det(g)
        if abs(det - 1.0) > FORM_TOL:
            raise ValueError(f"determinant must be 1, got {det}")

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        n = self.a.shape[0]
        g = np.zeros((n + 1, n + 1), dtype=np.complex128)
        g[:n, :n] = self.a
        g[:n, n] = self.b
        g[n, :n] = self.c
        g[n, n] = self.d
        return g

    def compose(self, other: "GroupElement") -> "GroupElement":
        m = self.matrix @ other.matrix
        n = self.n
        return GroupElement(m[:n, :n], m[:n, n], m[n, :n], m[n, n])


def inner(z, w) -> complex:
    """Hermitian product <z, w> = sum z_j conj(w_j)."""
    zc = z.coords if hasattr(z, "coords") else np.asarray(z, dtype=np.complex128)
    wc = w.coords if hasattr(w, "coords") else np.asarray(w, dtype=np.complex128)
    if zc.shape != wc.shape:
        raise ValueError(f"dimension mismatch: {zc.shape} vs {wc.shape}")
    return complex(np.sum(zc * np.conj(wc)))


def hyperbolic_distance(z: BallPoint, w: BallPoint) -> float:
    """Bergman-metric invariant distance:
    cosh^2 d = |1 - <z,w>|^2 / ((1 - |z|^2)(1 - |w|^2)).
    """
    num = abs(1.0 - inner(z, w)) ** 2
    den = (1.0 - z.norm_sq()) * (1.0 - w.norm_sq())
    ratio = num / den
    if ratio < 1.0:
        ratio = 1.0  # rounding guard for z ~ w
    return math.acosh(math.sqrt(ratio))


def measure_weight(z: BallPoint, p: Parameters) -> float:
    """Density (1 - |z|^2)^(nu - n - 1) of the weighted volume measure."""
    return (1.0 - z.norm_sq()) ** (p.nu - p.n - 1.0)


def mobius_apply(g: GroupElement, z):
    """Apply g.z = (az + b) / (cz + d); returns (image, denominator).

    The denominator cz + d is the cocycle factor.  Ball points map to ball
    points, boundary points to boundary points.
    """
    zc = z.coords
    den = complex(np.dot(g.c, zc) + g.d)
    if abs(den) < 1e-13:
        raise MobiusDenominatorError("cz + d ~ 0; group element invalid here")
    img = (g.a @ zc + g.b) / den
    cls = BoundaryPoint if isinstance(z, BoundaryPoint) else BallPoint
    return cls(img), den


def identity_element(n: int) -> GroupElement:
    return GroupElement(np.eye(n), np.zeros(n), np.zeros(n), 1.0)


def make_transvection(axis, s: float) -> GroupElement:
    """Hyperbolic motion moving 0 along the geodesic through `axis` by tanh s.

    Blocks: a = I + (cosh s - 1) u u*, b = sinh s u, c = sinh s u*, d = cosh s
    for the unit vector u = axis.
    """
    u = np.asarray(axis, dtype=np.complex128).reshape(-1)
    nrm = math.sqrt(float(np.sum(np.abs(u) ** 2)))
    if abs(nrm - 1.0) > FORM_TOL:
        raise ValueError("axis must be a unit vector")
    n = u.size
    a = np.eye(n, dtype=np.complex128) + (math.cosh(s) - 1.0) * np.outer(u, u.conj())
    b = math.sinh(s) * u
    c = math.sinh(s) * u.conj()
    return GroupElement(a, b, c, math.cosh(s))


def make_rotation(u) -> GroupElement:
    """Embed a unitary u in U(n) as the rotation diag(u, 1/det u)."""
    u = np.asarray(u, dtype=np.complex128)
    n = u.shape[0]
    if u.shape != (n, n):
        raise ValueError("u must be square")
    defect = np.max(np.abs(u.conj().T @ u - np.eye(n)))
    if defect > FORM_TOL:
        raise ValueError(f"u not unitary: defect {defect:.3g}")
    d = 1.0 / np.linalg.det(u)
    return GroupElement(u, np.zeros(n), np.zeros(n), d)


def _pairs_to_complex(pairs) -> np.ndarray:
    arr = np.asarray(pairs, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("expected a JSON array of [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def ball_point_from_json(text: str) -> BallPoint:
    """Parse a ball point from a JSON array of [re, im] pairs."""
    return BallPoint(_pairs_to_complex(json.loads(text)))


def boundary_point_from_json(text: str) -> BoundaryPoint:
    return BoundaryPoint(_pairs_to_complex(json.loads(text)))


def group_element_from_json(text: str) -> GroupElement:
    """Parse a group element from a JSON (n+1)x(n+1) matrix of [re, im] pairs."""
    rows = json.loads(text)
    m = np.array([_pairs_to_complex(row) for row in rows])
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
        raise ValueError("expected a square matrix of [re, im] pairs")
    n = m.shape[0] - 1
    return GroupElement(m[:n, :n], m[:n, n], m[n, :n], m[n, n])
