"""2x2 real matrices, the Moebius action on the upper half-plane, and Haar
integration on SL(2, R) in Iwasawa coordinates.

Matrix entries may be numpy arrays of a common shape, in which case every
operation acts elementwise on a batch of matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geometry import UhpPoint, as_complex

DET_TOL = 1e-12
ORTHO_TOL = 1e-12

TWO_PI = 2.0 * np.pi


class GroupError(ValueError):
    """Raised for matrices outside the group an operation requires."""


@dataclass(frozen=True, eq=False)
class Mat2:
    """Real 2x2 matrix [[a, b], [c, d]] (entries may be batched arrays)."""

    a: float | np.ndarray
    b: float | np.ndarray
    c: float | np.ndarray
    d: float | np.ndarray

    def __post_init__(self):
        for name in "abcd":
            if not np.all(np.isfinite(getattr(self, name))):
                raise GroupError(f"non-finite matrix entry {name}")

    @classmethod
    def from_array(cls, m) -> "Mat2":
        m = np.asarray(m, dtype=float)
        return cls(m[..., 0, 0], m[..., 0, 1], m[..., 1, 0], m[..., 1, 1])

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(1.0, 0.0, 0.0, 1.0)

    def to_array(self) -> np.ndarray:
        a, b, c, d = np.broadcast_arrays(self.a, self.b, self.c, self.d)
        return np.stack([np.stack([a, b], -1), np.stack([c, d], -1)], -2)

    def det(self):
        return self.a * self.d - self.b * self.c

    def trace(self):
        return self.a + self.d

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> "Mat2":
        det = self.det()
        if np.any(det == 0):
            raise GroupError("singular matrix")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __matmul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def allclose(self, other: "Mat2", atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_array(), other.to_array(), rtol=0, atol=atol))

    def __repr__(self):
        return f"{type(self).__name__}(a={self.a!r}, b={self.b!r}, c={self.c!r}, d={self.d!r})"


class SL2Element(Mat2):
    """Element of SL(2, R); the determinant is checked, never renormalized."""

    def __post_init__(self):
        super().__post_init__()
        err = np.max(np.abs(self.det() - 1.0))
        if err > DET_TOL:
            raise GroupError(f"det differs from 1 by {err:.3e}")

    @classmethod
    def of(cls, m: Mat2) -> "SL2Element":
        return cls(m.a, m.b, m.c, m.d)

    def inverse(self) -> "SL2Element":
        return SL2Element(self.d, -self.b, -self.c, self.a)


def mobius_apply(g: Mat2, z):
    """Act on points of the upper half-plane by z -> (az + b)/(cz + d).

    Only orientation-preserving matrices (det > 0) are accepted; reflections
    enter solely through :func:`conjugate_action`.

    Returns the same kind of object that was passed: a ``UhpPoint`` for a
    ``UhpPoint``, otherwise a complex scalar or array.
    """
    if np.any(g.det() <= 0):
        raise GroupError("Moebius action needs det > 0")
    w = as_complex(z)
    den = g.c * w + g.d
    if np.any(den == 0):
        raise GroupError("cz + d vanished; point is not in the upper half-plane")
    out = (g.a * w + g.b) / den
    return UhpPoint.from_complex(out) if isinstance(z, UhpPoint) else out


def x_of_z(z) -> SL2Element:
    """The section x(z) = Im(z)^(-1/2) [[Im z, Re z], [0, 1]], with x(z).i = z."""
    w = as_complex(z)
    y = np.imag(w)
    if np.any(y <= 0):
        raise GroupError("point must lie in the upper half-plane")
    s = np.sqrt(y)
    return SL2Element(s, np.real(w) / s, np.zeros_like(s), 1.0 / s)


def rotation_k(theta) -> SL2Element:
    c, s = np.cos(theta), np.sin(theta)
    return SL2Element(c, -s, s, c)


def reflection_v(theta) -> Mat2:
    """Reflection across the line at angle theta/2; det = -1 and v^-1 = v."""
    c, s = np.cos(theta), np.sin(theta)
    return Mat2(c, s, s, -c)


def n_of(x) -> SL2Element:
    x = np.asarray(x, dtype=float)
    return SL2Element(np.ones_like(x), x, np.zeros_like(x), np.ones_like(x))


def a_of(y) -> SL2Element:
    s = np.sqrt(np.asarray(y, dtype=float))
    return SL2Element(s, np.zeros_like(s), np.zeros_like(s), 1.0 / s)


def _check_orthogonal(u: Mat2):
    utu = u.transpose() @ u
    err = np.max(np.abs(utu.to_array() - np.eye(2)))
    if err > ORTHO_TOL:
        raise GroupError(f"matrix is not orthogonal (|u^T u - I| = {err:.3e})")


def conjugate_action(u: Mat2, z):
    """Image of z under the automorphism x -> u^-1 x u of SL(2, R), read on
    the quotient: returns (u^-1 x(z) u) . i for orthogonal u.

    For u = k(theta) this is k(-theta) . z. For a reflection u = v(theta) the
    conjugated matrix still has det 1 and the result is the mirror image
    -conj(k(-theta) . z) across the imaginary axis.
    """
    _check_orthogonal(u)
    m = u.inverse() @ x_of_z(z) @ u
    out = mobius_apply(m, 1j * np.ones_like(as_complex(z)))
    return UhpPoint.from_complex(out) if isinstance(z, UhpPoint) else out


def rotate_about_i(theta, z):
    """Closed form of k(-theta) . z = (z cos t + sin t)/(-z sin t + cos t)."""
    c, s = np.cos(theta), np.sin(theta)
    return (z * c + s) / (-z * s + c)


@dataclass(frozen=True)
class IwasawaCoords:
    """g = n(x) a(y) k(theta) with n(x) unipotent and a(y) = diag(sqrt y, 1/sqrt y)."""

    x: float | np.ndarray
    y: float | np.ndarray
    theta: float | np.ndarray

    def reconstruct(self) -> SL2Element:
        return SL2Element.of(n_of(self.x) @ a_of(self.y) @ rotation_k(self.theta))


def iwasawa_decompose(g: Mat2) -> IwasawaCoords:
    g = SL2Element.of(g)
    z = mobius_apply(g, 1j)
    k = x_of_z(z).inverse() @ g
    theta = np.mod(np.arctan2(k.c, k.a), TWO_PI)
    return IwasawaCoords(np.real(z), np.imag(z), theta)


@dataclass(frozen=True)
class HaarGrid:
    """Tensor-product midpoint grid on the Iwasawa box
    [x0, x1] x [y0, y1] x [0, 2 pi), with log-spaced y nodes."""

    x_range: tuple[float, float] = (-8.0, 8.0)
    y_range: tuple[float, float] = (float(np.exp(-4.0)), float(np.exp(4.0)))
    nodes: tuple[int, int, int] = (128, 128, 128)

    def __post_init__(self):
        if self.y_range[0] <= 0 or self.y_range[1] <= self.y_range[0]:
            raise GroupError("y range must lie strictly above y = 0")
        if self.x_range[1] <= self.x_range[0]:
            raise GroupError("empty x range")
        if min(self.nodes) < 1:
            raise GroupError("node counts must be positive")

    def axes(self):
        nx, ny, nt = self.nodes
        hx = (self.x_range[1] - self.x_range[0]) / nx
        x = self.x_range[0] + hx * (np.arange(nx) + 0.5)
        lo, hi = np.log(self.y_range[0]), np.log(self.y_range[1])
        hu = (hi - lo) / ny
        y = np.exp(lo + hu * (np.arange(ny) + 0.5))
        ht = TWO_PI / nt
        theta = ht * (np.arange(nt) + 0.5)
        return (x, hx), (y, hu), (theta, ht)


def haar_integrate(F: Callable[[SL2Element], np.ndarray], grid: HaarGrid = HaarGrid()) -> float:
    """Integrate F over SL(2, R) against dx dy dtheta / (2 pi y^2).

    With this normalization K = SO(2) has mass 1 and the group integral of a
    right-K-invariant function equals the dx dy / y^2 integral of its
    projection to the half-plane. F receives a batched ``SL2Element`` (one
    x-slice of the grid at a time) and must return values of matching shape.
    """
    (x, hx), (y, hu), (theta, ht) = grid.axes()
    Y, T = np.meshgrid(y, theta, indexing="ij")
    # dy / y^2 = du / y for u = log y
    weight = (hx * hu * ht / TWO_PI) / Y
    ay = a_of(Y) @ rotation_k(T)
    total = 0.0
    for xi in x:
        g = SL2Element.of(n_of(np.full_like(Y, xi)) @ ay)
        total += float(np.sum(np.asarray(F(g)) * weight))
    return total


def conjugate_by(u: Mat2) -> Callable[[Mat2], Mat2]:
    """The automorphism A(u): g -> u^-1 g u."""
    u_inv = u.inverse()
    return lambda g: u_inv @ g @ u


def check_unimodular(F, u: Mat2, grid: HaarGrid = HaarGrid()) -> tuple[float, float]:
    """Return (integral of F, integral of F o A(u)) for A(u)(g) = u^-1 g u.

    Agreement of the pair witnesses mod A(u) = 1.
    """
    _check_orthogonal(u)
    A = conjugate_by(u)
    plain = haar_integrate(F, grid)
    moved = haar_integrate(lambda g: F(SL2Element.of(A(g))), grid)
    return plain, moved


def weil_sides(F, center, radius: float, haar_nodes=(128, 128, 128),
               polar_nodes=(256, 256), k_nodes: int = 64) -> tuple[float, float]:
    """Both sides of the disintegration over G -> G/K for F supported over
    the ball B(center, radius) of the half-plane.

    Left: ``haar_integrate`` on the Iwasawa box around the ball. Right: the
    K-average z -> int F(x(z) k(t)) dt / 2 pi integrated over the ball in
    geodesic polar coordinates.
    """
    from .geometry import HypBall, ball_bounding_rect, polar_integrate

    x0, x1, y0, y1 = ball_bounding_rect(HypBall(center, radius))
    grid = HaarGrid((x0, x1), (y0, y1), haar_nodes)
    group = haar_integrate(F, grid)
    theta = TWO_PI * (np.arange(k_nodes) + 0.5) / k_nodes

    def averaged(z):
        xz = x_of_z(z[..., None])
        return np.mean(np.asarray(F(SL2Element.of(xz @ rotation_k(theta)))), axis=-1)

    quotient = float(np.real(polar_integrate(averaged, center, radius, polar_nodes)))
    return group, quotient


def weil_check(f, haar_nodes=(128, 128, 4), polar_nodes=(256, 256)) -> tuple[float, float]:
    """Group integral of the right-K-invariant lift g -> f(g . i) against the
    half-plane integral of f. ``f`` needs a compact support descriptor."""
    sup = f.support
    F = lambda g: f(mobius_apply(g, 1j))
    return weil_sides(F, sup.center, sup.radius, haar_nodes, polar_nodes, k_nodes=1)


def gaussian_bumps(rng: np.random.Generator, n: int, width: float = 0.5):
    """Smooth, rapidly decaying functions F(g) = exp(-|g - g0|_F^2 / width) on
    SL(2, R) with random centers g0; not right-K-invariant."""
    out = []
    for _ in range(n):
        z0 = complex(rng.uniform(-0.5, 0.5), np.exp(rng.uniform(-0.4, 0.4)))
        g0 = SL2Element.of(x_of_z(z0) @ rotation_k(rng.uniform(0, TWO_PI)))

        def F(g, g0=g0):
            d = (g.a - g0.a) ** 2 + (g.b - g0.b) ** 2 + (g.c - g0.c) ** 2 + (g.d - g0.d) ** 2
            return np.exp(-d / width)

        out.append(F)
    return out
