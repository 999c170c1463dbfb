"""Poincare upper half-plane: distance, invariant area, balls, doubling
ratios and the approximate midpoint construction.

Points are handled as complex numbers (scalars or arrays) throughout; the
``UhpPoint`` wrapper exists for validated single points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

TWO_PI = 2.0 * np.pi


class GeometryError(ValueError):
    """Raised for inputs outside the half-plane model or a violated precondition."""


@dataclass(frozen=True)
class UhpPoint:
    re: float
    im: float

    def __post_init__(self):
        object.__setattr__(self, "re", float(self.re))
        object.__setattr__(self, "im", float(self.im))
        if not (np.isfinite(self.re) and np.isfinite(self.im)):
            raise GeometryError("point coordinates must be finite")
        if self.im <= 0:
            raise GeometryError(f"Im must be > 0, got {self.im}")

    @classmethod
    def from_complex(cls, z) -> "UhpPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    def __complex__(self):
        return complex(self.re, self.im)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)


I = UhpPoint(0.0, 1.0)


def as_complex(z):
    """Complex view of a point or array of points."""
    if isinstance(z, UhpPoint):
        return z.z
    return np.asarray(z, dtype=complex) if np.ndim(z) else complex(z)


@dataclass(frozen=True)
class HypBall:
    center: UhpPoint
    radius: float

    def __post_init__(self):
        if not isinstance(self.center, UhpPoint):
            object.__setattr__(self, "center", UhpPoint.from_complex(self.center))
        if not self.radius > 0:
            raise GeometryError(f"ball radius must be > 0, got {self.radius}")

    def contains(self, z, slack: float = 0.0):
        return hyp_distance(self.center, z) <= self.radius + slack

    def area(self) -> float:
        return ball_area(self)


@dataclass(frozen=True)
class GeometryAssumptions:
    """Constants of the local doubling / approximate midpoint setting.

    ``beta_amp`` is the midpoint-ball factor, not the measure on K.
    """

    b: float = 4.0
    R0: float = 0.0
    beta_amp: float = 0.75
    tau: float = 2.0

    def __post_init__(self):
        if not 0 <= self.R0 < 1:
            raise GeometryError("R0 must lie in [0, 1)")
        if not 0.5 < self.beta_amp < 1:
            raise GeometryError("beta_amp must lie in (1/2, 1)")
        if self.tau < 2:
            raise GeometryError("tau must be >= 2")
        if not self.b > self.R0 / (1 - self.beta_amp):
            raise GeometryError("need b > R0 / (1 - beta_amp)")


def cosh_distance(z, w):
    """cosh of the hyperbolic distance; cheaper than the distance itself."""
    z, w = as_complex(z), as_complex(w)
    return 1.0 + np.abs(z - w) ** 2 / (2.0 * np.imag(z) * np.imag(w))


def hyp_distance(z, w):
    """rho(z, w) = arccosh(1 + |z - w|^2 / (2 Im z Im w)).

    Written through arcsinh of the half-chord so that nearby points do not
    lose precision to the arccosh near 1.
    """
    z, w = as_complex(z), as_complex(w)
    half = np.abs(z - w) / (2.0 * np.sqrt(np.imag(z) * np.imag(w)))
    return 2.0 * np.arcsinh(half)


# -- quadrature on rectangles -------------------------------------------------


@dataclass(frozen=True)
class QuadConfig:
    """Midpoint rule on [x0, x1] x [y0, y1], uniform in x and in log y."""

    rect: tuple[float, float, float, float]
    nodes: tuple[int, int] = (512, 512)

    def __post_init__(self):
        x0, x1, y0, y1 = self.rect
        if not y0 > 0:
            raise GeometryError("quadrature rectangle must stay strictly above y = 0")
        if not (x1 > x0 and y1 > y0):
            raise GeometryError("empty quadrature rectangle")
        if min(self.nodes) < 1:
            raise GeometryError("node counts must be positive")

    def grid(self):
        """Return (Z, W): complex nodes and their dx dy / y^2 weights."""
        x0, x1, y0, y1 = self.rect
        nx, ny = self.nodes
        hx = (x1 - x0) / nx
        lo, hi = np.log(y0), np.log(y1)
        hu = (hi - lo) / ny
        x = x0 + hx * (np.arange(nx) + 0.5)
        y = np.exp(lo + hu * (np.arange(ny) + 0.5))
        X, Y = np.meshgrid(x, y, indexing="ij")
        return X + 1j * Y, (hx * hu) / Y

    def contains_rect(self, other: tuple[float, float, float, float]) -> bool:
        x0, x1, y0, y1 = self.rect
        a0, a1, b0, b1 = other
        return x0 <= a0 and a1 <= x1 and y0 <= b0 and b1 <= y1


def ball_bounding_rect(ball: HypBall, margin: float = 0.0):
    """Euclidean bounding box of B(center, radius + margin)."""
    R = ball.radius + margin
    x0, y0 = ball.center.re, ball.center.im
    w = y0 * np.sinh(R)
    return (x0 - w, x0 + w, y0 * np.exp(-R), y0 * np.exp(R))


def hyp_integrate(f: Callable, cfg: QuadConfig) -> complex | float:
    """Integrate a vectorized f(z) against dx dy / y^2 over the config rectangle."""
    Z, W = cfg.grid()
    return np.sum(np.asarray(f(Z)) * W)


def hyp_area(indicator: Callable, cfg: QuadConfig) -> float:
    """Hyperbolic area of {indicator != 0} by the midpoint rule."""
    return float(hyp_integrate(lambda z: np.asarray(indicator(z), dtype=float), cfg))


def _sample_rect(rng, rect, n):
    # x uniform, y drawn from the normalized dy / y^2 density on [y0, y1]
    x0, x1, y0, y1 = rect
    x = rng.uniform(x0, x1, n)
    y = 1.0 / rng.uniform(1.0 / y1, 1.0 / y0, n)
    return x + 1j * y


def hyp_area_mc(indicator: Callable, rect, n: int = 10_000_000, seed: int = 0,
                chunk: int = 1_000_000) -> tuple[float, float]:
    """Hit-or-miss Monte Carlo area with its standard error.

    Points are drawn from the invariant measure restricted to ``rect`` and
    accepted when the indicator is nonzero.
    """
    x0, x1, y0, y1 = rect
    if not y0 > 0:
        raise GeometryError("sampling rectangle must stay strictly above y = 0")
    rng = np.random.default_rng(seed)
    box = (x1 - x0) * (1.0 / y0 - 1.0 / y1)
    hits = 0
    done = 0
    while done < n:
        m = min(chunk, n - done)
        hits += int(np.count_nonzero(indicator(_sample_rect(rng, rect, m))))
        done += m
    frac = hits / n
    return box * frac, box * np.sqrt(frac * (1.0 - frac) / n)


def shear_box_of_ball(ball: HypBall) -> tuple[float, float, float, float]:
    """Box (t0, t1, u0, u1) in shear coordinates about the ball's center that
    contains the ball.

    With z = x0 + y0 (t + i) e^u the invariant measure is exactly dt du, and
    the ball is {t^2 e^u / 2 + cosh u <= cosh r}.
    """
    r = ball.radius
    u = np.linspace(-r, r, 200_001)
    t_max = np.sqrt(np.max(2.0 * (np.cosh(r) - np.cosh(u)) * np.exp(-u)))
    t_max *= 1.01
    return (-t_max, t_max, -r, r)


def hyp_ball_area_mc(ball: HypBall, n: int = 10_000_000, seed: int = 0,
                     chunk: int = 1_000_000) -> tuple[float, float]:
    """Monte Carlo area of a ball with its standard error: uniform samples in
    the shear box, accepted by the distance test."""
    t0, t1, u0, u1 = shear_box_of_ball(ball)
    x0, y0 = ball.center.re, ball.center.im
    rng = np.random.default_rng(seed)
    hits = done = 0
    while done < n:
        m = min(chunk, n - done)
        t = rng.uniform(t0, t1, m)
        eu = np.exp(rng.uniform(u0, u1, m))
        z = x0 + y0 * (t * eu + 1j * eu)
        hits += int(np.count_nonzero(hyp_distance(ball.center, z) <= ball.radius))
        done += m
    box = (t1 - t0) * (u1 - u0)
    frac = hits / n
    return box * frac, box * np.sqrt(frac * (1.0 - frac) / n)


def polar_integrate(f: Callable, center, radius: float, nodes: tuple[int, int] = (256, 256)):
    """Integrate f over B(center, radius) in geodesic polar coordinates,
    dlambda = sinh(s) ds dphi, with Gauss-Legendre in s and midpoint in phi.

    Independent of the rectangle rule; used to cross-check it.
    """
    from .sl2 import x_of_z, mobius_apply

    ns, nphi = nodes
    s, ws = np.polynomial.legendre.leggauss(ns)
    s = 0.5 * radius * (s + 1.0)
    ws = 0.5 * radius * ws
    phi = TWO_PI * (np.arange(nphi) + 0.5) / nphi
    S, P = np.meshgrid(s, phi, indexing="ij")
    disk = np.tanh(S / 2.0) * np.exp(1j * P)
    z = mobius_apply(x_of_z(center), 1j * (1 + disk) / (1 - disk))
    w = (ws * np.sinh(s))[:, None] * (TWO_PI / nphi)
    return np.sum(np.asarray(f(z)) * w)


# -- balls ----------------------------------------------------------------------


def euclid_circle_of_hyp_ball(ball: HypBall) -> tuple[UhpPoint, float]:
    """Euclidean center and radius of the boundary circle of a hyperbolic ball."""
    c = ball.center
    r = ball.radius
    return UhpPoint(c.re, c.im * np.cosh(r)), float(c.im * np.sinh(r))


def _expm1_ratio(t):
    # expm1(t) / t, continuous through t = 0
    return 1.0 if t == 0 else np.expm1(t) / t


def ball_area(ball: HypBall) -> float:
    """Area of a ball from the horizontal chord lengths, integrated in log y.

    The chord half-width at height y is sqrt((y - lo)(hi - y)); the square
    root endpoint behaviour is absorbed into an algebraic quadrature weight.
    """
    # chord endpoints y0 e^{-r}, y0 e^{r}, formed directly to avoid cancellation
    lo = ball.center.im * np.exp(-ball.radius)
    hi = ball.center.im * np.exp(ball.radius)
    ua, ub = np.log(lo), np.log(hi)

    def smooth(u):
        left = lo * _expm1_ratio(u - ua)
        right = hi * _expm1_ratio(u - ub)
        return 2.0 * np.sqrt(left * right) * np.exp(-u)

    val, _ = integrate.quad(smooth, ua, ub, weight="alg", wvar=(0.5, 0.5),
                            epsabs=0.0, epsrel=1e-13, limit=200)
    return float(val)


def doubling_ratio(r: float, center=I) -> float:
    """Area of B(center, 2r) over area of B(center, r)."""
    if not r > 0:
        raise GeometryError("radius must be > 0")
    center = center if isinstance(center, UhpPoint) else UhpPoint.from_complex(center)
    return ball_area(HypBall(center, 2 * r)) / ball_area(HypBall(center, r))


def sample_sphere(center, r: float, n: int):
    """n equally spaced points at hyperbolic distance r from center."""
    from .sl2 import x_of_z, mobius_apply

    phi = TWO_PI * np.arange(n) / n
    disk = np.tanh(r / 2.0) * np.exp(1j * phi)
    return mobius_apply(x_of_z(center), 1j * (1 + disk) / (1 - disk))


# -- approximate midpoint property ----------------------------------------------

AMP_EPS = 1e-9


def geodesic_midpoint(z, w) -> complex:
    """Midpoint of the geodesic segment [z, w].

    z is sent to i by x(z)^-1, then w is turned onto the imaginary axis by a
    rotation about i; in the disk picture that rotation is multiplication by
    a unit complex number, so the midpoint sits at tanh(d/4) in the
    direction of w.
    """
    from .sl2 import x_of_z, mobius_apply

    z, w = as_complex(z), as_complex(w)
    g = x_of_z(z)
    w1 = mobius_apply(g.inverse(), w)
    disk = (w1 - 1j) / (w1 + 1j)
    d = hyp_distance(z, w)
    m_disk = np.tanh(d / 4.0) * np.exp(1j * np.angle(disk))
    return mobius_apply(g, 1j * (1 + m_disk) / (1 - m_disk))


def amp_witness(z, w, assumptions: GeometryAssumptions) -> HypBall:
    """Ball around the geodesic midpoint of radius (1 + eps) rho(z, w) / 2.

    It contains both points and its radius is below beta_amp * rho(z, w).
    """
    d = float(hyp_distance(z, w))
    if not d > assumptions.R0:
        raise GeometryError(f"points too close: rho = {d} <= R0 = {assumptions.R0}")
    m = geodesic_midpoint(z, w)
    return HypBall(UhpPoint.from_complex(m), 0.5 * d * (1.0 + AMP_EPS))
