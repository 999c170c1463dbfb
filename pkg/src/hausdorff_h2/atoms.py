"""(1, inf)-atoms on the half-plane, their images under rotations about i,
and finite atomic decompositions.

Atoms are piecewise constant on concentric shells {r_lo <= rho(z, c) < r_hi}
around the center of their supporting ball. Rotations about i are
measure-preserving isometries, so a rotated atom keeps its radius and its
values; only the center moves.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .geometry import GeometryAssumptions, GeometryError, HypBall, UhpPoint, as_complex, ball_area, hyp_distance
from .operators import KernelError, KernelMeasure, kernel_l1_norm
from .sl2 import rotate_about_i

REL_TOL = 1e-9
MIN_PIECE_FRACTION = 1e-9


def disk_area(r: float) -> float:
    """2 pi (cosh r - 1), written as 4 pi sinh^2(r/2) to keep small radii exact."""
    return 4.0 * np.pi * np.sinh(0.5 * r) ** 2


def shell_area(r_lo: float, r_hi: float) -> float:
    # 2 pi (cosh r_hi - cosh r_lo) without cancellation
    return 4.0 * np.pi * np.sinh(0.5 * (r_hi + r_lo)) * np.sinh(0.5 * (r_hi - r_lo))


@dataclass(frozen=True)
class Piece:
    r_lo: float
    r_hi: float
    value: float

    def __post_init__(self):
        for name in ("r_lo", "r_hi", "value"):
            object.__setattr__(self, name, float(getattr(self, name)))

    def area(self) -> float:
        return shell_area(self.r_lo, self.r_hi)


@dataclass(frozen=True)
class Atom:
    ball: HypBall
    pieces: tuple[Piece, ...]

    def __post_init__(self):
        object.__setattr__(self, "pieces", tuple(sorted(self.pieces, key=lambda p: p.r_lo)))
        for p in self.pieces:
            if not 0 <= p.r_lo < p.r_hi:
                raise GeometryError(f"bad shell radii ({p.r_lo}, {p.r_hi})")
        for a, b in zip(self.pieces, self.pieces[1:]):
            if b.r_lo < a.r_hi:
                raise GeometryError("atom pieces overlap")

    def __call__(self, z):
        rho = hyp_distance(self.ball.center, as_complex(z))
        out = np.zeros(np.shape(rho))
        for p in self.pieces:
            inside = (rho >= p.r_lo) & (rho < p.r_hi) if p.r_lo > 0 else rho < p.r_hi
            out = np.where(inside, p.value, out)
        return out if np.ndim(out) else float(out)

    @property
    def sup(self) -> float:
        return max((abs(p.value) for p in self.pieces), default=0.0)

    def integral(self) -> float:
        return float(sum(p.value * p.area() for p in self.pieces))

    def l1(self) -> float:
        return float(sum(abs(p.value) * p.area() for p in self.pieces))

    def to_dict(self) -> dict:
        c = self.ball.center
        return {"center": [c.re, c.im], "radius": self.ball.radius,
                "pieces": [[p.r_lo, p.r_hi, p.value] for p in self.pieces]}

    @classmethod
    def from_dict(cls, d: dict) -> "Atom":
        ball = HypBall(UhpPoint(*map(float, d["center"])), float(d["radius"]))
        return cls(ball, tuple(Piece(*map(float, p)) for p in d["pieces"]))


@dataclass(frozen=True)
class AtomicDecomposition:
    terms: tuple[tuple[float, Atom], ...] = ()

    def __call__(self, z):
        out = np.zeros(np.shape(as_complex(z)))
        for coef, atom in self.terms:
            out = out + coef * atom(z)
        return out

    def to_dict(self) -> dict:
        return {"terms": [{"coef": c, "atom": a.to_dict()} for c, a in self.terms]}

    @classmethod
    def from_dict(cls, d: dict) -> "AtomicDecomposition":
        return cls(tuple((float(t["coef"]), Atom.from_dict(t["atom"])) for t in d["terms"]))


@dataclass(frozen=True)
class HardyConfig:
    """Constants of H^1_b. ``gamma_tau_b`` stays ``None``: it is not computed.

    The Lipschitz constant of the automorphisms and the lower bound on their
    modulus are both 1 for rotations of the half-plane, so they carry no
    runtime role here.
    """

    b: float = 4.0
    tau: float = 2.0
    D_tau_b: float | None = None
    gamma_tau_b: float | None = None
    assumptions: GeometryAssumptions = field(default_factory=GeometryAssumptions)

    def __post_init__(self):
        a = self.assumptions
        if not self.b > a.R0 / (1 - a.beta_amp):
            raise GeometryError("need b > R0 / (1 - beta_amp)")
        if self.tau < 2:
            raise GeometryError("tau must be >= 2")
        if self.D_tau_b is None:
            object.__setattr__(self, "D_tau_b", estimate_D_tau_b(self.tau, self.b))
        if self.D_tau_b < 1:
            raise GeometryError("D_tau_b must be >= 1")


@dataclass
class AtomReport:
    radius: float
    support_ok: bool
    radius_ok: bool
    sup_ok: bool
    mean_ok: bool
    sup_excess: float
    mean_residual: float

    @property
    def passed(self) -> bool:
        return self.support_ok and self.radius_ok and self.sup_ok and self.mean_ok


def atom_check(a: Atom, cfg: HardyConfig, tol: float = REL_TOL) -> AtomReport:
    """Check support in the ball with radius <= b, the sup bound
    |a| <= 1/area(ball), and zero mean (relative to the L^1 mass)."""
    r = a.ball.radius
    support_ok = all(p.r_hi <= r * (1 + tol) for p in a.pieces)
    radius_ok = r <= cfg.b * (1 + tol)
    sup_excess = a.sup * disk_area(r) - 1.0
    l1 = a.l1()
    mean_residual = abs(a.integral()) / l1 if l1 > 0 else 0.0
    return AtomReport(r, support_ok, radius_ok, bool(sup_excess <= tol), bool(mean_residual <= tol),
                      float(sup_excess), float(mean_residual))


def make_radial_atom(center, r: float, r_inner: float) -> Atom:
    """Two-piece atom: one value on B(center, r_inner), the opposite-sign value
    on the surrounding shell up to r, with zero mean and the smaller piece
    pinned at the cap 1/area(B(center, r))."""
    if not 0 < r_inner < r:
        raise GeometryError("need 0 < r_inner < r")
    a_in, a_out = disk_area(r_inner), shell_area(r_inner, r)
    total = disk_area(r)
    if min(a_in, a_out) < MIN_PIECE_FRACTION * total:
        raise GeometryError("one piece of the atom has negligible area")
    cap = 1.0 / total
    if a_in <= a_out:
        alpha, beta = cap, -cap * a_in / a_out
    else:
        alpha, beta = cap * a_out / a_in, -cap
    center = center if isinstance(center, UhpPoint) else UhpPoint.from_complex(center)
    return Atom(HypBall(center, r), (Piece(0.0, r_inner, alpha), Piece(r_inner, r, beta)))


def atom_pushforward(a: Atom, theta: float) -> Atom:
    """The atom z -> a(k(-theta) . z).

    Its supporting ball is B(k(theta) . c, r), same radius, same values; no
    D_tau_b rescaling is needed since the map is an isometry preserving area.
    """
    c = rotate_about_i(-theta, a.ball.center.z)
    return Atom(HypBall(UhpPoint.from_complex(c), a.ball.radius), a.pieces)


def h1_upper_bound(d: AtomicDecomposition) -> float:
    """Sum of |coef|, an upper bound for the H^1 norm of the represented function."""
    return float(sum(abs(c) for c, _ in d.terms))


def hausdorff_on_decomposition(km: KernelMeasure, d: AtomicDecomposition) -> AtomicDecomposition:
    """Image of sum_j c_j a_j under a purely atomic kernel sum_i w_i delta(theta_i),
    as the decomposition {(c_j w_i, a_j rotated by theta_i)}."""
    if not km.is_atomic:
        raise KernelError("image decompositions need a purely atomic kernel")
    return AtomicDecomposition(tuple(
        (coef * w, atom_pushforward(atom, theta))
        for theta, w in km.atoms for coef, atom in d.terms))


def estimate_D_tau_b(tau: float, b: float, n_grid: int = 64) -> float:
    """sup over r in (0, b] of area(B(tau r)) / area(B(r)) on a log-spaced grid ending at b."""
    if tau < 1:
        raise GeometryError("tau must be >= 1")
    if not b > 0:
        raise GeometryError("b must be > 0")
    rs = b * np.logspace(-3, 0, n_grid)
    return max(ball_area(HypBall(UhpPoint(0.0, 1.0), tau * r)) / ball_area(HypBall(UhpPoint(0.0, 1.0), r))
               for r in rs)


def random_atom(rng: np.random.Generator, b: float = 4.0, max_offset: float = 2.0) -> Atom:
    """Radial atom with a random center (within ``max_offset`` of i) and radii."""
    s = max_offset * np.sqrt(rng.uniform())
    disk = np.tanh(s / 2) * np.exp(1j * rng.uniform(0, 2 * np.pi))
    center = 1j * (1 + disk) / (1 - disk)
    r = float(rng.uniform(0.05, b))
    return make_radial_atom(center, r, float(r * rng.uniform(0.1, 0.9)))
