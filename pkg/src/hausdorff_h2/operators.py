"""Hausdorff and Cesaro operators on the half-plane.

A Hausdorff operator here averages f over the rotations about i,

    (H f)(z) = int_0^{2pi} f(k(-t) . z) dm(t),

where the signed measure ``m`` (kernel times measure) is a density on
[0, 2pi) plus finitely many point masses. The angle integral uses the
composite midpoint rule, which converges spectrally for smooth periodic
integrands.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .geometry import I, as_complex, cosh_distance, hyp_distance
from .sl2 import Mat2, conjugate_action, reflection_v, rotate_about_i, rotation_k

TWO_PI = 2.0 * np.pi
DEFAULT_NODES = 4096
_CHUNK = 1 << 22


class KernelError(ValueError):
    pass


def midpoint_nodes(n: int):
    h = TWO_PI / n
    return h * (np.arange(n) + 0.5), h


# -- densities ------------------------------------------------------------------


@dataclass(frozen=True)
class UniformDensity:
    value: float = 1.0 / TWO_PI

    def __call__(self, theta):
        return np.full(np.shape(theta), self.value, dtype=float)

    def to_dict(self):
        return {"kind": "uniform", "value": self.value}


@dataclass(frozen=True)
class CosDensity:
    """offset + amplitude * cos(freq * theta + phase)."""

    amplitude: float = 1.0
    freq: int = 1
    phase: float = 0.0
    offset: float = 0.0

    def __call__(self, theta):
        return self.offset + self.amplitude * np.cos(self.freq * np.asarray(theta) + self.phase)

    def to_dict(self):
        return {"kind": "cos", "amplitude": self.amplitude, "freq": self.freq,
                "phase": self.phase, "offset": self.offset}


@dataclass(frozen=True)
class TableDensity:
    """Samples at theta_k = 2 pi k / n, interpolated linearly and periodically."""

    values: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) < 1:
            raise KernelError("table density needs at least one sample")

    def __call__(self, theta):
        n = len(self.values)
        grid = TWO_PI * np.arange(n) / n
        return np.interp(np.mod(theta, TWO_PI), grid, self.values, period=TWO_PI)

    def to_dict(self):
        return {"kind": "table", "values": list(self.values)}


@dataclass(frozen=True)
class SumDensity:
    parts: tuple

    def __call__(self, theta):
        return sum(p(theta) for p in self.parts)

    def to_dict(self):
        return {"kind": "sum", "parts": [_density_to_dict(p) for p in self.parts]}


@dataclass(frozen=True)
class ScaledDensity:
    factor: float
    base: Callable

    def __call__(self, theta):
        return self.factor * self.base(theta)

    def to_dict(self):
        return {"kind": "scaled", "factor": self.factor, "base": _density_to_dict(self.base)}


def _density_to_dict(d):
    if d is None:
        return None
    if hasattr(d, "to_dict"):
        return d.to_dict()
    raise KernelError(f"density {d!r} is not serializable")


def density_from_dict(data: dict | None):
    if data is None:
        return None
    kind = data.get("kind")
    if kind == "uniform":
        return UniformDensity(float(data.get("value", 1.0 / TWO_PI)))
    if kind == "cos":
        return CosDensity(float(data.get("amplitude", 1.0)), int(data.get("freq", 1)),
                          float(data.get("phase", 0.0)), float(data.get("offset", 0.0)))
    if kind == "table":
        return TableDensity(tuple(data["values"]))
    if kind == "sum":
        return SumDensity(tuple(density_from_dict(p) for p in data["parts"]))
    if kind == "scaled":
        return ScaledDensity(float(data["factor"]), density_from_dict(data["base"]))
    raise KernelError(f"unknown density kind {kind!r}")


# -- kernel measures ------------------------------------------------------------


@dataclass(frozen=True)
class KernelMeasure:
    """Signed measure on [0, 2pi): a density part plus point masses.

    ``density`` is the product of the kernel with d(mu)/d(theta); each atom
    is (theta_i, weight_i) with the kernel value already folded in.
    """

    density: Callable | None = None
    atoms: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        merged: dict[float, float] = {}
        for theta, w in self.atoms:
            t = float(np.mod(theta, TWO_PI))
            if not np.isfinite(t):
                raise KernelError("atom angle must be finite")
            merged[t] = merged.get(t, 0.0) + w
        object.__setattr__(self, "atoms", tuple(sorted(merged.items())))

    @property
    def is_atomic(self) -> bool:
        return self.density is None

    def __add__(self, other: "KernelMeasure") -> "KernelMeasure":
        parts = [d for d in (self.density, other.density) if d is not None]
        density = None if not parts else parts[0] if len(parts) == 1 else SumDensity(tuple(parts))
        return KernelMeasure(density, self.atoms + other.atoms)

    def __mul__(self, c: float) -> "KernelMeasure":
        density = None if self.density is None else ScaledDensity(c, self.density)
        return KernelMeasure(density, tuple((t, c * w) for t, w in self.atoms))

    __rmul__ = __mul__

    def to_dict(self) -> dict:
        return {"density": _density_to_dict(self.density),
                "atoms": [[t, w] for t, w in self.atoms]}

    @classmethod
    def from_dict(cls, data: dict) -> "KernelMeasure":
        atoms = data.get("atoms", [])
        try:
            atoms = tuple((float(t), float(w)) for t, w in atoms)
        except (TypeError, ValueError) as exc:
            raise KernelError(f"atoms must be [theta, weight] pairs: {exc}") from None
        return cls(density_from_dict(data.get("density")), atoms)


def uniform_measure() -> KernelMeasure:
    """d theta / 2 pi, the rotation-invariant probability on [0, 2pi)."""
    return KernelMeasure(UniformDensity())


def kernel_l1_norm(km: KernelMeasure, nodes: int = DEFAULT_NODES) -> float:
    total = float(sum(abs(w) for _, w in km.atoms))
    if km.density is not None:
        theta, h = midpoint_nodes(nodes)
        d = np.asarray(km.density(theta))
        if not np.all(np.isfinite(d)):
            raise KernelError("density has non-finite values")
        total += float(np.sum(np.abs(d)) * h)
    return total


def total_mass(km: KernelMeasure, nodes: int = DEFAULT_NODES):
    mass = sum(w for _, w in km.atoms)
    if km.density is not None:
        theta, h = midpoint_nodes(nodes)
        mass += np.sum(km.density(theta)) * h
    return mass


# -- test functions -------------------------------------------------------------


@dataclass(frozen=True)
class CompactSupport:
    """f vanishes outside the hyperbolic ball B(center, radius)."""

    center: complex
    radius: float

    def rotated_hull(self, scale: float = 1.0) -> "CompactSupport":
        """A ball about i holding every rotation of this support about i."""
        return CompactSupport(1j, float(hyp_distance(self.center, 1j)) + self.radius)

    def radius_for_tail(self, p: float, tol: float) -> float:
        return self.radius


@dataclass(frozen=True)
class GaussianDecay:
    """|f(z)| <= amplitude * exp(-max(0, rho(z, center) - offset)^2 / (2 scale^2))."""

    center: complex
    amplitude: float
    scale: float
    offset: float = 0.0

    def rotated_hull(self, scale: float = 1.0) -> "GaussianDecay":
        return GaussianDecay(1j, self.amplitude * scale, self.scale,
                             self.offset + float(hyp_distance(self.center, 1j)))

    def tail_bound(self, R: float, p: float) -> float:
        """Bound on the L^p mass (to the power p) outside B(center, R);
        for p = inf, a bound on |f| there."""
        from scipy import integrate

        A, s, off = self.amplitude, self.scale, self.offset
        if np.isinf(p):
            return A * np.exp(-max(0.0, R - off) ** 2 / (2 * s * s))
        # sinh(r) <= e^r / 2, so the tail is at most pi * int A^p exp(r - p (r - off)^2 / 2s^2)
        g = lambda r: np.exp(p * np.log(A) + r - p * (r - off) ** 2 / (2 * s * s)) * np.pi
        val, _ = integrate.quad(g, max(R, off), np.inf)
        return float(val)

    def radius_for_tail(self, p: float, tol: float) -> float:
        R = self.offset + self.scale
        while self.tail_bound(R, p) > tol:
            R += 0.25 * self.scale
        return R


@dataclass(frozen=True)
class FieldFunction:
    """A vectorized function on the half-plane with a support/decay descriptor."""

    func: Callable
    support: CompactSupport | GaussianDecay
    name: str = ""

    def __call__(self, z):
        return self.func(as_complex(z))

    def __mul__(self, c) -> "FieldFunction":
        sup = self.support
        if isinstance(sup, GaussianDecay):
            sup = GaussianDecay(sup.center, abs(c) * sup.amplitude, sup.scale, sup.offset)
        f = self.func
        return FieldFunction(lambda z: c * f(z), sup, f"{c}*{self.name}")

    __rmul__ = __mul__

    def __add__(self, other: "FieldFunction") -> "FieldFunction":
        f, g = self.func, other.func
        return FieldFunction(lambda z: f(z) + g(z), _union(self.support, other.support),
                             f"({self.name}+{other.name})")

    def __sub__(self, other):
        return self + (-1.0) * other


def _union(a, b):
    d = float(hyp_distance(a.center, b.center))
    if isinstance(a, CompactSupport) and isinstance(b, CompactSupport):
        return CompactSupport(a.center, max(a.radius, d + b.radius))
    if isinstance(a, GaussianDecay) and isinstance(b, GaussianDecay):
        return GaussianDecay(a.center, a.amplitude + b.amplitude, max(a.scale, b.scale),
                             max(a.offset, b.offset + d))
    raise KernelError("cannot combine compact and Gaussian descriptors")


def bump(center, radius: float, amplitude: float = 1.0) -> FieldFunction:
    """Smooth bump amplitude * exp(1 - 1/(1 - q)), q = (cosh rho - 1)/(cosh R - 1),
    supported in B(center, radius) and radial about center."""
    c = complex(as_complex(center))
    denom = np.cosh(radius) - 1.0

    def f(z):
        q = (cosh_distance(z, c) - 1.0) / denom
        inside = q < 1.0
        qs = np.where(inside, q, 0.0)
        return np.where(inside, amplitude * np.exp(1.0 - 1.0 / (1.0 - qs)), 0.0)

    return FieldFunction(f, CompactSupport(c, radius), f"bump({c},{radius})")


def gaussian(center, scale: float, amplitude: float = 1.0) -> FieldFunction:
    c = complex(as_complex(center))
    f = lambda z: amplitude * np.exp(-hyp_distance(z, c) ** 2 / (2 * scale * scale))
    return FieldFunction(f, GaussianDecay(c, abs(amplitude), scale), f"gauss({c},{scale})")


def radial(profile: Callable, support, center=I) -> FieldFunction:
    """f(z) = profile(rho(z, center))."""
    c = complex(as_complex(center))
    return FieldFunction(lambda z: profile(hyp_distance(z, c)), support, "radial")


def ball_indicator(center, radius: float) -> FieldFunction:
    c = complex(as_complex(center))
    f = lambda z: (hyp_distance(z, c) <= radius).astype(float)
    return FieldFunction(f, CompactSupport(c, radius), "indicator")


# -- the operators --------------------------------------------------------------


def hausdorff_apply(km: KernelMeasure, f: Callable, z, nodes: int = DEFAULT_NODES):
    """(H f)(z) = int d(t) f(k(-t).z) dt + sum_i w_i f(k(-t_i).z).

    Vectorized in z; the angle nodes are processed in chunks.
    """
    w = as_complex(z)
    shape = np.shape(w)
    w = np.atleast_1d(w).ravel()
    out = np.zeros(w.shape)
    for theta, weight in km.atoms:
        out = out + weight * np.asarray(f(rotate_about_i(theta, w)))
    if km.density is not None:
        theta, h = midpoint_nodes(nodes)
        d = np.asarray(km.density(theta)) * h
        step = max(1, _CHUNK // max(1, w.size))
        for s in range(0, nodes, step):
            t = theta[s:s + step, None]
            out = out + d[s:s + step] @ np.asarray(f(rotate_about_i(t, w[None, :])))
    return out.reshape(shape) if shape else out[0]


def cesaro_apply(mu1: KernelMeasure, f: Callable, z, nodes: int = DEFAULT_NODES):
    """Cesaro operator: the kernel is identically 1, so the measure alone weights
    the rotations. With ``uniform_measure()`` this is the rotational average about i."""
    return hausdorff_apply(mu1, f, z, nodes)


def hausdorff_field(km: KernelMeasure, f: FieldFunction, nodes: int = DEFAULT_NODES) -> FieldFunction:
    """H f as a FieldFunction whose support descriptor covers all rotations of f's."""
    l1 = kernel_l1_norm(km, nodes)
    return FieldFunction(lambda z: hausdorff_apply(km, f, z, nodes),
                         f.support.rotated_hull(l1), f"H[{f.name}]")


# -- the O(2) form --------------------------------------------------------------


@dataclass(frozen=True)
class O2Measure:
    """A measure on O(2) split over its two components: ``rotations`` lives on
    {k(t)} and ``reflections`` on {v(t)}, each parametrized by t in [0, 2pi)."""

    rotations: KernelMeasure = field(default_factory=KernelMeasure)
    reflections: KernelMeasure = field(default_factory=KernelMeasure)


def _component(phi, mats, km: KernelMeasure, f, w, nodes):
    out = np.zeros(w.shape)
    weight = (lambda u: 1.0) if phi is None else phi
    for theta, wt in km.atoms:
        u = mats(theta)
        out = out + wt * weight(u) * np.asarray(f(conjugate_action(u, w)))
    if km.density is not None:
        theta, h = midpoint_nodes(nodes)
        step = max(1, _CHUNK // max(1, w.size))
        for s in range(0, nodes, step):
            t = theta[s:s + step]
            u = mats(t[:, None])
            d = km.density(t) * h * np.broadcast_to(weight(u), (t.size, 1))[:, 0]
            out = out + d @ np.asarray(f(conjugate_action(u, w[None, :])))
    return out


def hausdorff_apply_general(phi: Callable[[Mat2], float] | None, mu: O2Measure, f, z,
                            nodes: int = DEFAULT_NODES):
    """int_{O(2)} phi(u) f((u^-1 x(z) u) . i) dmu(u), evaluated with actual
    matrix conjugation on each component. ``phi=None`` means phi = 1."""
    w = as_complex(z)
    shape = np.shape(w)
    w = np.atleast_1d(w).ravel()
    out = _component(phi, rotation_k, mu.rotations, f, w, nodes)
    out = out + _component(phi, reflection_v, mu.reflections, f, w, nodes)
    return out.reshape(shape) if shape else out[0]


def reduce_o2_kernel(phi: Callable[[Mat2], float] | None, mu: O2Measure) -> KernelMeasure:
    """Fold both components onto one angle kernel, treating v(t) like k(t).

    The result reproduces the O(2) operator exactly on the rotation component.
    On the reflection component it does so only for f with f(-conj z) = f(z),
    because conjugation by v(t) lands on -conj(k(-t) . z), the mirror image of
    the rotated point.
    """
    weight = (lambda u: 1.0) if phi is None else phi

    def fold(mats, km):
        atoms = tuple((t, w * float(weight(mats(t)))) for t, w in km.atoms)
        density = None
        if km.density is not None:
            base = km.density
            density = _PhiDensity(base, weight, mats)
        return KernelMeasure(density, atoms)

    return fold(rotation_k, mu.rotations) + fold(reflection_v, mu.reflections)


@dataclass(frozen=True)
class _PhiDensity:
    base: Callable
    weight: Callable
    mats: Callable

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        return self.base(theta) * np.broadcast_to(self.weight(self.mats(theta)), theta.shape)


def mirror(f: Callable) -> Callable:
    """f composed with the reflection z -> -conj(z) across the imaginary axis."""
    return lambda z: f(-np.conj(as_complex(z)))


def random_kernel(rng: np.random.Generator, max_atoms: int = 4, density_prob: float = 0.6,
                  atomic_only: bool = False) -> KernelMeasure:
    """Seeded random kernel: a few atoms plus, sometimes, a smooth or tabulated density."""
    n_atoms = int(rng.integers(1 if atomic_only else 0, max_atoms + 1))
    atoms = tuple((float(rng.uniform(0, TWO_PI)), float(rng.normal())) for _ in range(n_atoms))
    density = None
    if not atomic_only and (n_atoms == 0 or rng.uniform() < density_prob):
        if rng.uniform() < 0.5:
            density = CosDensity(float(rng.normal() / 4), int(rng.integers(1, 4)),
                                 float(rng.uniform(0, TWO_PI)), float(rng.normal() / 4))
        else:
            density = TableDensity(tuple(rng.normal(size=int(rng.integers(4, 17))) / 4))
    return KernelMeasure(density, atoms)


def random_bump(rng: np.random.Generator, max_offset: float = 1.0,
                radius_range: Sequence[float] = (0.4, 1.0)) -> FieldFunction:
    """Bump with center within hyperbolic distance ``max_offset`` of i."""
    s = max_offset * np.sqrt(rng.uniform())
    phi = rng.uniform(0, TWO_PI)
    disk = np.tanh(s / 2) * np.exp(1j * phi)
    center = 1j * (1 + disk) / (1 - disk)
    return bump(center, float(rng.uniform(*radius_range)), float(rng.normal() or 1.0))
