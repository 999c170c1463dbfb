"""L^p norms on (H^2, dx dy / y^2) and numerical checks of the bound
||H f||_p <= ||kernel||_1 ||f||_p for Hausdorff operators.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .geometry import HypBall, QuadConfig, UhpPoint, ball_bounding_rect
from .operators import (
    CompactSupport,
    FieldFunction,
    KernelMeasure,
    kernel_l1_norm,
    midpoint_nodes,
)
from .sl2 import rotate_about_i

EPS_QUAD = 1e-3
TAIL_TOL = 1e-9


class NormError(ValueError):
    pass


@dataclass(frozen=True)
class LpConfig:
    """p in [1, inf] (``np.inf`` for the sup norm), an optional truncation
    rectangle (x0, x1, y0, y1), and node counts along x and log y.

    With ``rect=None`` the rectangle is derived from the function's support
    descriptor so that the neglected tail stays below ``tail_tol``.
    """

    p: float = 2.0
    rect: tuple[float, float, float, float] | None = None
    nodes: tuple[int, int] = (384, 256)
    tail_tol: float = TAIL_TOL
    theta_nodes: int = 256

    def __post_init__(self):
        if not self.p >= 1:
            raise NormError(f"p must be >= 1, got {self.p}")
        if self.rect is not None and not self.rect[2] > 0:
            raise NormError("rectangle must lie strictly above y = 0")

    def with_p(self, p) -> "LpConfig":
        return LpConfig(p, self.rect, self.nodes, self.tail_tol, self.theta_nodes)


def required_rect(f: FieldFunction, p: float, tol: float = TAIL_TOL):
    sup = f.support
    R = sup.radius_for_tail(p, tol)
    return ball_bounding_rect(HypBall(UhpPoint.from_complex(sup.center), R))


def _quad(f: FieldFunction, cfg: LpConfig) -> QuadConfig:
    need = required_rect(f, cfg.p, cfg.tail_tol)
    if cfg.rect is None:
        return QuadConfig(need, cfg.nodes)
    q = QuadConfig(cfg.rect, cfg.nodes)
    if not q.contains_rect(need):
        raise NormError(f"support of {f.name or 'f'} exceeds the truncation rectangle")
    return q


def _norm_from_values(vals, W, p):
    a = np.abs(vals)
    if np.isinf(p):
        return float(np.max(a))
    return float(np.sum(a ** p * W) ** (1.0 / p))


def _polish_sup(f, z0: complex) -> float:
    """Local maximization of |f| from a grid node, in (x, log y)."""
    def neg(v):
        return -float(np.abs(f(np.array([v[0] + 1j * np.exp(v[1])]))[0]))

    res = optimize.minimize(neg, [z0.real, np.log(z0.imag)], method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 2000})
    return -res.fun


def lp_norm(f: FieldFunction, cfg: LpConfig) -> float:
    """(int |f|^p dx dy / y^2)^(1/p) by the midpoint rule in (x, log y).

    For p = inf the grid maximum is refined by a local search; the result is
    still a lower approximation of the essential supremum.
    """
    q = _quad(f, cfg)
    Z, W = q.grid()
    vals = np.asarray(f(Z))
    return _finish(f, vals, Z, W, cfg.p)


def _finish(f, vals, Z, W, p):
    n = _norm_from_values(vals, W, p)
    if np.isinf(p):
        k = np.unravel_index(np.argmax(np.abs(vals)), vals.shape)
        n = max(n, _polish_sup(f, complex(Z[k])))
    return n


def hausdorff_on_grid(km: KernelMeasure, f: FieldFunction, Z: np.ndarray, theta_nodes: int):
    """H f on a tensor grid Z[i, j] = x_i + i y_j.

    For compactly supported f only the index window covering the preimage
    ball B(k(t) . c, R) is evaluated at each angle t; other nodes contribute
    exact zeros.
    """
    terms = [(t, w) for t, w in km.atoms]
    if km.density is not None:
        theta, h = midpoint_nodes(theta_nodes)
        terms += list(zip(theta, np.asarray(km.density(theta)) * h))
    sup = f.support
    out = np.zeros(Z.shape)
    if not isinstance(sup, CompactSupport):
        for t, w in terms:
            out = out + w * np.asarray(f(rotate_about_i(t, Z)))
        return out
    xs, ys = Z[:, 0].real, Z[0, :].imag
    for t, w in terms:
        # k(-t) z in B(c, R)  <=>  z in B(k(t) c, R) = B(rotate_about_i(-t, c), R)
        c = rotate_about_i(-t, sup.center)
        x0, x1, y0, y1 = ball_bounding_rect(HypBall(UhpPoint.from_complex(c), sup.radius))
        i0, i1 = np.searchsorted(xs, [x0, x1])
        j0, j1 = np.searchsorted(ys, [y0, y1])
        if i0 >= i1 or j0 >= j1:
            continue
        block = Z[i0:i1, j0:j1]
        out[i0:i1, j0:j1] = out[i0:i1, j0:j1] + w * np.asarray(f(rotate_about_i(t, block)))
    return out


@dataclass
class LpBoundReport:
    kernel_id: str
    p: float
    norm_f: float
    norm_hf: float
    kernel_l1: float
    bound: float
    ratio: float
    passed: bool
    eps_quad: float = EPS_QUAD

    def to_dict(self):
        d = asdict(self)
        d["p"] = "inf" if np.isinf(self.p) else self.p
        return d


def _hull_quad(km, f, cfg):
    hull = FieldFunction(f.func, f.support.rotated_hull(kernel_l1_norm(km)), f.name)
    return _quad(hull, cfg)


def verify_lp_bound(km: KernelMeasure, f: FieldFunction, cfg: LpConfig,
                    kernel_id: str = "", eps_quad: float = EPS_QUAD,
                    ps: Sequence[float] | None = None):
    """Compare ||H f||_p with ||kernel||_1 ||f||_p.

    Both norms use one grid covering every rotation of f's support about i.
    Returns one report, or a list of reports when ``ps`` is given (the
    operator is applied once and reused for every p).
    """
    plist = [cfg.p] if ps is None else list(ps)
    q = _hull_quad(km, f, cfg.with_p(max(plist)))
    Z, W = q.grid()
    fv = np.asarray(f(Z))
    hv = hausdorff_on_grid(km, f, Z, cfg.theta_nodes)
    l1 = kernel_l1_norm(km)
    hf = lambda z: _hausdorff_point(km, f, z, cfg.theta_nodes)
    reports = []
    for p in plist:
        nf = _finish(f, fv, Z, W, p)
        nh = _finish(hf, hv, Z, W, p)
        bound = l1 * nf
        ratio = nh / nf if nf > 0 else np.nan
        reports.append(LpBoundReport(kernel_id, p, nf, nh, l1, bound, ratio,
                                     bool(nh <= (1 + eps_quad) * bound), eps_quad))
    return reports[0] if ps is None else reports


def _hausdorff_point(km, f, z, nodes):
    from .operators import hausdorff_apply
    return hausdorff_apply(km, f, z, nodes)


def operator_norm_lower_bound(km: KernelMeasure, p: float, family: Sequence[FieldFunction],
                              cfg: LpConfig) -> float:
    """max over the family of ||H f||_p / ||f||_p."""
    if not family:
        raise NormError("empty function family")
    best = 0.0
    for f in family:
        r = verify_lp_bound(km, f, cfg.with_p(p))
        if not r.norm_f > 0:
            raise NormError(f"function {f.name!r} has zero L^p norm")
        best = max(best, r.ratio)
    return best
