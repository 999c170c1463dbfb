import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, optimize

from hausdorff_h2.geometry import (
    I, GeometryAssumptions, GeometryError, HypBall, QuadConfig, UhpPoint, amp_witness,
    ball_area, ball_bounding_rect, doubling_ratio, euclid_circle_of_hyp_ball,
    geodesic_midpoint, hyp_area, hyp_area_mc, hyp_ball_area_mc, hyp_distance,
    polar_integrate, sample_sphere,
)
from hausdorff_h2.sl2 import mobius_apply

from conftest import random_sl2, random_uhp

coords = st.tuples(st.floats(-5, 5), st.floats(0.05, 20))


def test_uhp_point_rejects_lower_half_plane():
    with pytest.raises(GeometryError):
        UhpPoint(0.0, 0.0)
    with pytest.raises(GeometryError):
        UhpPoint(1.0, -2.0)


def test_ball_rejects_nonpositive_radius():
    with pytest.raises(GeometryError):
        HypBall(I, 0.0)


def test_distance_identity():
    assert hyp_distance(1j, 1j) == 0.0


def test_distance_vertical_segment_against_length_integral():
    # length of the vertical geodesic from i to e*i: int_1^e dy / y
    oracle, _ = integrate.quad(lambda y: 1.0 / y, 1.0, np.e, epsabs=1e-14)
    assert abs(hyp_distance(1j, np.e * 1j) - oracle) < 1e-9
    assert abs(oracle - 1.0) < 1e-12


@given(coords, coords)
def test_distance_symmetric_and_nonnegative(p, q):
    z, w = complex(*p), complex(*q)
    d = hyp_distance(z, w)
    assert d >= 0
    assert d == pytest.approx(hyp_distance(w, z), rel=1e-13, abs=1e-15)


def test_triangle_inequality(rng):
    z, w, v = (random_uhp(rng, 10_000) for _ in range(3))
    lhs = hyp_distance(z, w)
    rhs = hyp_distance(z, v) + hyp_distance(v, w)
    assert np.all(lhs <= rhs + 1e-12)


def test_isometry_of_sl2_action(rng):
    g = random_sl2(rng, 10_000)
    z, w = random_uhp(rng, 10_000, 1.0), random_uhp(rng, 10_000, 1.0)
    d0 = hyp_distance(z, w)
    d1 = hyp_distance(mobius_apply(g, z), mobius_apply(g, w))
    assert np.max(np.abs(d1 - d0) / np.maximum(1.0, d0)) < 1e-12


def test_ball_area_against_monte_carlo_and_closed_form():
    ball = HypBall(I, 1.0)
    mc, se = hyp_area_mc(lambda z: ball.contains(z), ball_bounding_rect(ball), 10_000_000, seed=1)
    closed = 2 * np.pi * (np.cosh(1.0) - 1.0)
    assert abs(mc - closed) < 3 * se
    assert ball_area(ball) == pytest.approx(closed, rel=1e-12)


def test_rectangle_quadrature_of_ball_indicator():
    ball = HypBall(I, 1.0)
    cfg = QuadConfig(ball_bounding_rect(ball, margin=0.1), nodes=(1024, 1024))
    area = hyp_area(lambda z: ball.contains(z), cfg)
    assert area == pytest.approx(2 * np.pi * (np.cosh(1.0) - 1.0), rel=2e-3)


def test_empty_region_has_zero_area():
    cfg = QuadConfig((-1, 1, 0.5, 2), nodes=(64, 64))
    assert hyp_area(lambda z: np.zeros(np.shape(z), bool), cfg) == 0.0


def test_quad_config_rejects_rectangle_touching_axis():
    with pytest.raises(GeometryError):
        QuadConfig((-1, 1, 0.0, 2))


def test_area_invariant_under_pushforward(rng):
    g = random_sl2(rng, 1)
    g = type(g)(*(float(np.ravel(v)[0]) for v in (g.a, g.b, g.c, g.d)))
    ball = HypBall(UhpPoint(0.3, 0.8), 1.5)
    image = HypBall(UhpPoint.from_complex(mobius_apply(g, ball.center.z)), 1.5)
    # indicator of g(B) evaluated through the inverse map
    g_inv = g.inverse()
    cfg = QuadConfig(ball_bounding_rect(image, 0.05), nodes=(1024, 1024))
    moved = hyp_area(lambda z: ball.contains(mobius_apply(g_inv, z)), cfg)
    assert moved == pytest.approx(ball_area(ball), rel=3e-3)
    assert ball_area(image) == pytest.approx(ball_area(ball), rel=1e-12)


def test_polar_and_rectangle_rules_agree():
    from hausdorff_h2.operators import bump

    g = bump(0.4 + 1.3j, 1.5)
    f = lambda z: g(z) * (1 + 0.3 * np.real(z))
    rect = QuadConfig(ball_bounding_rect(HypBall(UhpPoint(0.4, 1.3), 1.5)), nodes=(512, 512))
    a = polar_integrate(f, 0.4 + 1.3j, 1.5, (256, 128))
    assert a == pytest.approx(hyp_area(f, rect), rel=1e-9)


@pytest.mark.parametrize("r", [0.5, 1.0, 2.0])
def test_doubling_ratio_matches_monte_carlo(r):
    a2, s2 = hyp_ball_area_mc(HypBall(I, 2 * r), 2_000_000, seed=7)
    a1, s1 = hyp_ball_area_mc(HypBall(I, r), 2_000_000, seed=8)
    mc = a2 / a1
    se = mc * np.hypot(s2 / a2, s1 / a1)
    assert abs(doubling_ratio(r) - mc) < 3 * se
    assert doubling_ratio(r) == pytest.approx(4 * np.cosh(r / 2) ** 2, rel=1e-12)


def test_doubling_ratio_small_ball_limit_is_four():
    assert doubling_ratio(1e-4) == pytest.approx(4.0, rel=1e-7)


def test_doubling_fails_globally():
    assert doubling_ratio(10.0) > 100
    a2, _ = hyp_ball_area_mc(HypBall(I, 20.0), 1_000_000, seed=3)
    a1, _ = hyp_ball_area_mc(HypBall(I, 10.0), 1_000_000, seed=4)
    assert a2 / a1 > 100


def test_doubling_ratio_independent_of_center():
    assert doubling_ratio(1.3, 4 + 0.2j) == pytest.approx(doubling_ratio(1.3), rel=1e-12)


def test_doubling_ratio_increasing():
    rs = np.linspace(0.05, 6, 60)
    vals = [doubling_ratio(r) for r in rs]
    assert np.all(np.diff(vals) > 0)


@pytest.mark.parametrize("b", [1.0, 2.0, 4.0])
def test_local_doubling_sup_sits_at_b(b):
    rs = np.linspace(b / 50, b, 50)
    assert max(doubling_ratio(r) for r in rs) == doubling_ratio(b)
    assert doubling_ratio(b) == pytest.approx(4 * np.cosh(b / 2) ** 2, rel=1e-12)


def test_doubling_rejects_nonpositive_radius():
    with pytest.raises(GeometryError):
        doubling_ratio(0.0)


def _fit_circle(pts):
    # algebraic least-squares circle fit: x^2 + y^2 + D x + E y + F = 0
    x, y = pts.real, pts.imag
    A = np.column_stack([x, y, np.ones_like(x)])
    D, E, F = np.linalg.lstsq(A, -(x ** 2 + y ** 2), rcond=None)[0]
    c = complex(-D / 2, -E / 2)
    return c, np.sqrt(abs(c) ** 2 - F)


@pytest.mark.parametrize("center,r", [(1j, 0.3), (1j, 1.0), (1j, 2.5), (2 + 3j, 0.7)])
def test_euclidean_circle_of_ball(center, r):
    pts = sample_sphere(center, r, 1000)
    assert np.allclose(hyp_distance(center, pts), r, rtol=0, atol=1e-12)
    c_fit, r_fit = _fit_circle(pts)
    c, rad = euclid_circle_of_hyp_ball(HypBall(UhpPoint.from_complex(center), r))
    assert abs(c_fit - c.z) < 1e-9 and abs(r_fit - rad) < 1e-9
    assert np.max(np.abs(np.abs(pts - c.z) - rad)) < 1e-9


def test_euclidean_circle_degenerates_to_center():
    c, rad = euclid_circle_of_hyp_ball(HypBall(UhpPoint(0.5, 2.0), 1e-9))
    assert abs(c.z - (0.5 + 2j)) < 1e-8 and rad < 1e-8


def test_amp_witness_on_vertical_geodesic():
    assumptions = GeometryAssumptions()
    ball = amp_witness(1j, np.e ** 2 * 1j, assumptions)
    assert abs(ball.center.z - np.e * 1j) < 1e-12
    assert ball.radius == pytest.approx(1.0, rel=1e-8)


def test_amp_witness_matches_minimax_oracle():
    z, w = 0.3 + 0.5j, -2 + 4j
    cost = lambda v: max(hyp_distance(z, v[0] + 1j * np.exp(v[1])),
                         hyp_distance(w, v[0] + 1j * np.exp(v[1])))
    res = optimize.minimize(cost, [0.0, 0.0], method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 10_000})
    oracle = res.x[0] + 1j * np.exp(res.x[1])
    assert hyp_distance(geodesic_midpoint(z, w), oracle) < 1e-5
    assert amp_witness(z, w, GeometryAssumptions()).radius == pytest.approx(res.fun, rel=1e-8)


def test_amp_witness_rejects_close_points():
    assumptions = GeometryAssumptions(b=4.0, R0=0.5, beta_amp=0.75)
    with pytest.raises(GeometryError):
        amp_witness(1j, 1.2j, assumptions)


def test_amp_witness_contains_endpoints(rng):
    a = GeometryAssumptions(R0=0.2)
    z, w = random_uhp(rng, 1000, 1.5), random_uhp(rng, 1000, 1.5)
    for p, q in zip(z, w):
        d = hyp_distance(p, q)
        if d <= a.R0:
            continue
        ball = amp_witness(p, q, a)
        assert ball.contains(p) and ball.contains(q)
        assert ball.radius < a.beta_amp * d


def test_assumptions_invariants():
    with pytest.raises(GeometryError):
        GeometryAssumptions(b=1.0, R0=0.5, beta_amp=0.6)  # needs b > 1.25
    with pytest.raises(GeometryError):
        GeometryAssumptions(tau=1.5)
    with pytest.raises(GeometryError):
        GeometryAssumptions(beta_amp=0.5)
