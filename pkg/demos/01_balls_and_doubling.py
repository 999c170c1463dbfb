"""Hyperbolic balls, their areas, and why doubling only holds locally."""
import numpy as np

from hausdorff_h2.geometry import I, HypBall, ball_area, doubling_ratio, euclid_circle_of_hyp_ball, hyp_ball_area_mc

# A hyperbolic ball about i is a Euclidean disk, pushed upward.
ball = HypBall(I, 1.0)
center, radius = euclid_circle_of_hyp_ball(ball)
print("B(i, 1) as a Euclidean disk: center", center, "radius", radius)

# Area three ways: closed form, adaptive quadrature, Monte Carlo.
mc, se = hyp_ball_area_mc(ball, 2_000_000, seed=1)
print("closed form  ", 2 * np.pi * (np.cosh(1.0) - 1))
print("quadrature   ", ball_area(ball))
print("Monte Carlo  ", mc, "+/-", se)

# Doubling the radius multiplies area by 4 cosh^2(r/2): bounded for small r, exponential for large r.
for r in (0.1, 1.0, 2.0, 5.0, 10.0):
    print(f"r = {r:5.1f}   area(2r)/area(r) = {doubling_ratio(r):12.4f}")
