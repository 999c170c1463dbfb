"""Integrating over SL(2, R) in Iwasawa coordinates."""
import numpy as np

from hausdorff_h2.operators import bump
from hausdorff_h2.sl2 import HaarGrid, check_unimodular, gaussian_bumps, reflection_v, rotation_k, weil_check

# A right-K-invariant function integrates to the same value on the group and on the half-plane.
f = bump(0.3 + 1.4j, 1.1, 2.0)
group, plane = weil_check(f)
print("group integral", group, " half-plane integral", plane)

# Conjugating the integrand by an orthogonal matrix leaves the Haar integral unchanged.
F = gaussian_bumps(np.random.default_rng(0), 1)[0]
grid = HaarGrid(nodes=(96, 96, 64))
for name, u in (("k(pi/3)", rotation_k(np.pi / 3)), ("v(0)", reflection_v(0.0))):
    plain, moved = check_unimodular(F, u, grid)
    print(f"{name:8s} plain {plain:.12f}  conjugated {moved:.12f}")
