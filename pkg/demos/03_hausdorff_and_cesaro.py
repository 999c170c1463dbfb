"""Hausdorff operators as weighted averages over rotations about i."""
import numpy as np

from hausdorff_h2.operators import (
    CosDensity, KernelMeasure, bump, cesaro_apply, hausdorff_apply, kernel_l1_norm, uniform_measure,
)

f = bump(0.5 + 1.0j, 0.8)
z = np.array([0.5 + 1.0j, 1j, -0.5 + 1.0j])

# Point masses: each atom contributes its weight times f at a rotated point.
km = KernelMeasure(atoms=((0.0, 0.3), (np.pi / 2, 0.7)))
print("two atoms        ", hausdorff_apply(km, f, z))

# A smooth density plus an atom; the L1 norm of the kernel bounds the operator.
km2 = KernelMeasure(CosDensity(0.2, 2, offset=0.1), atoms=((1.0, -0.5),))
print("density + atom   ", hausdorff_apply(km2, f, z), " kernel L1 norm", kernel_l1_norm(km2))

# The uniform average is a projection onto functions radial about i.
mu = uniform_measure()
avg = cesaro_apply(mu, f, z)
twice = cesaro_apply(mu, lambda w: cesaro_apply(mu, f, w), z, nodes=512)
print("average          ", avg)
print("average, twice   ", twice)

# Harmonic functions average to their value at the center.
print("mean of Im z on the circle through 2i:", cesaro_apply(mu, np.imag, 2j))
