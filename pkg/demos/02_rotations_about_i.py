"""Conjugating x(z) by rotations and reflections, and where each sends z."""
import numpy as np

from hausdorff_h2.sl2 import conjugate_action, reflection_v, rotate_about_i, rotation_k, x_of_z, mobius_apply

z = 1.0 + 1.0j
print("x(z) . i =", mobius_apply(x_of_z(z), 1j))

# Conjugation by k(theta) turns z about i; the closed form agrees.
for theta in np.linspace(0, np.pi, 5):
    via_matrices = conjugate_action(rotation_k(theta), z)
    print(f"theta = {theta:.3f}   conjugate {via_matrices:.6f}   closed form {rotate_about_i(theta, z):.6f}")

# Conjugation by a reflection v(theta) lands on the mirror image across the imaginary axis.
for theta in (0.0, 0.7):
    v = conjugate_action(reflection_v(theta), z)
    k = conjugate_action(rotation_k(theta), z)
    print(f"theta = {theta:.1f}   v-conjugate {v:.6f}   k-conjugate {k:.6f}   -conj(k) {-np.conj(k):.6f}")
