"""Atoms of the Hardy space, their rotated images, and image decompositions."""
import numpy as np

from hausdorff_h2.atoms import (
    AtomicDecomposition, HardyConfig, atom_check, atom_pushforward, h1_upper_bound,
    hausdorff_on_decomposition, make_radial_atom,
)
from hausdorff_h2.operators import KernelMeasure, kernel_l1_norm

cfg = HardyConfig(b=4.0)
a = make_radial_atom(0.5 + 1.5j, 1.0, 0.4)
print("pieces:", a.pieces)
print("check:", atom_check(a, cfg))

# Rotating an atom about i moves its ball and keeps everything else.
b = atom_pushforward(a, 1.2)
print("rotated center", b.ball.center, " check passes:", atom_check(b, cfg).passed)

# A purely atomic kernel maps a decomposition to a decomposition with controlled coefficients.
d = AtomicDecomposition(((1.0, a), (-2.0, make_radial_atom(2j, 2.0, 1.5))))
km = KernelMeasure(atoms=((0.0, 0.5), (np.pi / 3, -0.5)))
image = hausdorff_on_decomposition(km, d)
print("sum |coef| before", h1_upper_bound(d), " after", h1_upper_bound(image),
      " kernel L1 x before", kernel_l1_norm(km) * h1_upper_bound(d))
