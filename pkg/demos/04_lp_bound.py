"""||H f||_p against ||kernel||_1 ||f||_p for a few random kernels and bumps."""
import numpy as np

from hausdorff_h2.norms import LpConfig, verify_lp_bound
from hausdorff_h2.operators import random_bump, random_kernel

rng = np.random.default_rng(7)
print(f"{'case':>5} {'p':>4} {'||f||':>10} {'||Hf||':>10} {'bound':>10} {'Hf/bound':>9}")
for case in range(4):
    km, f = random_kernel(rng), random_bump(rng)
    for r in verify_lp_bound(km, f, LpConfig(), ps=[1.0, 2.0, 4.0, np.inf]):
        print(f"{case:>5} {r.p:>4} {r.norm_f:10.5f} {r.norm_hf:10.5f} {r.bound:10.5f} {r.norm_hf / r.bound:9.4f}"
              + ("" if r.passed else "   <-- bound violated"))
