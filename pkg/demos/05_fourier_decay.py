"""
Fourier decay profiles
======================

Estimate sup |mu_hat| on dyadic shells of frequencies and fit a power law.
The sphere decays like |xi|^-1; a self-similar Cantor product does not
decay at all along its own scale.
"""

import numpy as np

from volset import (
    CantorSpec,
    decay_profile,
    mu_hat,
    product_cantor,
    salem_gap,
    sphere_measure,
    sphere_transform,
)

S = sphere_measure(7)
xi = np.array([[1.0, 2.0, 0.5], [3.0, 0.0, 4.0]])
print("grid:", mu_hat(S, xi))
print("exact:", sphere_transform(xi))

prof = decay_profile(S, 6, 512, seed=1)
for j, r, m, _ in prof.rows():
    print(f"j={j}  |xi|={r:5.0f}  max |mu_hat| = {m:.4f}")
print("fitted exponent", prof.salem_exponent, "gap", salem_gap(S, 2.0, prof))

# triadic frequencies along a coordinate axis
spec = CantorSpec.middle_thirds()
C = product_cantor(spec, 6)
p = decay_profile(C, 5, base=3.0, directions=[[1.0, 0.0, 0.0]])
print("middle thirds:", np.round(p.max_modulus, 3), "gap", salem_gap(C, 3 * spec.dimension, p))
