"""
Volume sets and delta-separated counts
======================================

Collect the determinants of all ordered triples of a small set, or of
random triples drawn from a large one, and count how many values survive
at a given separation.
"""

import numpy as np

from volset import (
    delta_separated_count,
    distinct_count,
    homogeneous_set,
    occupancy_measure,
    planar_set,
    product_cantor,
    CantorSpec,
    PointSet,
    volume_sample,
)

corners = PointSet(np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], float))
v = volume_sample(corners)
print("cube corners:", v.values.size, "triples,", distinct_count(v), "distinct values")
print(np.unique(v.values.round(12)).tolist())

# every triple in a plane through the origin has zero volume
flat = volume_sample(planar_set(20, seed=1))
print("planar: max |det| =", np.abs(flat.values).max())

# sampled mode for larger inputs
H = homogeneous_set(4096, jitter=0.3, seed=7)
v = volume_sample(H, "sampled", n_draws=1_000_000, seed=8)
delta = H.n ** (-5 / 13)
bound = H.n ** (5 / 13)
print(f"n = {H.n}: {delta_separated_count(v, delta)} separated values, "
      f"reference bound {bound:.1f}")

# a rough indicator of how much of the value range is occupied
mu = product_cantor(CantorSpec.with_dimension(0.9), 6)
for n in (10_000, 100_000, 1_000_000):
    w = volume_sample(mu, "sampled", n_draws=n, seed=3)
    print(n, "draws, occupancy", occupancy_measure(w, 2.0**-6))
