"""
Cantor products, the sphere and finite point sets
=================================================

Measures are finite unions of boxes with weights.  Point sets are plain
arrays of shape (n, d).
"""

import numpy as np

from volset import (
    CantorSpec,
    annulus_filter,
    homogeneous_set,
    planar_set,
    product_cantor,
    sample_measure,
    sphere_measure,
    uniform_measure,
)

# two pieces per step, ratio picked so the line set has dimension 0.9
spec = CantorSpec.with_dimension(0.9)
print(spec, "dimension", spec.dimension)

mu = product_cantor(spec, 5)
print(mu.n_cells, "cells of side", mu.side[0], "mass", mu.total_mass())

# the classical middle-thirds set, for comparison
print(product_cantor(CantorSpec.middle_thirds(), 4).n_cells, "cells")

# dyadic cells meeting the sphere of radius 1/2 around the cube center
S = sphere_measure(6)
r = np.linalg.norm(S.centers() - 0.5, axis=1)
print("sphere cells:", S.n_cells, "radii in", (r.min(), r.max()))

# Lebesgue measure restricted to a shell around the center
shell = annulus_filter(uniform_measure(5), 0.5, 1.0)
print("shell cells:", shell.n_cells)

# i.i.d. draws from a measure; the same seed gives the same points
P = sample_measure(mu, 10_000, seed=1)
Q = sample_measure(mu, 10_000, seed=1, threads=4)
print("same draws for 1 and 4 threads:", np.array_equal(P.points, Q.points))

# a jittered lattice and a set living inside a plane through the origin
H = homogeneous_set(512, jitter=0.3, seed=2)
flat = planar_set(50, seed=3)
print(H.n, "homogeneous points;", flat.n, "coplanar points")
