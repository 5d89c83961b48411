"""
Determinants, wedge vectors and the 3x3 decomposition
=====================================================

The volume of an ordered tuple is a signed determinant.  Fixing all but the
last vector leaves a linear functional, represented by the wedge vector.
"""

import numpy as np

from volset import cofactor_det3, decomposition_value, det, wedge_star

rng = np.random.default_rng(0)

# a batch of 5 random 3x3 tuples, one determinant each
tuples = rng.random((5, 3, 3))
print("det:", det(tuples))
print("numpy:", np.linalg.det(tuples))

# det(x, y, z) is the dot product of the wedge of (x, y) with z
x, y, z = tuples[0]
w = wedge_star([x, y])
print("wedge . z =", w @ z, " det =", det([x, y, z]))

# the wedge is orthogonal to the vectors that built it
print("w . x =", w @ x, " w . y =", w @ y)

# expansion along the middle vector, one cofactor per coordinate
print("cofactor form:", cofactor_det3(x, y, z))

# with y3 = 1 the determinant is affine in (y1, y2)
x, z = np.array([1.0, 2, 3]), np.array([4.0, 5, 6])
for y12 in ([0, 0], [1, 0], [0, 1], [2, 5]):
    print(y12, decomposition_value(x, y12, z), 3 * y12[0] - 6 * y12[1] + 3)
