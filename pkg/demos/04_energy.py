"""
Riesz energy and thickening
===========================

The s-energy of a finite set averages |p - q|^(-s) over ordered pairs of
distinct points.  A set is adaptable when that average stays below C.
"""

import numpy as np

from volset import discrete_energy, homogeneous_set, is_adaptable, thicken

pts = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
print("two points:", discrete_energy(pts, 2.6))

# halving every distance multiplies the energy by 2^s
print("scaled:", discrete_energy(pts / 2, 2.6) / discrete_energy(pts, 2.6), 2**2.6)

# for a jittered lattice the energy grows slowly with n
for n in (64, 512, 4096):
    rep = is_adaptable(homogeneous_set(n, 0.3, seed=71), 13 / 5, C=10)
    print(f"n = {n:5d}  energy {rep.value:7.3f}  adaptable at C=10: {rep.adaptable}")

# replace each point by a ball of radius n^(-1/s), mass split equally
mu = thicken(homogeneous_set(64, 0.2, seed=3), 2.6)
print(mu.n_cells, "cells at level", mu.level, "mass", mu.total_mass())
