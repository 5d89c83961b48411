"""
Smallness, F^R and box dimension
================================

Monte Carlo estimates of how often wedges are short, how often
determinants are tiny, and how many dyadic boxes a sample meets.
"""

from volset import (
    CantorSpec,
    annulus_filter,
    box_dimension,
    fr_fit,
    product_cantor,
    smallness_fit,
    uniform_measure,
    wedge_sample,
)

lambdas = [2.0**j for j in range(2, 10)]

shell = annulus_filter(uniform_measure(5), 0.5, 1.0)
fit = smallness_fit(shell, 3.0, lambdas, 300_000, seed=5)
print("shell: slope", round(fit.slope, 3), "predicted", fit.predicted_slope)

mu = product_cantor(CantorSpec.with_dimension(0.9), 6)
fit = smallness_fit(mu, 2.7, lambdas, 300_000, seed=5)
print("cantor: slope", round(fit.slope, 3), "predicted", fit.predicted_slope)

radii = [2.0**j for j in range(2, 8)]
fit = fr_fit(mu, 2.7, radii, 300_000, seed=6)
print("F^R: slope", round(fit.slope, 3), "predicted", fit.predicted_slope)

# the box-counting slope of a finite sample bounds the dimension from above
W = wedge_sample(mu, 300_000, seed=7)
fit = box_dimension(W)
print("wedge set box dimension about", round(fit.slope, 2), "levels", fit.notes["levels"])
