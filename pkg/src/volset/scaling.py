"""Dyadic scaling laws measured by Monte Carlo, and box counting.

Every estimator here returns probabilities under products of a measure
with itself.  Scans over several thresholds reuse one sample, so estimates
along a scan are exactly monotone.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ._chunks import map_chunks
from .algebra import wedge_star
from .errors import InvalidInputError, ResourceError
from .setgen import CellMeasure, PointSet, vector_sampler

__all__ = [
    "PowerLawFit",
    "fit_power_law",
    "wedge_smallness",
    "smallness_scan",
    "smallness_exhaustive",
    "smallness_fit",
    "fR_measure",
    "fr_scan",
    "fr_exhaustive",
    "fr_fit",
    "box_counts",
    "box_dimension",
    "is_monotone",
]


@dataclass
class PowerLawFit:
    """Least-squares line through ``(log x, log y)``.

    ``dropped`` lists the ``x`` values whose ``y`` was zero and could not
    enter the fit.
    """

    points: list
    slope: float
    intercept: float
    max_residual: float
    stderr: float = float("nan")
    dropped: list = field(default_factory=list)
    predicted_slope: float = None
    notes: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "slope": self.slope,
            "intercept": self.intercept,
            "max_residual": self.max_residual,
            "stderr": self.stderr,
            "predicted_slope": self.predicted_slope,
            "dropped": list(self.dropped),
            "points": [list(p) for p in self.points],
            "notes": dict(self.notes),
        }


def fit_power_law(x, y, predicted_slope=None, log_x=None):
    """Fit ``y ~ C x**slope``.

    Zero (or negative) ``y`` values are dropped and recorded.  ``log_x``
    may be passed to fit against a precomputed abscissa (box counting uses
    ``k log 2``).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lx = np.log(x) if log_x is None else np.asarray(log_x, dtype=float)
    ok = y > 0
    dropped = x[~ok].tolist()
    if ok.sum() < 3:
        raise InvalidInputError(
            f"a power-law fit needs at least 3 positive values, got {int(ok.sum())}"
        )
    lx, ly = lx[ok], np.log(y[ok])
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    sxx = float(((lx - lx.mean()) ** 2).sum())
    stderr = math.sqrt(float((resid**2).sum()) / (lx.size - 2) / sxx) if sxx > 0 else math.nan
    return PowerLawFit(
        points=list(zip(lx.tolist(), ly.tolist())),
        slope=float(slope),
        intercept=float(intercept),
        max_residual=float(np.abs(resid).max()),
        stderr=stderr,
        dropped=dropped,
        predicted_slope=predicted_slope,
    )


def is_monotone(estimates, n, sigmas=3.0):
    """True when ``estimates`` never increase by more than ``sigmas`` binomial standard errors."""
    p = np.asarray(estimates, dtype=float)
    se = np.sqrt(np.maximum(p * (1 - p), 1.0 / n) / n)
    return bool(np.all(np.diff(p) <= sigmas * np.hypot(se[1:], se[:-1])))


def _wedge_norms(draw, rng, count, d):
    vecs = draw(rng, count * (d - 1)).reshape(count, d - 1, d)
    return np.linalg.norm(wedge_star(vecs), axis=1)


def smallness_scan(source, lambdas, n_pairs, seed, threads=1):
    """Estimate ``mu^(d-1){ |x^1 ^ ... ^ x^(d-1)| <= 1/lambda }`` for each lambda.

    One sample of ``n_pairs`` independent (d-1)-tuples serves every lambda.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if np.any(lambdas < 1):
        raise InvalidInputError("lambda must be >= 1")
    d = source.d
    draw = vector_sampler(source)
    thresholds = 1.0 / lambdas

    def work(lo, hi, rng):
        norms = _wedge_norms(draw, rng, hi - lo, d)
        return np.array([(norms <= t).sum() for t in thresholds], dtype=np.int64)

    counts = np.sum(map_chunks(work, n_pairs, seed, "smallness", threads), axis=0)
    return counts / float(n_pairs)


def wedge_smallness(source, lam, n_pairs, seed, threads=1):
    """Monte Carlo estimate of the measure of ``{|x^1 ^ ... ^ x^(d-1)| <= 1/lam}``."""
    return float(smallness_scan(source, [lam], n_pairs, seed, threads)[0])


def _atoms(measure):
    return measure.centers() - measure.origin, measure.weights


def smallness_exhaustive(measure, lambdas, max_cells=10_000):
    """Exact smallness probabilities for the atomic measure at the cell centres (d = 3).

    Enumerates all ordered cell pairs; used to cross-check the sampler on
    small measures.
    """
    if measure.d != 3:
        raise InvalidInputError("exhaustive smallness is implemented for d = 3")
    if measure.n_cells > max_cells:
        raise ResourceError(f"{measure.n_cells} cells exceed the exhaustive limit {max_cells}")
    pts, w = _atoms(measure)
    thresholds = 1.0 / np.asarray(lambdas, dtype=float)
    out = np.zeros(thresholds.size)
    for i in range(pts.shape[0]):
        norms = np.linalg.norm(np.cross(pts[i], pts), axis=1)
        out += w[i] * np.array([w[norms <= t].sum() for t in thresholds])
    return out


def smallness_fit(source, s, lambdas, n_pairs, seed, threads=1):
    """Power law of the smallness probability in lambda; predicted slope ``d - 2 - s``.

    The prediction is an upper bound on the true exponent, not an equality.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    if lambdas.size < 4:
        raise InvalidInputError("need at least four lambda values")
    ratios = lambdas[1:] / lambdas[:-1]
    if not np.allclose(ratios, 2.0):
        raise InvalidInputError("lambda grid must be dyadic (consecutive ratio 2)")
    est = smallness_scan(source, lambdas, n_pairs, seed, threads)
    fit = fit_power_law(lambdas, est, predicted_slope=source.d - 2 - float(s))
    fit.notes.update(
        estimates=est.tolist(), lambdas=lambdas.tolist(), n_pairs=int(n_pairs), seed=seed,
        monotone=is_monotone(est, n_pairs),
        degenerate=bool(np.all(est == est[0])),
    )
    return fit


def fr_scan(source, radii, n_quads, seed, threads=1):
    """Estimate ``mu^4{ |x^1 ^ x^2 - y^1 ^ y^2| < 1/R }`` for each ``R`` (d = 3).

    One sample of ``n_quads`` independent quadruples serves every ``R``.
    """
    radii = np.asarray(radii, dtype=float)
    if np.any(radii <= 0):
        raise InvalidInputError("R must be positive")
    d = source.d
    draw = vector_sampler(source)
    thresholds = 1.0 / radii

    def work(lo, hi, rng):
        count = hi - lo
        v = draw(rng, 2 * (d - 1) * count).reshape(count, 2, d - 1, d)
        gap = np.linalg.norm(wedge_star(v[:, 0]) - wedge_star(v[:, 1]), axis=1)
        return np.array([(gap < t).sum() for t in thresholds], dtype=np.int64)

    counts = np.sum(map_chunks(work, n_quads, seed, "fR", threads), axis=0)
    return counts / float(n_quads)


def fR_measure(source, R, n_quads, seed, threads=1):
    """Monte Carlo estimate of the F^R pair probability at one ``R``."""
    return float(fr_scan(source, [R], n_quads, seed, threads)[0])


def fr_exhaustive(measure, radii, max_atoms=1_000_000):
    """Exact F^R probabilities for the atomic measure at the cell centres.

    The wedge of every ordered cell pair becomes a weighted atom; pairs of
    atoms closer than ``1/R`` are counted with a k-d tree.  Distances equal
    to ``1/R`` count as close.
    """
    from scipy.spatial import cKDTree

    if measure.n_cells**2 > max_atoms:
        raise ResourceError(f"{measure.n_cells ** 2} wedge atoms exceed {max_atoms}")
    pts, w = _atoms(measure)
    i, j = np.meshgrid(np.arange(pts.shape[0]), np.arange(pts.shape[0]), indexing="ij")
    atoms = wedge_star(np.stack([pts[i.ravel()], pts[j.ravel()]], axis=1))
    aw = (w[i] * w[j]).ravel()
    tree = cKDTree(atoms)
    r = 1.0 / np.asarray(radii, dtype=float)
    order = np.argsort(r)
    counts = tree.count_neighbors(tree, r[order], weights=(aw, aw), cumulative=True)
    out = np.empty(r.size)
    out[order] = counts
    return out


def fr_fit(source, s, radii, n_quads, seed, threads=1):
    """Power law of the F^R probability in ``R``; in R^3 the predicted slope is ``9 - 4s``."""
    radii = np.asarray(radii, dtype=float)
    est = fr_scan(source, radii, n_quads, seed, threads)
    predicted = 9 - 4 * float(s) if source.d == 3 else None
    fit = fit_power_law(radii, est, predicted_slope=predicted)
    fit.notes.update(
        estimates=est.tolist(), radii=radii.tolist(), n_quads=int(n_quads), seed=seed,
        monotone=is_monotone(est, n_quads),
    )
    return fit


def box_counts(points, levels):
    """Number of occupied cells of side ``2**-k`` for each ``k`` in ``levels``."""
    pts = points.points if isinstance(points, PointSet) else np.asarray(points, float)
    out = []
    for k in levels:
        cells = np.floor(pts * 2.0**k).astype(np.int64)
        cells -= cells.min(axis=0)
        width = cells.max(axis=0) + 1
        if np.prod(width.astype(float)) < 2.0**62:
            lin = np.ravel_multi_index(cells.T, width)
            out.append(int(np.unique(lin).size))
        else:
            out.append(int(np.unique(cells, axis=0).shape[0]))
    return np.array(out, dtype=np.int64)


def box_dimension(points, levels=range(1, 13), cap_fraction=0.1, min_points=1000):
    """Box-counting dimension: slope of ``log N_k`` against ``k log 2``.

    Levels whose count exceeds ``cap_fraction * n`` are discarded (the sample
    no longer resolves those cells); the cap is recorded in ``notes``.
    The result bounds the Hausdorff dimension from above, so a lower bound
    verified this way is weaker evidence than the corresponding theorem.
    """
    pts = points.points if isinstance(points, PointSet) else np.asarray(points, float)
    n = pts.shape[0]
    if n < min_points:
        raise InvalidInputError(f"box counting needs at least {min_points} points, got {n}")
    levels = np.asarray(list(levels), dtype=int)
    counts = box_counts(pts, levels)
    if np.all(counts < 2):
        raise InvalidInputError("fewer than two occupied cells at every level")
    keep = (counts <= cap_fraction * n) & (counts >= 2)
    if keep.sum() < 3:
        raise InvalidInputError("fewer than three usable levels after the sample-size cap")
    fit = fit_power_law(2.0 ** levels[keep], counts[keep], log_x=levels[keep] * math.log(2))
    capped = levels[~keep & (counts > cap_fraction * n)]
    fit.notes.update(
        levels=levels[keep].tolist(), counts=counts[keep].tolist(), n=int(n),
        cap=float(cap_fraction * n), level_cap=int(capped.min()) if capped.size else None,
    )
    return fit
