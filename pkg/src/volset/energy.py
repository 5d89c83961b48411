"""Discrete Riesz energies, s-adaptability and thickening of point sets."""
from dataclasses import asdict, dataclass
import math

import numpy as np

from .errors import InvalidInputError, SingularInputError
from .setgen import DEFAULT_CELL_BUDGET, CellMeasure, PointSet, _dyadic, _check_budget

__all__ = [
    "EnergyReport",
    "discrete_energy",
    "energy_unordered",
    "is_adaptable",
    "thicken",
]

_ROWS = 256


@dataclass
class EnergyReport:
    s: float
    value: float
    n: int
    C: float
    adaptable: bool
    label: str = ""

    def to_dict(self):
        return asdict(self)


def _pts(P):
    return P.points if isinstance(P, PointSet) else np.asarray(P, dtype=float)


def _block_sums(pts, s, upper_only):
    n = pts.shape[0]
    sums = []
    for lo in range(0, n, _ROWS):
        hi = min(lo + _ROWS, n)
        diff = pts[lo:hi, None, :] - pts[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        rows = np.arange(lo, hi)[:, None]
        cols = np.arange(n)[None, :]
        mask = cols > rows if upper_only else cols != rows
        dist = dist[mask]
        if np.any(dist == 0):
            raise SingularInputError("duplicate points give infinite energy")
        sums.append(np.sum(dist ** (-s)))
    return math.fsum(sums)


def discrete_energy(P, s):
    """``n**-2 * sum_{p != p'} |p - p'|**-s`` over ordered pairs.

    The double sum is cut into fixed row blocks, each block summed pairwise
    by numpy and the block sums combined with ``math.fsum``, so the value does
    not depend on how the work is split.

    Raises
    ------
    SingularInputError
        If two points coincide.
    """
    if not s > 0:
        raise InvalidInputError("s must be positive")
    pts = _pts(P)
    n = pts.shape[0]
    if n < 2:
        return 0.0
    return _block_sums(pts, float(s), upper_only=False) / n**2


def energy_unordered(P, s):
    """Same quantity from unordered pairs, doubled."""
    pts = _pts(P)
    n = pts.shape[0]
    if n < 2:
        return 0.0
    return 2.0 * _block_sums(pts, float(s), upper_only=True) / n**2


def is_adaptable(P, s, C=10.0):
    """Compare the discrete energy with the declared constant ``C``."""
    value = discrete_energy(P, s)
    return EnergyReport(s=float(s), value=value, n=int(_pts(P).shape[0]), C=float(C),
                        adaptable=bool(value <= C), label=getattr(P, "label", ""))


def thicken(P, s, budget=None):
    """Spread mass ``1/n`` uniformly over the ball of radius ``n**(-1/s)`` about each point.

    The balls are rasterized on the dyadic grid of level ``k`` with
    ``2**-k <= n**(-1/s) < 2**(-k+1)``.  A cell receives the fraction of its
    volume inside the ball, estimated from ``4**d`` subsample points, and
    each ball is renormalized to mass ``1/n`` after clipping to ``[0,1]^d``.
    Overlapping balls add.
    """
    pts = _pts(P)
    n, d = pts.shape
    if n < 1:
        raise InvalidInputError("cannot thicken an empty set")
    if not 0 < s <= d:
        raise InvalidInputError(f"s must lie in (0, {d}]")
    radius = n ** (-1.0 / s)
    k = max(0, math.ceil(math.log2(n) / s - 1e-12))
    side = 2.0**-k
    grid = 2**k
    _check_budget(grid**d, budget if budget is not None else DEFAULT_CELL_BUDGET)

    span = int(math.ceil(radius / side)) + 1
    offs = np.stack(np.meshgrid(*[np.arange(-span, span + 1)] * d, indexing="ij"), -1)
    offs = offs.reshape(-1, d)
    sub = (np.stack(np.meshgrid(*[np.arange(4)] * d, indexing="ij"), -1).reshape(-1, d)
           + 0.5) / 4.0

    ids, wts = [], []
    for p in pts:
        home = np.minimum(np.floor(p / side).astype(np.int64), grid - 1)
        cells = home + offs
        inside = np.all((cells >= 0) & (cells < grid), axis=1)
        cells = cells[inside]
        probe = (cells[:, None, :] + sub[None, :, :]) * side
        frac = (np.linalg.norm(probe - p, axis=2) <= radius).mean(axis=1)
        keep = frac > 0
        if not keep.any():
            raise InvalidInputError(f"ball about {p} misses the unit cube")
        ids.append(cells[keep])
        wts.append(frac[keep] / frac[keep].sum() / n)
    ids = np.concatenate(ids)
    wts = np.concatenate(wts)
    lin = np.ravel_multi_index(ids.T, (grid,) * d)
    uniq, inv = np.unique(lin, return_inverse=True)
    w = np.bincount(inv.ravel(), weights=wts)
    index = np.stack(np.unravel_index(uniq, (grid,) * d), axis=1)
    return _dyadic(k, index, w / w.sum(), d, f"thicken({getattr(P, 'label', '')}, s={s:g})",
                   {"generator": "thicken", "s": float(s), "n": int(n), "radius": radius})
