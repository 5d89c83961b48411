"""Point sets, cell measures and their generators.

A :class:`CellMeasure` is a probability measure made of axis-aligned boxes.
Box ``c`` has lower corner ``(axes[0][index[c, 0]], ..., axes[d-1][index[c, d-1]])``
and side lengths ``side``; inside a box the mass is spread uniformly.  Cantor
iterates use boxes aligned to the construction (side ``r**k``), everything
else uses the dyadic grid (side ``2**-k``).

Vector-valued statistics (volumes, wedges) read a point ``x`` as the vector
``x - origin``.  ``origin`` is zero unless :func:`annulus_filter` recentred
the measure.
"""
from dataclasses import dataclass, field
import math

import numpy as np

from ._chunks import CHUNK, map_chunks
from .errors import GeneratorError, InvalidInputError, ResourceError

DEFAULT_CELL_BUDGET = 1 << 24

__all__ = [
    "PointSet",
    "CellMeasure",
    "CantorSpec",
    "cantor_dimension",
    "cantor_iterate",
    "product_measure",
    "product_cantor",
    "uniform_measure",
    "point_mass",
    "annulus_filter",
    "to_dyadic",
    "sample_measure",
    "draw_points",
    "homogeneous_set",
    "planar_set",
    "segment_set",
    "sphere_measure",
    "vector_sampler",
]


@dataclass(frozen=True)
class PointSet:
    """A finite configuration of points, stored as an ``(n, d)`` array."""

    points: np.ndarray
    label: str = ""

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] < 2:
            raise InvalidInputError("points must have shape (n, d) with d >= 2")
        if not np.all(np.isfinite(pts)):
            raise InvalidInputError("points must be finite")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def n(self):
        return self.points.shape[0]

    @property
    def d(self):
        return self.points.shape[1]

    def in_unit_cube(self):
        return bool(np.all((self.points >= 0) & (self.points <= 1)))

    def diameter(self):
        from scipy.spatial.distance import pdist

        if self.n < 2:
            return 0.0
        if self.n > 4000:
            from scipy.spatial import ConvexHull

            hull = self.points[ConvexHull(self.points).vertices]
            return float(pdist(hull).max())
        return float(pdist(self.points).max())

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class CellMeasure:
    """Probability measure carried by a finite family of boxes.

    Attributes
    ----------
    level : int
        Construction depth ``k``.
    side : ndarray, shape (d,)
        Box side length along each axis (zero gives atoms).
    index : ndarray of int, shape (N, d)
        Integer multi-index of each box.
    weights : ndarray, shape (N,)
        Positive masses summing to one.
    axes : tuple of ndarray
        ``axes[a][i]`` is the lower coordinate of boxes with ``index[:, a] == i``.
    origin : ndarray, shape (d,)
        Base point used when points are read as vectors.
    label : str
    meta : dict
        Generator parameters (used for refinement and reports).
    """

    level: int
    side: np.ndarray
    index: np.ndarray
    weights: np.ndarray
    axes: tuple
    origin: np.ndarray = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        index = np.asarray(self.index, dtype=np.int64)
        if index.ndim != 2 or index.shape[0] == 0:
            raise InvalidInputError("index must be a non-empty (N, d) integer array")
        d = index.shape[1]
        weights = np.asarray(self.weights, dtype=float)
        if weights.shape != (index.shape[0],):
            raise InvalidInputError("one weight per cell is required")
        if np.any(weights <= 0) or not np.all(np.isfinite(weights)):
            raise InvalidInputError("cell weights must be positive and finite")
        if abs(weights.sum() - 1.0) > 1e-9:
            raise InvalidInputError(f"weights sum to {weights.sum()!r}, not 1")
        side = np.broadcast_to(np.asarray(self.side, dtype=float), (d,)).copy()
        if np.any(side < 0):
            raise InvalidInputError("cell side must be non-negative")
        axes = tuple(np.asarray(a, dtype=float) for a in self.axes)
        if len(axes) != d:
            raise InvalidInputError("one axis table per dimension is required")
        for a in range(d):
            if index[:, a].min() < 0 or index[:, a].max() >= len(axes[a]):
                raise InvalidInputError(f"index out of range on axis {a}")
        origin = np.zeros(d) if self.origin is None else np.asarray(self.origin, float)
        for arr in (index, weights, side, origin, *axes):
            arr.setflags(write=False)
        object.__setattr__(self, "index", index)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "side", side)
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "origin", origin)

    @property
    def d(self):
        return self.index.shape[1]

    @property
    def n_cells(self):
        return self.index.shape[0]

    def lower(self):
        return np.stack([self.axes[a][self.index[:, a]] for a in range(self.d)], axis=1)

    def centers(self):
        return self.lower() + 0.5 * self.side

    def total_mass(self):
        return float(self.weights.sum())

    def max_frequency(self):
        """Largest |xi| at which cell centres still resolve the measure."""
        s = float(self.side.max())
        return math.inf if s == 0 else 0.5 / s

    def in_unit_cube(self):
        lo = self.lower()
        return bool(np.all(lo >= -1e-12) and np.all(lo + self.side <= 1 + 1e-12))

    def is_uniform(self):
        return bool(np.all(self.weights == self.weights[0]))


def _check_budget(count, budget, what="cells"):
    budget = DEFAULT_CELL_BUDGET if budget is None else budget
    if count > budget:
        raise ResourceError(f"{count} {what} exceed the budget of {budget}")


@dataclass(frozen=True)
class CantorSpec:
    """Self-similar Cantor set: ``pieces`` copies scaled by ``ratio``.

    ``offsets`` are the left endpoints of the surviving first-generation
    intervals; by default they are spread evenly from 0 to ``1 - ratio``.
    """

    pieces: int
    ratio: float
    offsets: tuple = None

    def __post_init__(self):
        m, r = int(self.pieces), float(self.ratio)
        if m < 2:
            raise GeneratorError("a Cantor set needs at least 2 pieces")
        if not 0 < r <= 1.0 / m + 1e-15:
            raise GeneratorError(f"ratio must lie in (0, 1/{m}], got {r}")
        offs = self.offsets
        if offs is None:
            offs = tuple(i * (1 - r) / (m - 1) for i in range(m))
        offs = tuple(float(o) for o in offs)
        if len(offs) != m:
            raise GeneratorError("one offset per piece is required")
        if offs[0] < -1e-15 or offs[-1] > 1 - r + 1e-12:
            raise GeneratorError("offsets must lie in [0, 1 - ratio]")
        if any(b - a < r - 1e-12 for a, b in zip(offs, offs[1:])):
            raise GeneratorError("pieces must be increasing and disjoint")
        object.__setattr__(self, "pieces", m)
        object.__setattr__(self, "ratio", r)
        object.__setattr__(self, "offsets", offs)

    @classmethod
    def with_dimension(cls, dim, pieces=2):
        """Evenly spaced Cantor set of similarity dimension ``dim``."""
        if not 0 < dim <= 1:
            raise GeneratorError("similarity dimension must lie in (0, 1]")
        return cls(pieces, pieces ** (-1.0 / dim))

    @classmethod
    def middle_thirds(cls):
        return cls(2, 1.0 / 3.0, (0.0, 2.0 / 3.0))

    @property
    def dimension(self):
        return cantor_dimension(self)

    def to_dict(self):
        return {"pieces": self.pieces, "ratio": self.ratio, "offsets": list(self.offsets)}


def cantor_dimension(spec):
    """Similarity dimension ``log m / log(1/r)``."""
    return math.log(spec.pieces) / math.log(1.0 / spec.ratio)


def cantor_iterate(spec, k, budget=None):
    """Level-``k`` iterate of a Cantor set carrying its natural measure.

    Returns a one-dimensional :class:`CellMeasure` with ``m**k`` cells of
    length ``r**k`` and mass ``m**-k`` each.
    """
    if k < 0:
        raise GeneratorError("level must be non-negative")
    m, r = spec.pieces, spec.ratio
    _check_budget(m**k, budget)
    corners = np.zeros(1)
    offs = np.asarray(spec.offsets)
    for j in range(k):
        corners = (corners[:, None] + offs[None, :] * r**j).ravel()
    n = corners.size
    return CellMeasure(
        level=k,
        side=[r**k],
        index=np.arange(n)[:, None],
        weights=np.full(n, 1.0 / n),
        axes=(corners,),
        label=f"cantor(m={m},r={r:.6g},k={k})",
        meta={"generator": "cantor", "spec": spec.to_dict()},
    )


def _refine(measure, level, budget):
    spec = measure.meta.get("spec") if measure.meta.get("generator") == "cantor" else None
    if spec is None:
        raise InvalidInputError(
            f"cannot refine {measure.label or 'measure'} from level {measure.level} to {level}"
        )
    return cantor_iterate(CantorSpec(**spec), level, budget)


def product_measure(*factors, budget=None):
    """Product of one-dimensional cell measures (e.g. ``B1 x B2 x B3``).

    Factors at a lower level are refined to the highest level when they are
    Cantor iterates; otherwise differing levels are rejected.
    """
    if len(factors) < 2:
        raise InvalidInputError("a product needs at least two factors")
    if any(f.d != 1 for f in factors):
        raise InvalidInputError("product factors must be one-dimensional")
    level = max(f.level for f in factors)
    factors = [f if f.level == level else _refine(f, level, budget) for f in factors]
    _check_budget(math.prod(f.n_cells for f in factors), budget)
    grids = np.meshgrid(*[np.arange(f.n_cells) for f in factors], indexing="ij")
    ids = [g.ravel() for g in grids]
    weights = np.ones(ids[0].size)
    for f, i in zip(factors, ids):
        weights = weights * f.weights[i]
    index = np.stack([f.index[i, 0] for f, i in zip(factors, ids)], axis=1)
    return CellMeasure(
        level=level,
        side=[f.side[0] for f in factors],
        index=index,
        weights=weights / weights.sum(),
        axes=tuple(f.axes[0] for f in factors),
        label=" x ".join(f.label for f in factors),
        meta={"generator": "product", "factors": [f.meta for f in factors]},
    )


def product_cantor(spec, k, d=3, budget=None):
    """``d``-fold product of a Cantor iterate with itself."""
    specs = spec if isinstance(spec, (list, tuple)) else [spec] * d
    return product_measure(*[cantor_iterate(s, k, budget) for s in specs], budget=budget)


def _dyadic(level, index, weights, d, label, meta):
    axis = np.arange(2**level) / 2.0**level
    return CellMeasure(
        level=level,
        side=[2.0**-level] * d,
        index=index,
        weights=weights,
        axes=(axis,) * d,
        label=label,
        meta=meta,
    )


def uniform_measure(k, d=3, budget=None):
    """Lebesgue measure on ``[0,1]^d`` as ``2**(k d)`` dyadic cells."""
    _check_budget(2 ** (k * d), budget)
    grids = np.meshgrid(*[np.arange(2**k)] * d, indexing="ij")
    index = np.stack([g.ravel() for g in grids], axis=1)
    n = index.shape[0]
    return _dyadic(k, index, np.full(n, 1.0 / n), d, f"uniform(d={d},k={k})",
                   {"generator": "uniform", "k": k, "d": d})


def point_mass(point):
    """Dirac mass at ``point`` (a single cell of side zero)."""
    p = np.asarray(point, dtype=float)
    return CellMeasure(
        level=0,
        side=np.zeros(p.size),
        index=np.zeros((1, p.size), dtype=np.int64),
        weights=[1.0],
        axes=tuple(np.array([c]) for c in p),
        label=f"point_mass({', '.join(f'{c:g}' for c in p)})",
        meta={"generator": "point_mass", "point": p.tolist()},
    )


def annulus_filter(measure, inner=0.5, outer=1.0):
    """Recentre ``[0,1]^d`` at its midpoint and keep cells in an annulus.

    Cells whose centre has distance outside ``[inner, outer]`` from
    ``(1/2, ..., 1/2)`` are dropped and the rest renormalized.  The returned
    measure has ``origin = (1/2, ..., 1/2)``.
    """
    mid = np.full(measure.d, 0.5)
    r = np.linalg.norm(measure.centers() - mid, axis=1)
    keep = (r >= inner) & (r <= outer)
    if not keep.any():
        raise GeneratorError("annulus filter removed every cell")
    w = measure.weights[keep]
    meta = dict(measure.meta, annulus=[inner, outer])
    return CellMeasure(
        level=measure.level,
        side=measure.side,
        index=measure.index[keep],
        weights=w / w.sum(),
        axes=measure.axes,
        origin=mid,
        label=f"{measure.label} | annulus[{inner:g},{outer:g}]",
        meta=meta,
    )


def to_dyadic(measure, level, budget=None):
    """Move each cell's mass to the dyadic cell of side ``2**-level`` holding its centre."""
    _check_budget(measure.n_cells, budget)
    idx = np.floor(measure.centers() * 2**level).astype(np.int64)
    idx = np.clip(idx, 0, 2**level - 1)
    uniq, inv = np.unique(idx, axis=0, return_inverse=True)
    w = np.bincount(inv.ravel(), weights=measure.weights)
    return _dyadic(level, uniq, w / w.sum(), measure.d, f"{measure.label} -> dyadic({level})",
                   dict(measure.meta, dyadic=level))


def draw_points(measure, rng, count):
    """``count`` i.i.d. points from ``measure`` using generator ``rng``."""
    if measure.is_uniform():
        cells = rng.integers(measure.n_cells, size=count)
    else:
        cdf = np.cumsum(measure.weights)
        cells = np.searchsorted(cdf, rng.random(count) * cdf[-1], side="right")
        np.minimum(cells, measure.n_cells - 1, out=cells)
    u = rng.random((count, measure.d))
    idx = measure.index[cells]
    out = np.empty((count, measure.d))
    for a in range(measure.d):
        out[:, a] = measure.axes[a][idx[:, a]] + u[:, a] * measure.side[a]
    return out


def sample_measure(measure, n, seed, threads=1):
    """Draw ``n`` points: a cell with probability equal to its weight, then uniform inside it."""
    if n < 1:
        raise InvalidInputError("n must be at least 1")
    parts = map_chunks(lambda lo, hi, rng: draw_points(measure, rng, hi - lo),
                       n, seed, "sample", threads)
    return PointSet(np.concatenate(parts), label=f"sample({measure.label}, n={n}, seed={seed})")


def homogeneous_set(n, jitter=0.0, seed=0, d=3):
    """Jittered lattice: ``m**d`` cell centres with ``m = floor(n**(1/d))``.

    Each coordinate is moved by at most ``jitter / m``.  The actual number of
    points is ``PointSet.n`` (``n`` is rounded down to a perfect d-th power).
    """
    if not 0 <= jitter < 0.5:
        raise GeneratorError("jitter must lie in [0, 1/2)")
    m = int(round(n ** (1.0 / d)))
    while m**d > n:
        m -= 1
    while (m + 1) ** d <= n:
        m += 1
    if m < 1:
        raise GeneratorError("n is too small for a lattice")
    grids = np.meshgrid(*[(np.arange(m) + 0.5) / m] * d, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    if jitter > 0:
        rng = np.random.default_rng([int(seed), 0x4E0])
        pts = pts + rng.uniform(-jitter / m, jitter / m, size=pts.shape)
    return PointSet(pts, label=f"homogeneous(n={m**d},jitter={jitter:g},seed={seed})")


def planar_set(n, seed=0, d=3):
    """``n`` random points of ``[0,1]^d`` on the hyperplane ``x_d = 0``.

    The hyperplane passes through the origin, so every determinant formed
    from these points vanishes.
    """
    if n < 1:
        raise GeneratorError("n must be at least 1")
    rng = np.random.default_rng([int(seed), 0x91A])
    pts = np.zeros((n, d))
    pts[:, : d - 1] = rng.random((n, d - 1))
    return PointSet(pts, label=f"planar(n={n},seed={seed})")


def segment_set(n, start, stop, seed=0):
    """``n`` uniform random points on the segment from ``start`` to ``stop``."""
    rng = np.random.default_rng([int(seed), 0x5E6])
    a, b = np.asarray(start, float), np.asarray(stop, float)
    t = rng.random(n)[:, None]
    return PointSet(a + t * (b - a), label=f"segment(n={n},seed={seed})")


_GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))


def _sphere_counts(k, points_per_cell):
    """Count Fibonacci-lattice points of the radius-1/2 sphere per dyadic cell.

    Returns (unique linear cell ids, counts, total points).  The lattice is
    equal-area, so counts / total approximate surface-area fractions.
    """
    side = 2**k
    n_pts = int(points_per_cell * 1.5 * math.pi * side * side)
    ids, counts = [], []
    for lo in range(0, n_pts, 4 * CHUNK):
        i = np.arange(lo, min(lo + 4 * CHUNK, n_pts), dtype=float)
        z = 1.0 - (2.0 * i + 1.0) / n_pts
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        phi = i * _GOLDEN_ANGLE
        xyz = np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1)
        cell = np.floor((0.5 + 0.5 * xyz) * side).astype(np.int64)
        np.clip(cell, 0, side - 1, out=cell)
        lin = (cell[:, 0] * side + cell[:, 1]) * side + cell[:, 2]
        u, c = np.unique(lin, return_counts=True)
        ids.append(u)
        counts.append(c)
    ids = np.concatenate(ids)
    counts = np.concatenate(counts)
    u, inv = np.unique(ids, return_inverse=True)
    return u, np.bincount(inv.ravel(), weights=counts), n_pts


def sphere_measure(k, points_per_cell=24, budget=None):
    """Normalized surface measure of the sphere of radius 1/2 centred in ``[0,1]^3``.

    Cell weights approximate the area fraction of the sphere inside each
    dyadic cell of side ``2**-k``.  Areas are estimated with an equal-area
    Fibonacci lattice and then averaged over the 48 symmetries of the cube,
    which the exact area fractions share.
    """
    if k < 1:
        raise GeneratorError("sphere_measure needs k >= 1")
    side = 2**k
    _check_budget(int(2 * math.pi * side * side), budget)
    lin, counts, _ = _sphere_counts(k, points_per_cell)
    cells = np.stack([lin // (side * side), (lin // side) % side, lin % side], axis=1)

    # Orbit representative: fold each axis to the lower half, then sort.
    folded = np.sort(np.minimum(cells, side - 1 - cells), axis=1)
    key = (folded[:, 0] * side + folded[:, 1]) * side + folded[:, 2]
    keys, inv = np.unique(key, return_inverse=True)
    orbit_mass = np.bincount(inv.ravel(), weights=counts)
    reps = np.stack([keys // (side * side), (keys // side) % side, keys % side], axis=1)

    images = []
    for perm in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)):
        p = reps[:, perm]
        for flips in range(8):
            img = p.copy()
            for a in range(3):
                if flips >> a & 1:
                    img[:, a] = side - 1 - img[:, a]
            images.append(img)
    owner = np.tile(np.arange(keys.size), len(images))
    images = np.concatenate(images)
    img_lin = (images[:, 0] * side + images[:, 1]) * side + images[:, 2]
    uniq_lin, first = np.unique(img_lin, return_index=True)
    uniq_owner = owner[first]
    orbit_size = np.bincount(uniq_owner, minlength=keys.size)
    weights = orbit_mass[uniq_owner] / orbit_size[uniq_owner]
    index = np.stack(
        [uniq_lin // (side * side), (uniq_lin // side) % side, uniq_lin % side], axis=1
    )
    return _dyadic(k, index, weights / weights.sum(), 3, f"sphere(k={k})",
                   {"generator": "sphere", "k": k, "points_per_cell": points_per_cell})


def vector_sampler(source):
    """Return ``draw(rng, count)`` producing i.i.d. vectors from a measure or point set.

    Measures are read relative to their ``origin``; point sets are sampled
    uniformly with replacement.
    """
    if isinstance(source, CellMeasure):
        origin = source.origin
        if np.any(origin != 0):
            return lambda rng, count: draw_points(source, rng, count) - origin
        return lambda rng, count: draw_points(source, rng, count)
    if isinstance(source, PointSet):
        pts = source.points
        return lambda rng, count: pts[rng.integers(pts.shape[0], size=count)]
    raise InvalidInputError(f"expected a CellMeasure or PointSet, got {type(source).__name__}")

