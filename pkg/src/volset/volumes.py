"""Volume sets, wedge sets and bilinear value sets of finite configurations.

Volumes are signed determinants over ordered tuples with repetition, so
``0`` always belongs to the volume set of a non-empty configuration.
"""
from dataclasses import dataclass, field
import numpy as np

from ._chunks import CHUNK, map_chunks
from .algebra import det, wedge_star
from .errors import InvalidInputError, ResourceError, SingularInputError
from .setgen import CellMeasure, PointSet, vector_sampler

DEFAULT_TUPLE_BUDGET = 10**8

__all__ = [
    "VolumeSample",
    "volume_sample",
    "distinct_count",
    "delta_separated_count",
    "occupancy_measure",
    "wedge_sample",
    "bilinear_sample",
]


@dataclass
class VolumeSample:
    """Signed determinant values with their provenance.

    ``mode`` is ``"exhaustive"`` or ``"sampled"``; sampled runs record
    ``n_draws`` and ``seed``.
    """

    values: np.ndarray
    mode: str
    source: str = ""
    n_draws: int = None
    seed: int = None
    extra: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.values)

    def folded(self):
        """Copy with the sign dropped (unsigned volumes)."""
        return VolumeSample(np.abs(self.values), self.mode, self.source, self.n_draws,
                            self.seed, dict(self.extra, folded=True))


def _exhaustive_points(pts, budget, threads):
    n, d = pts.shape
    total = n**d
    if total > budget:
        raise ResourceError(
            f"{n}^{d} = {total} tuples exceed the exhaustive budget {budget}; use sampled mode"
        )
    # Outer loop over (d-1)-tuples in lexicographic order; the last index is
    # the inner axis, so values come out ordered by tuple index.
    n_heads = n ** (d - 1)

    def work(lo, hi, _rng):
        heads = np.stack(np.unravel_index(np.arange(lo, hi), (n,) * (d - 1)), axis=1)
        w = wedge_star(pts[heads])
        return (w @ pts.T).ravel()

    step = max(1, CHUNK // n)
    return np.concatenate(map_chunks(work, n_heads, 0, "exhaustive", threads, chunk=step))


def volume_sample(source, mode="exhaustive", n_draws=None, seed=None, *,
                  budget=DEFAULT_TUPLE_BUDGET, threads=1):
    """All (or ``n_draws`` random) ordered d-tuple determinants of a point set or measure.

    Parameters
    ----------
    source : PointSet or CellMeasure
        Measures only support sampled mode; their points are read relative
        to ``origin``.
    mode : {"exhaustive", "sampled"}
    n_draws, seed : int
        Required in sampled mode.  Tuples are i.i.d.: uniform points of a
        point set, or draws from the measure.
    budget : int
        Largest number of tuples enumerated in exhaustive mode.
    """
    label = getattr(source, "label", "")
    if mode == "exhaustive":
        if not isinstance(source, PointSet):
            raise InvalidInputError("exhaustive mode needs a finite PointSet")
        values = _exhaustive_points(source.points, budget, threads)
        return VolumeSample(values, "exhaustive", label)
    if mode != "sampled":
        raise InvalidInputError(f"unknown mode {mode!r}")
    if n_draws is None or n_draws < 1 or seed is None:
        raise InvalidInputError("sampled mode needs n_draws >= 1 and a seed")
    d = source.d
    draw = vector_sampler(source)

    def work(lo, hi, rng):
        return det(draw(rng, d * (hi - lo)).reshape(hi - lo, d, d))

    values = np.concatenate(map_chunks(work, n_draws, seed, "volumes", threads))
    return VolumeSample(values, "sampled", label, int(n_draws), int(seed))


def _values(v):
    vals = v.values if isinstance(v, VolumeSample) else np.asarray(v, dtype=float)
    return np.sort(np.asarray(vals, dtype=float).ravel())


def distinct_count(v, tol=0.0):
    """Number of clusters after merging sorted values whose gap is at most ``tol``."""
    if tol < 0:
        raise InvalidInputError("tol must be non-negative")
    vals = _values(v)
    if vals.size == 0:
        return 0
    return int(1 + np.count_nonzero(np.diff(vals) > tol))


def delta_separated_count(v, delta):
    """Largest number of values that are pairwise at least ``delta`` apart.

    A greedy sweep over the sorted values keeps a value whenever it is at
    least ``delta`` above the last kept one; this is optimal on the line.
    """
    if not delta > 0:
        raise InvalidInputError("delta must be positive")
    vals = _values(v)
    if vals.size == 0:
        return 0
    # Gaps within a relative 1e-9 of delta count as delta (decimal round-off).
    step = delta * (1 - 1e-9)
    count, pos = 1, 0
    while True:
        target = vals[pos] + step
        # a step lost to rounding still has to clear the current value
        side = "right" if target == vals[pos] else "left"
        i = int(np.searchsorted(vals, target, side=side))
        if i >= vals.size:
            return count
        count += 1
        pos = i


def occupancy_measure(v, bin_width):
    """Occupancy indicator: (occupied bins of width ``bin_width``) times ``bin_width``.

    Bins start at the smallest value.  This is a finite-sample proxy for a
    positive Lebesgue measure of the value set, never a computation of it.
    """
    if not bin_width > 0:
        raise InvalidInputError("bin_width must be positive")
    vals = _values(v)
    if vals.size == 0:
        raise InvalidInputError("occupancy of an empty sample is undefined")
    bins = np.floor((vals - vals[0]) / bin_width).astype(np.int64)
    return float(np.unique(bins).size * bin_width)


def wedge_sample(source, n_draws, seed, threads=1):
    """``n_draws`` samples of ``wedge_star(x^1, ..., x^(d-1))`` with i.i.d. ``x^j``.

    Returned as a point set in R^d; values are not clipped to the unit cube.
    """
    if n_draws < 1:
        raise InvalidInputError("n_draws must be at least 1")
    d = source.d
    draw = vector_sampler(source)

    def work(lo, hi, rng):
        return wedge_star(draw(rng, (d - 1) * (hi - lo)).reshape(hi - lo, d - 1, d))

    vals = np.concatenate(map_chunks(work, n_draws, seed, "wedge", threads))
    return PointSet(vals, label=f"wedge({getattr(source, 'label', '')}, n={n_draws}, seed={seed})")


def bilinear_sample(E, F, form, n_draws, seed, threads=1):
    """Sample ``x . (form y)`` with ``x`` from ``E`` and ``y`` from ``F`` independently."""
    form = np.asarray(form, dtype=float)
    d = E.d
    if F.d != d or form.shape != (d, d):
        raise InvalidInputError("E, F and the form must share the dimension d")
    if abs(np.linalg.det(form)) <= 1e-12:
        raise SingularInputError("the bilinear form must be non-degenerate")
    draw_x, draw_y = vector_sampler(E), vector_sampler(F)

    def work(lo, hi, rng):
        x = draw_x(rng, hi - lo)
        y = draw_y(rng, hi - lo)
        return np.einsum("ni,ni->n", x, y @ form.T)

    values = np.concatenate(map_chunks(work, n_draws, seed, "bilinear", threads))
    label = f"Q({getattr(E, 'label', '')}, {getattr(F, 'label', '')})"
    return VolumeSample(values, "sampled", label, int(n_draws), int(seed),
                        {"form": form.tolist()})
