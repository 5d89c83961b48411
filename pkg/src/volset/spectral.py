"""Fourier transforms of cell measures and their decay over dyadic annuli.

``mu_hat(xi) = sum_c w_c exp(-2 pi i c . xi)`` with ``c`` the cell centres.
Treating cells as atoms is only faithful for ``|xi|`` well below the inverse
cell size, so profiles refuse frequencies above ``1 / (2 * side)``.
"""
from dataclasses import dataclass, field
import math
import warnings

import numba
import numpy as np

from ._chunks import chunk_rng
from .errors import InvalidInputError
from .scaling import PowerLawFit, fit_power_law

# numba falls back to its own thread pool when TBB is too old; harmless.
warnings.filterwarnings("ignore", message="The TBB threading layer")

__all__ = [
    "mu_hat",
    "mu_hat_direct",
    "sphere_transform",
    "DecayProfile",
    "decay_profile",
    "salem_gap",
]


_BLOCK = 64


@numba.njit(parallel=True, cache=True)
def _mu_hat_kernel(centers, lengths, index, weights, xi, out_re, out_im):
    # Frequencies are processed in blocks so every cell is read once per
    # block; tables[a, i, q] = exp(-2 pi i xi_q[a] c_a[i]) for q in the block.
    d = index.shape[1]
    n = index.shape[0]
    width = centers.shape[1]
    m = xi.shape[0]
    n_blocks = (m + _BLOCK - 1) // _BLOCK
    two_pi = 2.0 * np.pi
    for b in numba.prange(n_blocks):
        q0 = b * _BLOCK
        nb = min(_BLOCK, m - q0)
        tre = np.empty((d, width, _BLOCK))
        tim = np.empty((d, width, _BLOCK))
        for a in range(d):
            for i in range(lengths[a]):
                for q in range(nb):
                    ph = -two_pi * xi[q0 + q, a] * centers[a, i]
                    tre[a, i, q] = np.cos(ph)
                    tim[a, i, q] = np.sin(ph)
        sre = np.zeros(_BLOCK)
        sim = np.zeros(_BLOCK)
        pre = np.empty(_BLOCK)
        pim = np.empty(_BLOCK)
        for c in range(n):
            w = weights[c]
            j0 = index[c, 0]
            for q in range(nb):
                pre[q] = w * tre[0, j0, q]
                pim[q] = w * tim[0, j0, q]
            for a in range(1, d):
                j = index[c, a]
                for q in range(nb):
                    r = pre[q] * tre[a, j, q] - pim[q] * tim[a, j, q]
                    pim[q] = pre[q] * tim[a, j, q] + pim[q] * tre[a, j, q]
                    pre[q] = r
            for q in range(nb):
                sre[q] += pre[q]
                sim[q] += pim[q]
        for q in range(nb):
            out_re[q0 + q] = sre[q]
            out_im[q0 + q] = sim[q]


def _center_tables(measure):
    lengths = np.array([len(a) for a in measure.axes], dtype=np.int64)
    table = np.zeros((measure.d, lengths.max()))
    for a, ax in enumerate(measure.axes):
        table[a, : ax.size] = ax + 0.5 * measure.side[a]
    return table, lengths


def _marginals(measure):
    """Per-axis weights if ``measure`` is a full tensor product, else ``None``."""
    lengths = [len(a) for a in measure.axes]
    if measure.n_cells != math.prod(lengths):
        return None
    margs = []
    for a, n in enumerate(lengths):
        m = np.bincount(measure.index[:, a], weights=measure.weights, minlength=n)
        if np.any(m <= 0):
            return None
        margs.append(m)
    prod = margs[0][measure.index[:, 0]]
    for a in range(1, measure.d):
        prod = prod * margs[a][measure.index[:, a]]
    if not np.allclose(prod, measure.weights, rtol=1e-12, atol=0):
        return None
    return margs


def _transform(measure):
    """Return ``f(xi_batch)`` evaluating the transform of ``measure``.

    Tensor-product measures (uniform grids, Cantor products) factor into
    one-dimensional sums; everything else goes through the blocked kernel.
    """
    table, lengths = _center_tables(measure)
    margs = _marginals(measure)
    if margs is not None:
        def separable(xi):
            out = np.ones(xi.shape[0], dtype=complex)
            for a, w in enumerate(margs):
                c = table[a, : lengths[a]]
                out *= np.exp(-2j * np.pi * np.outer(xi[:, a], c)) @ w
            return out
        return separable

    def blocked(xi):
        re = np.empty(xi.shape[0])
        im = np.empty(xi.shape[0])
        _mu_hat_kernel(table, lengths, measure.index, measure.weights,
                       np.ascontiguousarray(xi), re, im)
        return re + 1j * im
    return blocked


def mu_hat(measure, xi):
    """Fourier transform of ``measure`` at one frequency or an ``(M, d)`` batch.

    >>> from volset.setgen import point_mass
    >>> complex(mu_hat(point_mass([0.0, 0.0, 0.0]), [3.0, 1.0, 2.0]))
    (1+0j)
    """
    xi = np.asarray(xi, dtype=float)
    single = xi.ndim == 1
    xi2 = np.atleast_2d(xi)
    if xi2.shape[1] != measure.d:
        raise InvalidInputError(f"frequency must have dimension {measure.d}")
    out = _transform(measure)(xi2)
    return out[0] if single else out


def mu_hat_direct(measure, xi):
    """Plain numpy evaluation of the same sum, for cross-checking :func:`mu_hat`."""
    xi2 = np.atleast_2d(np.asarray(xi, dtype=float))
    phase = measure.centers() @ xi2.T
    out = measure.weights @ np.exp(-2j * np.pi * phase)
    return out[0] if np.ndim(xi) == 1 else out


def sphere_transform(xi, radius=0.5, center=(0.5, 0.5, 0.5)):
    """Closed-form transform of normalized surface measure on a sphere in R^3.

    ``exp(-2 pi i center . xi) * sin(2 pi r |xi|) / (2 pi r |xi|)``.
    """
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    rho = 2 * np.pi * radius * np.linalg.norm(xi, axis=1)
    radial = np.sinc(rho / np.pi)  # sin(rho)/rho, equal to 1 at rho = 0
    out = np.exp(-2j * np.pi * xi @ np.asarray(center, float)) * radial
    return out


@dataclass
class DecayProfile:
    """Per-annulus maxima of ``|mu_hat|`` and the power law fitted to them.

    ``radii[j]`` is the outer radius of annulus ``j``; ``fit.slope`` is the
    exponent ``beta`` in ``max|mu_hat| ~ R**beta`` and ``salem_exponent`` is
    ``-2 beta``.
    """

    exponents: list
    radii: list
    max_modulus: list
    samples: list
    fit: PowerLawFit
    base: float = 2.0
    mode: str = "annulus"
    params: dict = field(default_factory=dict)

    @property
    def salem_exponent(self):
        return -2.0 * self.fit.slope

    def rows(self):
        return list(zip(self.exponents, self.radii, self.max_modulus, self.samples))


def _annulus_frequencies(rng, d, radius, count):
    u = rng.standard_normal((count, d))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = rng.uniform(radius / 2.0, radius, size=count)
    return u * r[:, None]


def decay_profile(measure, j_max, samples_per_annulus=4096, seed=0, *,
                  base=2.0, directions=None, j_min=0, fit_from=2, transform=None):
    """Maximum of ``|mu_hat|`` over dyadic annuli ``|xi| in [R/2, R]``, ``R = base**j``.

    Parameters
    ----------
    measure : CellMeasure
    j_max : int
        Largest annulus exponent; ``base**j_max`` must not exceed the
        measure's aliasing limit ``1 / (2 * side)``.
    samples_per_annulus : int
        Random frequencies per annulus (directions uniform on the sphere,
        radius uniform in ``[R/2, R]``).  Annulus ``j`` draws from the stream
        seeded by ``(seed, j)``.
    directions : array_like, optional
        Fixed unit directions.  When given, the frequencies are exactly
        ``base**j * u`` for each direction ``u`` and no sampling happens;
        use this to probe construction-adapted frequencies such as
        ``3**j e_1`` for middle-thirds sets.
    fit_from : int
        Annuli with ``j < fit_from`` are reported but excluded from the fit.
    transform : callable, optional
        Evaluate this function of an ``(M, d)`` frequency batch instead of
        ``mu_hat(measure, .)``, e.g. a closed form, on exactly the same
        frequencies.
    """
    limit = measure.max_frequency()
    if base**j_max > limit * (1 + 1e-12):
        raise InvalidInputError(
            f"|xi| = {base**j_max:g} exceeds the aliasing limit {limit:g} of this measure"
        )
    if j_max - max(fit_from, j_min) < 2:
        raise InvalidInputError("need at least three annuli in the fitted range")
    if directions is not None:
        dirs = np.atleast_2d(np.asarray(directions, dtype=float))
        dirs = dirs / np.linalg.norm(dirs, axis=1, keepdims=True)
    if transform is None:
        transform = _transform(measure)
    js, radii, maxima, counts = [], [], [], []
    for j in range(j_min, j_max + 1):
        radius = float(base**j)
        if directions is None:
            xi = _annulus_frequencies(chunk_rng(seed, "annulus", j), measure.d,
                                      radius, samples_per_annulus)
        else:
            xi = radius * dirs
        vals = np.abs(transform(xi))
        js.append(j)
        radii.append(radius)
        maxima.append(float(min(vals.max(), 1.0)))
        counts.append(int(xi.shape[0]))
    sel = [i for i, j in enumerate(js) if j >= fit_from]
    fit = fit_power_law([radii[i] for i in sel], [maxima[i] for i in sel])
    return DecayProfile(
        exponents=js, radii=radii, max_modulus=maxima, samples=counts, fit=fit,
        base=float(base), mode="annulus" if directions is None else "directions",
        params={"j_max": j_max, "samples_per_annulus": samples_per_annulus, "seed": seed,
                "fit_from": fit_from, "aliasing_limit": limit},
    )


def salem_gap(measure, s, profile):
    """``(-2 * slope) - s``: non-negative up to tolerance for Salem-type decay.

    ``measure`` is only used to check that the profile belongs to it.
    """
    limit = profile.params.get("aliasing_limit")
    if limit is not None and not math.isclose(limit, measure.max_frequency()):
        raise InvalidInputError("profile was computed for a different measure")
    return profile.salem_exponent - float(s)
