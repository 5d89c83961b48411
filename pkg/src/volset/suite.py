"""Acceptance and smoke suites.

Each criterion is a function ``(preset) -> (passed, details)``; the runner
times it and compares against its runtime limit.  The smoke preset shrinks
sample sizes so the whole suite finishes in well under a minute.
"""
from dataclasses import asdict, dataclass, field
import itertools
import math
import time

import numpy as np

from .algebra import cofactor_det3, decomposition_value, det, wedge_star
from .energy import discrete_energy, is_adaptable
from .scaling import box_dimension, fr_fit, smallness_fit
from .setgen import (
    CantorSpec,
    PointSet,
    annulus_filter,
    homogeneous_set,
    planar_set,
    product_cantor,
    sphere_measure,
    uniform_measure,
)
from .spectral import decay_profile, salem_gap, sphere_transform
from .volumes import (
    delta_separated_count,
    distinct_count,
    occupancy_measure,
    volume_sample,
    wedge_sample,
)

__all__ = ["CriterionResult", "PRESETS", "CRITERIA", "run_suite", "SUITES"]

PRESETS = {
    "acceptance": {
        "tuples": 10_000,
        "smallness_pairs": 1_000_000,
        "fr_quads": 10_000_000,
        "wedge_draws": 1_000_000,
        "sphere_level": 9,
        "sphere_j_max": 8,
        "sphere_samples": 4096,
        "thm7_sizes": (512, 4096),
        "thm7_draws": 10_000_000,
        "occupancy_draws": 1_000_000,
        "occupancy_levels": (4, 5, 6, 7),
    },
    "smoke": {
        "tuples": 10_000,
        "smallness_pairs": 200_000,
        "fr_quads": 1_000_000,
        "wedge_draws": 200_000,
        "sphere_level": 7,
        "sphere_j_max": 6,
        "sphere_samples": 256,
        "thm7_sizes": (512,),
        "thm7_draws": 1_000_000,
        "occupancy_draws": 200_000,
        "occupancy_levels": (4, 5, 6),
    },
}
SUITES = tuple(PRESETS)

_CANTOR_09 = CantorSpec.with_dimension(0.9)
_CANTOR_04 = CantorSpec.with_dimension(0.4)
_DYADIC = [2.0**j for j in range(2, 10)]


@dataclass
class CriterionResult:
    id: int
    title: str
    passed: bool
    runtime_s: float
    limit_s: float
    details: dict = field(default_factory=dict)

    @property
    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] C{self.id:<2d} {self.title} ({self.runtime_s:.1f}s / {self.limit_s:g}s)"

    def to_dict(self):
        return asdict(self)


def c1_wedge_identity(p):
    rng = np.random.default_rng([1, 3])
    errs = {}
    for d in (3, 4):
        x = rng.standard_normal((p["tuples"], d, d))
        errs[d] = float(np.abs(det(x) - np.einsum("ni,ni->n", wedge_star(x[:, :-1]), x[:, -1])).max())
    return max(errs.values()) < 1e-9, {"max_abs_error": errs, "bound": 1e-9}


def c2_decomposition(p):
    rng = np.random.default_rng([2, 3])
    n = p["tuples"]
    x = rng.uniform(-1, 1, (2 * n, 3))
    x = x[np.abs(x[:, 2]) > 1e-3][:n]
    y12 = rng.uniform(-1, 1, (n, 2))
    z = rng.uniform(-1, 1, (n, 3))
    y = np.column_stack([y12, np.ones(n)])
    ref = np.linalg.det(np.stack([x, y, z], axis=1))
    dec = float(np.abs(decomposition_value(x, y12, z) - ref).max())
    cof = float(np.abs(cofactor_det3(x, y, z) - ref).max())
    return max(dec, cof) < 1e-12, {"decomposition_max_error": dec, "cofactor_max_error": cof,
                                   "bound": 1e-12}


def c3_smallness(p):
    seed, pairs = 31, p["smallness_pairs"]
    shell = annulus_filter(uniform_measure(6), 0.5, 1.0)
    a = smallness_fit(shell, 3.0, _DYADIC, pairs, seed)
    cantor = product_cantor(_CANTOR_09, 7)
    b = smallness_fit(cantor, 3 * _CANTOR_09.dimension, _DYADIC, pairs, seed)
    ok = -2.3 <= a.slope <= -1.7 and b.slope <= -1.3
    return ok, {"annulus_slope": a.slope, "annulus_range": [-2.3, -1.7],
                "cantor_slope": b.slope, "cantor_bound": -1.3,
                "cantor_predicted": b.predicted_slope}


def c4_fr(p):
    mu = product_cantor(_CANTOR_09, 7)
    fit = fr_fit(mu, 2.7, [2.0**j for j in range(2, 9)], p["fr_quads"], 41)
    return fit.slope <= -1.4, {"slope": fit.slope, "bound": -1.4,
                               "predicted": fit.predicted_slope,
                               "estimates": fit.notes["estimates"]}


def c5_boxdim(p):
    mu = product_cantor(_CANTOR_09, 7)
    fit = box_dimension(wedge_sample(mu, p["wedge_draws"], 51))
    return fit.slope >= 1.4, {"box_dimension": fit.slope, "bound": 1.4,
                              "levels": fit.notes["levels"]}


def c6_salem(p):
    mu = sphere_measure(p["sphere_level"])
    kw = dict(samples_per_annulus=p["sphere_samples"], seed=61)
    prof = decay_profile(mu, p["sphere_j_max"], **kw)
    oracle = decay_profile(mu, p["sphere_j_max"], transform=sphere_transform, **kw)
    m, o = np.array(prof.max_modulus), np.array(oracle.max_modulus)
    rel = float(np.max(np.abs(m - o) / o))
    exp_gap = abs(prof.salem_exponent - oracle.salem_exponent)

    cantor = product_cantor(CantorSpec.middle_thirds(), 6)
    ctrl = decay_profile(cantor, 5, base=3.0, directions=[[1.0, 0.0, 0.0]])
    gap = salem_gap(cantor, 3 * CantorSpec.middle_thirds().dimension, ctrl)
    ok = (1.7 <= prof.salem_exponent <= 2.3 and rel <= 0.15 and exp_gap <= 0.2
          and gap < -0.5)
    return ok, {"salem_exponent": prof.salem_exponent, "range": [1.7, 2.3],
                "oracle_exponent": oracle.salem_exponent,
                "max_relative_maxima_gap": rel, "oracle_bounds": [0.15, 0.2],
                "cantor_salem_gap": gap, "gap_bound": -0.5}


def c7_thm7(p):
    rows, ok = [], True
    for n in p["thm7_sizes"]:
        P = homogeneous_set(n, 0.3, seed=71)
        rep = is_adaptable(P, 13 / 5, C=10.0)
        v = volume_sample(P, "sampled", p["thm7_draws"], 72)
        count = delta_separated_count(v, n ** (-5 / 13))
        bound = math.ceil(n ** (5 / 13))
        rows.append({"n": n, "energy": rep.value, "C": 10.0, "adaptable": rep.adaptable,
                     "delta_count": count, "bound": bound})
        ok &= rep.adaptable and count >= bound
    return ok, {"rows": rows}


def _occupancy(dim_spec, levels, draws):
    out = []
    for k in levels:
        mu = product_cantor(dim_spec, k)
        v = volume_sample(mu, "sampled", draws, 11)
        out.append(occupancy_measure(v, float(mu.side.max())))
    return out


def c8_occupancy(p):
    big = _occupancy(_CANTOR_09, p["occupancy_levels"], p["occupancy_draws"])
    small = _occupancy(_CANTOR_04, p["occupancy_levels"], p["occupancy_draws"])
    change = (max(big) - min(big)) / max(big)
    shrink = small[0] / small[-1]
    return change <= 0.25 and shrink >= 2.0, {
        "indicator": "occupancy indicator, not a measure computation",
        "dim_0.9": big, "relative_change": change, "change_bound": 0.25,
        "dim_0.4": small, "shrink_factor": shrink, "shrink_bound": 2.0}


def c9_degenerate(p):
    planar = volume_sample(planar_set(40, seed=91), "exhaustive")
    corners = PointSet(np.array(list(itertools.product([0.0, 1.0], repeat=3))))
    values = volume_sample(corners, "exhaustive").values
    # Oracle: integer Leibniz expansion over every ordered triple.
    verts = list(itertools.product([0, 1], repeat=3))
    brute = set()
    for t in itertools.product(verts, repeat=3):
        brute.add(sum(
            (-1) ** sum(1 for i in range(3) for j in range(i + 1, 3) if s[i] > s[j])
            * t[0][s[0]] * t[1][s[1]] * t[2][s[2]]
            for s in itertools.permutations(range(3))))
    got = sorted({float(v) for v in values})
    ok = (bool(np.all(planar.values == 0)) and distinct_count(values) == 5
          and got == sorted(float(b) for b in brute))
    return ok, {"planar_nonzero": int(np.count_nonzero(planar.values)),
                "corner_values": got, "oracle_values": sorted(brute)}


def c10_energy_units(p):
    pair = np.array([[0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
    unit = {s: discrete_energy(pair, s) for s in (0.5, 1.0, 2.6, 3.0)}
    P = np.random.default_rng([10, 3]).random((60, 3))
    ratio = {s: discrete_energy(P / 2, s) / (2**s * discrete_energy(P, s)) - 1
             for s in (0.5, 1.3, 2.6)}
    ok = (all(abs(v - 0.5) <= 1e-12 for v in unit.values())
          and all(abs(r) <= 1e-12 for r in ratio.values()))
    return ok, {"two_point_energy": unit, "scaling_relative_error": ratio}


CRITERIA = [
    (1, "wedge identity det = x^d . *(x^1 ^ ... ^ x^(d-1))", 1.0, c1_wedge_identity),
    (2, "planar decomposition and cofactor form", 1.0, c2_decomposition),
    (3, "wedge smallness power law", 120.0, c3_smallness),
    (4, "F^R power law", 600.0, c4_fr),
    (5, "box dimension of the wedge set", 120.0, c5_boxdim),
    (6, "Salem decay of the sphere, Cantor control", 120.0, c6_salem),
    (7, "separated volumes of homogeneous sets", 300.0, c7_thm7),
    (8, "occupancy indicators across resolution", 300.0, c8_occupancy),
    (9, "degenerate controls", 1.0, c9_degenerate),
    (10, "energy unit values and scaling", 1.0, c10_energy_units),
]


def run_suite(name, only=None, echo=None):
    """Run every criterion of suite ``name``; returns a list of :class:`CriterionResult`.

    The runtime limit applies to the acceptance preset only.
    """
    if name not in PRESETS:
        raise KeyError(name)
    preset = PRESETS[name]
    results = []
    for cid, title, limit, fn in CRITERIA:
        if only is not None and cid not in only:
            continue
        t0 = time.perf_counter()
        passed, details = fn(preset)
        dt = time.perf_counter() - t0
        if name == "acceptance" and dt > limit:
            details["runtime_exceeded"] = True
            passed = False
        res = CriterionResult(cid, title, bool(passed), dt, limit, details)
        results.append(res)
        if echo:
            echo(res.line)
    return results
