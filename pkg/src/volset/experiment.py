"""Config-driven experiment runner.

A config is one JSON document::

    {
      "scenario": "thm7-desk",
      "seed": 7,
      "generator": {"type": "homogeneous", "n": 4096, "jitter": 0.3},
      "operations": [{"op": "volumes", "mode": "sampled", "n_draws": 10000000,
                      "delta_power": 0.3846153846153846}],
      "output": {"dir": null},
      "threads": 1, "budget_cells": 16777216, "budget_tuples": 100000000,
      "tolerances": {}
    }

:func:`materialize` fills every default in, and the report stores the
materialized copy, so a report never depends on implicit values.
"""
import copy
import json
import math
from pathlib import Path
import time

import numpy as np

from . import __version__
from .energy import is_adaptable
from .errors import ConfigError, InvalidInputError
from .scaling import box_dimension, fr_fit, smallness_fit
from .serialize import (
    decay_profile_summary,
    decay_profile_to_csv,
    dump_json,
    energy_reports_to_csv,
    fit_summary,
    fit_to_csv,
    load_json,
    measure_to_dict,
    pointset_to_csv,
    pointset_to_dict,
    to_jsonable,
    volume_sample_to_csv,
    volume_summary,
)
from .setgen import (
    DEFAULT_CELL_BUDGET,
    CantorSpec,
    CellMeasure,
    PointSet,
    annulus_filter,
    cantor_iterate,
    homogeneous_set,
    planar_set,
    point_mass,
    product_cantor,
    sample_measure,
    segment_set,
    sphere_measure,
    uniform_measure,
)
from .spectral import decay_profile, salem_gap
from .volumes import (
    DEFAULT_TUPLE_BUDGET,
    bilinear_sample,
    occupancy_measure,
    volume_sample,
    wedge_sample,
)

__all__ = ["materialize", "build_source", "run", "load_config", "SCENARIOS"]

_GENERATORS = {
    "cantor": {"pieces": 2, "ratio": None, "dimension": None, "offsets": None, "level": 6},
    "cantor_product": {"pieces": 2, "ratio": None, "dimension": None, "offsets": None,
                       "level": 6, "d": 3},
    "uniform": {"level": 6, "d": 3},
    "sphere": {"level": 7, "points_per_cell": 24},
    "homogeneous": {"n": 512, "jitter": 0.0, "d": 3},
    "planar": {"n": 100, "d": 3},
    "segment": {"n": 10000, "start": [0.1, 0.2, 0.3], "stop": [0.9, 0.7, 0.4]},
    "corners": {"d": 3},
    "basis": {"d": 3},
    "point_mass": {"point": [0.5, 0.5, 0.5]},
    "points": {"points": None},
    "file": {"path": None},
}

_DYADIC_LAMBDAS = [2.0**j for j in range(2, 10)]

_OPERATIONS = {
    "volumes": {"mode": "exhaustive", "n_draws": 1_000_000, "tol": 1e-9, "delta": None,
                "delta_power": None, "bin_width": None, "abs": False,
                "expect_degenerate": False, "min_delta_count": None},
    "energy": {"s": 2.6, "C": 10.0, "require_adaptable": False},
    "decay": {"j_max": None, "samples_per_annulus": 4096, "base": 2.0, "directions": None,
              "fit_from": 2, "s": None, "salem_range": None, "gap_max": None},
    "smallness": {"s": None, "lambdas": _DYADIC_LAMBDAS, "n_pairs": 1_000_000,
                  "slope_max": None, "slope_range": None},
    "fr-scan": {"s": None, "radii": [2.0**j for j in range(2, 9)], "n_quads": 1_000_000,
                "slope_max": None},
    "boxdim": {"source": "wedge", "n_draws": 1_000_000, "levels": list(range(1, 13)),
               "cap_fraction": 0.1, "slope_min": None},
    "occupancy-scan": {"levels": [4, 5, 6, 7], "n_draws": 1_000_000, "bin": "cell_side",
                       "max_relative_change": None, "min_shrink_factor": None},
    "bilinear": {"form": None, "n_draws": 1_000_000, "bin_width": 0.01},
}

_TOP = {"scenario": "unnamed", "seed": None, "generator": None, "operations": [],
        "output": {"dir": None}, "threads": 1, "budget_cells": DEFAULT_CELL_BUDGET,
        "budget_tuples": DEFAULT_TUPLE_BUDGET, "tolerances": {}}


def load_config(path):
    """Parse a config file; JSON syntax errors report line and column."""
    text = Path(path).read_text()
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: {exc.msg}", exc.lineno, exc.colno) from None


def _merge(defaults, given, where):
    unknown = set(given) - set(defaults)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {sorted(unknown)}")
    out = copy.deepcopy(defaults)
    out.update(copy.deepcopy(given))
    return out


def _similarity_dimension(gen):
    kind = gen["type"]
    if kind == "cantor_product":
        return gen["d"] * math.log(gen["pieces"]) / math.log(1.0 / gen["ratio"])
    if kind == "uniform":
        return float(gen["d"])
    if kind == "sphere":
        return 2.0
    if kind == "point_mass":
        return 0.0
    return None


def materialize(config):
    """Return a copy of ``config`` with every default written out."""
    if not isinstance(config, dict):
        raise ConfigError("config must be a JSON object")
    cfg = _merge(_TOP, config, "config")
    if cfg["seed"] is None:
        raise ConfigError("config: 'seed' is mandatory")
    if not isinstance(cfg["seed"], int) or cfg["seed"] < 0:
        raise ConfigError("config: 'seed' must be a non-negative integer")
    gen = cfg["generator"]
    if not isinstance(gen, dict) or gen.get("type") not in _GENERATORS:
        raise ConfigError(f"generator.type must be one of {sorted(_GENERATORS)}")
    kind = gen["type"]
    gen = _merge(dict(_GENERATORS[kind], type=kind, annulus=None), gen, "generator")
    if kind in ("cantor", "cantor_product"):
        if gen["ratio"] is None:
            if gen["dimension"] is None:
                raise ConfigError("generator: give 'ratio' or 'dimension'")
            gen["ratio"] = gen["pieces"] ** (-1.0 / gen["dimension"])
        spec = CantorSpec(gen["pieces"], gen["ratio"], gen["offsets"])
        gen["offsets"] = list(spec.offsets)
        gen["dimension"] = spec.dimension
    cfg["generator"] = gen
    ops = []
    for i, op in enumerate(cfg["operations"]):
        name = op.get("op") if isinstance(op, dict) else None
        if name not in _OPERATIONS:
            raise ConfigError(f"operations[{i}].op must be one of {sorted(_OPERATIONS)}")
        full = _merge(dict(_OPERATIONS[name], op=name), op, f"operations[{i}]")
        # tolerances: {"smallness": {"slope_max": -1.0}, ...} override bounds per op type
        full = _merge(full, cfg["tolerances"].get(name, {}), f"tolerances.{name}")
        if name in ("smallness", "fr-scan", "decay") and full["s"] is None:
            full["s"] = _similarity_dimension(gen)
            if full["s"] is None and name != "decay":
                raise ConfigError(f"operations[{i}]: 's' is required for {kind} generators")
        if name == "decay" and full["j_max"] is None:
            full["j_max"] = "auto"
        if name == "bilinear" and full["form"] is None:
            d = gen.get("d", 3)
            full["form"] = np.eye(d).tolist()
        ops.append(full)
    cfg["operations"] = ops
    cfg["output"] = _merge(_TOP["output"], cfg["output"] or {}, "output")
    return cfg


def build_source(gen, seed=0, budget_cells=None, level=None):
    """Instantiate the generator block of a materialized config."""
    kind = gen["type"]
    k = gen.get("level") if level is None else level
    if kind == "cantor":
        src = cantor_iterate(CantorSpec(gen["pieces"], gen["ratio"], gen["offsets"]), k,
                             budget_cells)
    elif kind == "cantor_product":
        spec = CantorSpec(gen["pieces"], gen["ratio"], gen["offsets"])
        src = product_cantor(spec, k, gen["d"], budget_cells)
    elif kind == "uniform":
        src = uniform_measure(k, gen["d"], budget_cells)
    elif kind == "sphere":
        src = sphere_measure(k, gen["points_per_cell"], budget_cells)
    elif kind == "homogeneous":
        src = homogeneous_set(gen["n"], gen["jitter"], seed, gen["d"])
    elif kind == "planar":
        src = planar_set(gen["n"], seed, gen["d"])
    elif kind == "segment":
        src = segment_set(gen["n"], gen["start"], gen["stop"], seed)
    elif kind == "corners":
        d = gen["d"]
        grid = np.stack(np.meshgrid(*[[0.0, 1.0]] * d, indexing="ij"), -1).reshape(-1, d)
        src = PointSet(grid, label=f"corners(d={d})")
    elif kind == "basis":
        src = PointSet(np.eye(gen["d"]), label=f"basis(d={gen['d']})")
    elif kind == "point_mass":
        src = point_mass(gen["point"])
    elif kind == "points":
        src = PointSet(np.asarray(gen["points"], float), label="points")
    elif kind == "file":
        src = load_json(gen["path"])
    else:  # pragma: no cover - materialize rejects unknown types
        raise ConfigError(f"unknown generator {kind!r}")
    if gen.get("annulus"):
        if not isinstance(src, CellMeasure):
            raise InvalidInputError("the annulus filter applies to cell measures only")
        inner, outer = gen["annulus"]
        src = annulus_filter(src, inner, outer)
    return src


def _verdict(check, value, bound, passed):
    return {"check": check, "value": to_jsonable(value), "bound": to_jsonable(bound),
            "passed": bool(passed)}


def _out(cfg, name):
    d = cfg["output"]["dir"]
    if d is None:
        return None
    p = Path(d)
    p.mkdir(parents=True, exist_ok=True)
    return p / name


def _op_volumes(src, op, cfg, tag):
    seed = cfg["seed"]
    v = volume_sample(src, op["mode"], op["n_draws"] if op["mode"] == "sampled" else None,
                      seed, budget=cfg["budget_tuples"], threads=cfg["threads"])
    if op["abs"]:
        v = v.folded()
    delta = op["delta"]
    verdicts = []
    if op["delta_power"] is not None:
        if not isinstance(src, PointSet):
            raise InvalidInputError("delta_power needs a finite point set (n = |P|)")
        delta = src.n ** (-op["delta_power"])
    summary = volume_summary(v, op["tol"], delta)
    if op["delta_power"] is not None:
        bound = src.n ** op["delta_power"]
        summary["delta_bound"] = bound
        verdicts.append(_verdict("delta_count >= n**delta_power", summary["delta_count"],
                                 bound, summary["delta_count"] >= bound))
    if op["min_delta_count"] is not None:
        verdicts.append(_verdict("delta_count >= min_delta_count", summary["delta_count"],
                                 op["min_delta_count"],
                                 summary["delta_count"] >= op["min_delta_count"]))
    if op["bin_width"] is not None:
        summary["occupancy_indicator"] = occupancy_measure(v, op["bin_width"])
        summary["occupancy_note"] = "occupancy indicator, not a measure computation"
    if op["expect_degenerate"]:
        width = op["bin_width"] or 1e-9
        occ = occupancy_measure(v, width)
        ok = bool(np.all(v.values == 0)) and math.isclose(occ, width)
        verdicts.append(_verdict("degenerate control (V = {0}, one occupied bin)",
                                 occ, width, ok))
        summary["verdict"] = "degenerate control " + ("passed" if ok else "failed")
    path = _out(cfg, f"{tag}_volumes.csv")
    if path:
        volume_sample_to_csv(v, path)
    return summary, verdicts


def _op_energy(src, op, cfg, tag):
    if not isinstance(src, PointSet):
        raise InvalidInputError("energy needs a finite point set")
    rep = is_adaptable(src, op["s"], op["C"])
    verdicts = []
    if op["require_adaptable"]:
        verdicts.append(_verdict("discrete energy <= C", rep.value, rep.C, rep.adaptable))
    path = _out(cfg, f"{tag}_energy.csv")
    if path:
        energy_reports_to_csv([rep], path)
    return rep.to_dict(), verdicts


def _op_decay(src, op, cfg, tag):
    if not isinstance(src, CellMeasure):
        raise InvalidInputError("decay needs a cell measure")
    j_max = op["j_max"]
    if j_max == "auto":
        j_max = int(math.floor(math.log(src.max_frequency()) / math.log(op["base"]) + 1e-9))
        op["j_max"] = j_max  # the report's config echo shows the resolved value
    prof = decay_profile(src, j_max, op["samples_per_annulus"], cfg["seed"], base=op["base"],
                         directions=op["directions"], fit_from=op["fit_from"])
    summary = decay_profile_summary(prof)
    summary["rows"] = [list(r) for r in prof.rows()]
    verdicts = []
    if op["s"] is not None:
        summary["salem_gap"] = salem_gap(src, op["s"], prof)
    if op["salem_range"] is not None:
        lo, hi = op["salem_range"]
        verdicts.append(_verdict("salem exponent in range", prof.salem_exponent,
                                 [lo, hi], lo <= prof.salem_exponent <= hi))
    if op["gap_max"] is not None:
        verdicts.append(_verdict("salem_gap < gap_max", summary["salem_gap"], op["gap_max"],
                                 summary["salem_gap"] < op["gap_max"]))
    path = _out(cfg, f"{tag}_decay.csv")
    if path:
        decay_profile_to_csv(prof, path)
    return summary, verdicts


def _slope_verdicts(fit, op):
    verdicts = []
    if op.get("slope_max") is not None:
        verdicts.append(_verdict("slope <= slope_max", fit.slope, op["slope_max"],
                                 fit.slope <= op["slope_max"]))
    if op.get("slope_range") is not None:
        lo, hi = op["slope_range"]
        verdicts.append(_verdict("slope in range", fit.slope, [lo, hi], lo <= fit.slope <= hi))
    if op.get("slope_min") is not None:
        verdicts.append(_verdict("slope >= slope_min", fit.slope, op["slope_min"],
                                 fit.slope >= op["slope_min"]))
    return verdicts


def _op_smallness(src, op, cfg, tag):
    fit = smallness_fit(src, op["s"], op["lambdas"], op["n_pairs"], cfg["seed"],
                        cfg["threads"])
    verdicts = _slope_verdicts(fit, op)
    path = _out(cfg, f"{tag}_smallness.csv")
    if path:
        fit_to_csv(fit, path)
    return fit_summary(fit, verdicts), verdicts


def _op_fr(src, op, cfg, tag):
    fit = fr_fit(src, op["s"], op["radii"], op["n_quads"], cfg["seed"], cfg["threads"])
    verdicts = _slope_verdicts(fit, op)
    path = _out(cfg, f"{tag}_fr.csv")
    if path:
        fit_to_csv(fit, path)
    return fit_summary(fit, verdicts), verdicts


def _op_boxdim(src, op, cfg, tag):
    if op["source"] == "wedge":
        pts = wedge_sample(src, op["n_draws"], cfg["seed"], cfg["threads"])
    elif op["source"] == "sample":
        pts = sample_measure(src, op["n_draws"], cfg["seed"], cfg["threads"])
    elif op["source"] == "points":
        pts = src
    else:
        raise ConfigError(f"boxdim.source must be wedge, sample or points, not {op['source']!r}")
    fit = box_dimension(pts, op["levels"], op["cap_fraction"])
    fit.notes["caveat"] = "box dimension bounds Hausdorff dimension from above"
    verdicts = _slope_verdicts(fit, op)
    path = _out(cfg, f"{tag}_boxdim.csv")
    if path:
        fit_to_csv(fit, path)
    return fit_summary(fit, verdicts), verdicts


def _op_occupancy_scan(src, op, cfg, tag):
    gen = cfg["generator"]
    rows = []
    for k in op["levels"]:
        mu = build_source(gen, cfg["seed"], cfg["budget_cells"], level=k)
        v = volume_sample(mu, "sampled", op["n_draws"], cfg["seed"], threads=cfg["threads"])
        if op["bin"] == "cell_side":
            width = float(mu.side.max())
        else:
            width = float(op["bin"]) ** k if op["bin"] < 1 else 2.0**-k
        rows.append({"level": k, "bin_width": width, "occupancy": occupancy_measure(v, width)})
    first, last = rows[0]["occupancy"], rows[-1]["occupancy"]
    values = [r["occupancy"] for r in rows]
    summary = {
        "rows": rows,
        "label": "occupancy indicator (finite-sample proxy, not a measure computation)",
        "relative_change": (max(values) - min(values)) / max(values),
        "shrink_factor": first / last,
    }
    verdicts = []
    if op["max_relative_change"] is not None:
        verdicts.append(_verdict("occupancy stable across levels", summary["relative_change"],
                                 op["max_relative_change"],
                                 summary["relative_change"] <= op["max_relative_change"]))
    if op["min_shrink_factor"] is not None:
        verdicts.append(_verdict("occupancy shrinks across levels", summary["shrink_factor"],
                                 op["min_shrink_factor"],
                                 summary["shrink_factor"] >= op["min_shrink_factor"]))
    return summary, verdicts


def _op_bilinear(src, op, cfg, tag):
    v = bilinear_sample(src, src, op["form"], op["n_draws"], cfg["seed"], cfg["threads"])
    summary = volume_summary(v)
    summary["occupancy_indicator"] = occupancy_measure(v, op["bin_width"])
    return summary, []


_DISPATCH = {
    "volumes": _op_volumes,
    "energy": _op_energy,
    "decay": _op_decay,
    "smallness": _op_smallness,
    "fr-scan": _op_fr,
    "boxdim": _op_boxdim,
    "occupancy-scan": _op_occupancy_scan,
    "bilinear": _op_bilinear,
}


def generate(cfg):
    """Build the generator of a config and write it to the output directory."""
    cfg = materialize(cfg)
    src = build_source(cfg["generator"], cfg["seed"], cfg["budget_cells"])
    path = _out(cfg, "source.json")
    if path:
        doc = pointset_to_dict(src) if isinstance(src, PointSet) else measure_to_dict(src)
        dump_json(doc, path, indent=None)
        if isinstance(src, PointSet):
            pointset_to_csv(src, _out(cfg, "source.csv"))
    return src, cfg


def run(config):
    """Execute the operation chain of ``config`` and return the report dict.

    The numerical part of the report (``results`` and ``verdicts``) depends
    only on the materialized config.
    """
    cfg = materialize(config)
    t0 = time.perf_counter()
    src = build_source(cfg["generator"], cfg["seed"], cfg["budget_cells"])
    results, verdicts = [], []
    for i, op in enumerate(cfg["operations"]):
        tag = f"{i:02d}_{op['op']}"
        summary, vs = _DISPATCH[op["op"]](src, op, cfg, tag)
        results.append({"op": op["op"], "result": to_jsonable(summary)})
        verdicts.extend(dict(v, op=op["op"], index=i) for v in vs)
    report = {
        "version": __version__,
        "config": cfg,
        "source": getattr(src, "label", ""),
        "results": results,
        "verdicts": verdicts,
        "passed": all(v["passed"] for v in verdicts),
        "wall_clock_s": time.perf_counter() - t0,
    }
    path = _out(cfg, "report.json")
    if path:
        dump_json(report, path)
    return to_jsonable(report)


SCENARIOS = {
    "thm7-desk": {
        "scenario": "thm7-desk",
        "seed": 7,
        "generator": {"type": "homogeneous", "n": 4096, "jitter": 0.3},
        "operations": [
            {"op": "energy", "s": 2.6, "C": 10.0},
            {"op": "volumes", "mode": "sampled", "n_draws": 10_000_000,
             "delta_power": 5.0 / 13.0},
        ],
    },
    "planar-control": {
        "scenario": "planar-control",
        "seed": 3,
        "generator": {"type": "planar", "n": 40},
        "operations": [{"op": "volumes", "mode": "exhaustive", "bin_width": 0.01,
                        "expect_degenerate": True}],
    },
    "lemma-annulus": {
        "scenario": "lemma-annulus",
        "seed": 11,
        "generator": {"type": "uniform", "level": 6, "annulus": [0.5, 1.0]},
        "operations": [{"op": "smallness", "slope_range": [-2.3, -1.7]}],
    },
    "fr-cantor": {
        "scenario": "fr-cantor",
        "seed": 13,
        "generator": {"type": "cantor_product", "dimension": 0.9, "level": 7},
        "operations": [{"op": "fr-scan", "n_quads": 10_000_000, "slope_max": -1.4},
                       {"op": "boxdim", "slope_min": 1.4}],
    },
    "sphere-decay": {
        "scenario": "sphere-decay",
        "seed": 5,
        "generator": {"type": "sphere", "level": 9},
        "operations": [{"op": "decay", "salem_range": [1.7, 2.3]}],
    },
}
