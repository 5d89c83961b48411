"""JSON and CSV forms of point sets, measures and results.

Schemas
-------
PointSet JSON::

    {"type": "PointSet", "d": 3, "label": "...", "points": [[x, y, z], ...]}

CellMeasure JSON::

    {"type": "CellMeasure", "d": 3, "level": k, "side": [..], "origin": [..],
     "label": "...", "meta": {...}, "axes": [[lower coords of axis 0], ...],
     "cells": [[i0, i1, i2, weight], ...]}

CSV files carry a header row.  Floats are written with ``repr`` precision so
JSON round trips are exact.
"""
import csv
import json
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .setgen import CellMeasure, PointSet

__all__ = [
    "pointset_to_dict",
    "pointset_from_dict",
    "measure_to_dict",
    "measure_from_dict",
    "load_json",
    "dump_json",
    "to_jsonable",
    "write_csv",
    "pointset_to_csv",
    "pointset_from_csv",
    "volume_sample_to_csv",
    "volume_summary",
    "decay_profile_to_csv",
    "decay_profile_summary",
    "fit_to_csv",
    "fit_summary",
    "energy_reports_to_csv",
]


def to_jsonable(obj):
    """Recursively turn numpy scalars/arrays and tuples into plain JSON types."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    return obj


def dump_json(obj, path=None, **kw):
    text = json.dumps(to_jsonable(obj), indent=kw.pop("indent", 2), sort_keys=False, **kw)
    if path is not None:
        Path(path).write_text(text + "\n")
    return text


def pointset_to_dict(P):
    return {"type": "PointSet", "d": P.d, "label": P.label, "points": P.points.tolist()}


def pointset_from_dict(obj):
    if obj.get("type") != "PointSet":
        raise InvalidInputError("not a PointSet document")
    pts = np.asarray(obj["points"], dtype=float).reshape(-1, int(obj["d"]))
    return PointSet(pts, label=obj.get("label", ""))


def measure_to_dict(mu):
    cells = np.column_stack([mu.index.astype(float), mu.weights])
    rows = [[int(v) for v in r[:-1]] + [float(r[-1])] for r in cells]
    return {
        "type": "CellMeasure",
        "d": mu.d,
        "level": mu.level,
        "side": mu.side.tolist(),
        "origin": mu.origin.tolist(),
        "label": mu.label,
        "meta": to_jsonable(mu.meta),
        "axes": [a.tolist() for a in mu.axes],
        "cells": rows,
    }


def measure_from_dict(obj):
    if obj.get("type") != "CellMeasure":
        raise InvalidInputError("not a CellMeasure document")
    d = int(obj["d"])
    cells = obj["cells"]
    index = np.array([row[:d] for row in cells], dtype=np.int64)
    weights = np.array([row[d] for row in cells], dtype=float)
    return CellMeasure(
        level=int(obj["level"]),
        side=obj["side"],
        index=index,
        weights=weights,
        axes=tuple(np.asarray(a, float) for a in obj["axes"]),
        origin=obj.get("origin"),
        label=obj.get("label", ""),
        meta=obj.get("meta", {}),
    )


def load_json(path):
    """Load a PointSet or CellMeasure document."""
    obj = json.loads(Path(path).read_text())
    kind = obj.get("type")
    if kind == "PointSet":
        return pointset_from_dict(obj)
    if kind == "CellMeasure":
        return measure_from_dict(obj)
    raise InvalidInputError(f"{path}: unknown document type {kind!r}")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                        for v in row])


def pointset_to_csv(P, path):
    write_csv(path, [f"x{i}" for i in range(P.d)], P.points.tolist())


def pointset_from_csv(path, label=""):
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return PointSet(data, label=label or str(path))


def volume_sample_to_csv(v, path):
    write_csv(path, ["value"], ([x] for x in np.asarray(v.values, float)))


def volume_summary(v, tol=1e-9, delta=None):
    from .volumes import delta_separated_count, distinct_count

    vals = np.asarray(v.values, dtype=float)
    out = {
        "count": int(vals.size),
        "min": float(vals.min()),
        "max": float(vals.max()),
        "mode": v.mode,
        "source": v.source,
        "n_draws": v.n_draws,
        "seed": v.seed,
        "tol": tol,
        "distinct": distinct_count(v, tol),
        "delta_count_method": "greedy packing of sorted values",
    }
    if delta is not None:
        out["delta"] = delta
        out["delta_count"] = delta_separated_count(v, delta)
    return out


def decay_profile_to_csv(profile, path):
    write_csv(path, ["j", "R", "max_modulus", "samples"], profile.rows())


def decay_profile_summary(profile):
    return {
        "mode": profile.mode,
        "base": profile.base,
        "params": to_jsonable(profile.params),
        "fit": fit_summary(profile.fit),
        "salem_exponent": profile.salem_exponent,
        "note": "finite-resolution decay; sub-polynomial losses are absorbed in the tolerance",
    }


def fit_to_csv(fit, path):
    write_csv(path, ["log_x", "log_y"], fit.points)


def fit_summary(fit, verdict=None):
    out = {
        "slope": fit.slope,
        "intercept": fit.intercept,
        "max_residual": fit.max_residual,
        "stderr": fit.stderr,
        "predicted_slope": fit.predicted_slope,
        "dropped": list(fit.dropped),
        "notes": to_jsonable(fit.notes),
    }
    if verdict is not None:
        out["verdict"] = verdict
    return out


def energy_reports_to_csv(reports, path):
    write_csv(path, ["s", "value", "n", "C", "adaptable", "label"],
              ([r.s, r.value, r.n, r.C, r.adaptable, r.label] for r in reports))
