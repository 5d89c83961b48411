"""Command line entry point.

::

    volset run --scenario thm7-desk --out results/
    volset volumes --generator '{"type": "homogeneous", "n": 512}' --seed 1 --set delta=0.1
    volset suite smoke

Exit status: 0 all verdicts passed, 1 a verdict failed, 2 usage or input
error, 3 resource budget exceeded.
"""
import argparse
import json
import sys

from . import __version__
from .errors import ConfigError, VolsetError
from .experiment import SCENARIOS, generate, load_config, run
from .serialize import dump_json
from .suite import SUITES, run_suite

_OPS = {
    "volumes": "volumes",
    "energy": "energy",
    "decay": "decay",
    "smallness": "smallness",
    "fr-scan": "fr-scan",
    "boxdim": "boxdim",
}


def _common(p):
    p.add_argument("--config", metavar="PATH", help="JSON experiment config")
    p.add_argument("--seed", type=int, help="overrides the config seed")
    p.add_argument("--out", metavar="DIR", help="directory for CSV/JSON artifacts")
    p.add_argument("--threads", type=int, help="worker threads (results do not depend on it)")
    p.add_argument("--budget-cells", type=int, metavar="N")
    p.add_argument("--budget-tuples", type=int, metavar="N")


def build_parser():
    parser = argparse.ArgumentParser(prog="volset", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"volset {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="build a point set or measure and write it out")
    _common(p)
    p.add_argument("--generator", metavar="JSON", help="inline generator spec")

    for name in _OPS:
        p = sub.add_parser(name, help=f"run the {name} operation on one generator")
        _common(p)
        p.add_argument("--generator", metavar="JSON", help="inline generator spec")
        p.add_argument("--set", action="append", default=[], metavar="KEY=JSON",
                       help="operation parameter, value parsed as JSON (repeatable)")

    p = sub.add_parser("run", help="run a full config or a built-in scenario")
    _common(p)
    p.add_argument("--scenario", choices=sorted(SCENARIOS))

    p = sub.add_parser("suite", help="run the acceptance or smoke suite")
    p.add_argument("name", choices=SUITES)
    p.add_argument("--only", metavar="IDS", help="comma-separated criterion numbers")
    p.add_argument("--out", metavar="DIR", help="write suite.json here")
    return parser


def _parse_set(items):
    out = {}
    for item in items:
        key, sep, raw = item.partition("=")
        if not sep:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        try:
            out[key] = json.loads(raw)
        except json.JSONDecodeError:
            out[key] = raw
    return out


def _config_from_args(args):
    if getattr(args, "scenario", None):
        cfg = json.loads(json.dumps(SCENARIOS[args.scenario]))
    elif args.config:
        cfg = load_config(args.config)
    else:
        cfg = {}
    if getattr(args, "generator", None):
        try:
            cfg["generator"] = json.loads(args.generator)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--generator: {exc.msg}", exc.lineno, exc.colno) from None
    if args.command in _OPS:
        op = _OPS[args.command]
        found = [o for o in cfg.get("operations", []) if o.get("op") == op]
        base = found[0] if found else {"op": op}
        cfg["operations"] = [dict(base, **_parse_set(args.set))]
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.out is not None:
        cfg.setdefault("output", {})["dir"] = args.out
    for key in ("threads", "budget_cells", "budget_tuples"):
        value = getattr(args, key)
        if value is not None:
            cfg[key] = value
    cfg.setdefault("scenario", args.command)
    return cfg


def _suite(args):
    only = None
    if args.only:
        only = {int(x) for x in args.only.split(",")}
    results = run_suite(args.name, only=only, echo=print)
    failed = [r.id for r in results if not r.passed]
    summary = {"suite": args.name, "version": __version__,
               "passed": not failed, "failed": failed,
               "criteria": [r.to_dict() for r in results]}
    if args.out:
        from pathlib import Path

        Path(args.out).mkdir(parents=True, exist_ok=True)
        dump_json(summary, Path(args.out) / "suite.json")
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 1 if failed else 0


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "suite":
            return _suite(args)
        cfg = _config_from_args(args)
        if args.command == "generate":
            src, full = generate(cfg)
            print(dump_json({"config": full, "label": src.label,
                             "size": getattr(src, "n_cells", None) or len(src)}))
            return 0
        report = run(cfg)
        print(dump_json(report))
        return 0 if report["passed"] else 1
    except VolsetError as exc:
        print(f"volset: {exc.code}: {exc}", file=sys.stderr)
        return exc.exit_status


if __name__ == "__main__":
    sys.exit(main())
