"""Command-line front end.

Subcommands ``ppd``, ``optimize``, ``sweep`` and ``simulate`` read a YAML
scenario file and write CSV (default) or JSON to stdout. Exit status is 0 on
success, 2 when the scenario is rejected (the error class name is printed to
stderr) and 3 on a numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import yaml

from .maximin import MaximinResult, find_p, maximin_fence
from .markov import UnsupportedCombination
from .model import (
    BMP,
    DCP,
    DNCP,
    ConfigError,
    Environment,
    ImpDetect,
    ImpDetLRange,
    InvalidParameter,
    LRange,
    PatrolConfig,
    Perfect,
    ValidatedConfig,
    validate_config,
)
from .oracle import adversary_game, estimate_ppd
from .polynomial import ZeroPolynomial
from .ppd import find_fence_ppd, find_func

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 2, 3
SCENARIO_KEYS = {"environment", "N", "k", "d", "t", "movement", "tau", "sensing", "p_d", "L", "V_S"}
EXACT_TOL = 1e-9


class ScenarioError(InvalidParameter):
    """The scenario file is malformed or has unknown keys."""


class NumericalFailure(RuntimeError):
    pass


# -- scenarios ---------------------------------------------------------------


def load_scenario(path: str) -> dict:
    with open(path, encoding="utf-8") as fh:
        data = yaml.safe_load(fh)
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a key/value mapping")
    unknown = set(data) - SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario keys: {', '.join(sorted(map(str, unknown)))}")
    return data


def build_config(data: dict) -> PatrolConfig:
    """Turn a scenario mapping into a :class:`PatrolConfig`.

    ``d`` may replace ``N``; ``k`` then defaults to 2 on a perimeter and 1 on
    a fence.
    """
    try:
        env = Environment(data.get("environment", "perimeter"))
    except ValueError:
        raise ScenarioError(f"unknown environment {data.get('environment')!r}") from None
    k = data.get("k", 2 if env is Environment.PERIMETER else 1)
    if "N" in data:
        N = data["N"]
        if "d" in data and isinstance(k, int) and N != data["d"] * k:
            raise ScenarioError("N and d disagree")
    elif "d" in data:
        N = data["d"] * k if isinstance(data["d"], int) and isinstance(k, int) else data["d"]
    else:
        raise ScenarioError("scenario needs N or d")
    if "t" not in data:
        raise ScenarioError("scenario needs t")

    mv_name = str(data.get("movement", "dcp")).lower()
    if mv_name == "dcp":
        movement = DCP(data.get("tau", 1))
    elif mv_name == "dncp":
        movement = DNCP()
    elif mv_name == "bmp":
        movement = BMP()
    else:
        raise ScenarioError(f"unknown movement {mv_name!r}")

    s_name = str(data.get("sensing", "perfect")).lower()
    if s_name == "perfect":
        sensing = Perfect()
    elif s_name == "impdetect":
        sensing = ImpDetect(data.get("p_d", 1.0))
    elif s_name == "lrange":
        sensing = LRange(data.get("L", 0))
    elif s_name == "impdetlrange":
        v_s = data.get("V_S")
        if not isinstance(v_s, (list, tuple)):
            raise ScenarioError("impdetlrange needs a V_S list")
        sensing = ImpDetLRange(data.get("L", len(v_s) - 1), tuple(v_s))
    else:
        raise ScenarioError(f"unknown sensing {s_name!r}")
    return PatrolConfig(env, N=N, k=k, t=data["t"], movement=movement, sensing=sensing)


def _validated(data: dict) -> ValidatedConfig:
    cfg = validate_config(build_config(data))
    if isinstance(cfg.movement, BMP) and cfg.sensing.range > 0:
        raise UnsupportedCombination("long-range sensing is not defined for BMP robots")
    return cfg


def _parse_vary(text: str):
    try:
        key, rng = text.split("=", 1)
        a, b = rng.split("..", 1)
        lo, hi = int(a), int(b)
    except ValueError:
        raise ScenarioError(f"--vary expects key=a..b, got {text!r}") from None
    if key not in ("d", "t"):
        raise ScenarioError("--vary supports d or t")
    return key, range(lo, hi + 1)


# -- computation -------------------------------------------------------------


def _curves(cfg: ValidatedConfig, exact: bool):
    """``[(location or None, profile)]`` with float curves, cross-checked
    against exact rational ones when ``exact`` is set."""
    if cfg.is_fence:
        table = find_fence_ppd(cfg)
        rows = [(j, table.location(j)) for j in range(1, cfg.d + 1)]
    else:
        rows = [(None, find_func(cfg))]
    if not exact:
        return rows, None
    if cfg.is_fence:
        etab = find_fence_ppd(cfg, exact=True)
        erows = [etab.location(j) for j in range(1, cfg.d + 1)]
    else:
        erows = [find_func(cfg, exact=True)]
    for (_, prof), eprof in zip(rows, erows):
        for c, e in zip(prof.curves, eprof.curves):
            if not c.allclose(e.to_float(), EXACT_TOL):
                raise NumericalFailure("float and exact rational curves disagree")
    return rows, erows


def _grid(n: int) -> np.ndarray:
    if n < 2:
        raise ScenarioError("--grid needs at least 2 points")
    return np.linspace(0.0, 1.0, n)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def cmd_ppd(args, data) -> str:
    cfg = _validated(data)
    rows, erows = _curves(cfg, args.exact_rational)
    if args.format == "json":
        out = []
        for n, (loc, prof) in enumerate(rows):
            for i, c in enumerate(prof.curves, start=1):
                item = {"segment": i, "coefficients": [float(x) for x in c.coeffs]}
                if loc is not None:
                    item = {"location": loc, **item}
                if erows is not None:
                    item["exact"] = [str(Fraction(x)) for x in erows[n].curves[i - 1].coeffs]
                out.append(item)
        return json.dumps({"environment": cfg.environment.value, "d": cfg.d, "t": cfg.t,
                           "curves": out}, indent=1) + "\n"

    ps = _grid(args.grid)
    header = ["segment", "location", "p", "ppd"] if cfg.is_fence else ["segment", "p", "ppd"]
    table = []
    for loc, prof in rows:
        for i, c in enumerate(prof.curves, start=1):
            vals = c(ps)
            for p, v in zip(ps, vals):
                lead = [i, loc] if loc is not None else [i]
                table.append(lead + [_fmt(p), _fmt(v)])
    return _csv(header, table)


def _result_json(res: MaximinResult, location=None) -> dict:
    d = {
        "p_opt": res.p_opt,
        "value": res.value,
        "witness_segments": sorted(res.witness_segments),
        "candidate_kind": str(res.candidate_kind),
        "candidates": [{"p": c.p, "value": c.value, "kind": str(c.kind)} for c in res.all_candidates],
    }
    return d if location is None else {"location": location, **d}


def cmd_optimize(args, data) -> str:
    cfg = _validated(data)
    rows, _ = _curves(cfg, args.exact_rational)
    results = [(loc, find_p(prof)) for loc, prof in rows]
    if args.format == "json":
        return json.dumps([_result_json(r, loc) for loc, r in results], indent=1) + "\n"
    header = (["location"] if cfg.is_fence else []) + ["p_opt", "value", "witness_segments", "candidate_kind", "candidates"]
    table = []
    for loc, r in results:
        audit = ";".join(f"{c.kind}@{c.p:.6g}={c.value:.6g}" for c in r.all_candidates)
        witness = " ".join(map(str, sorted(r.witness_segments)))
        lead = [loc] if loc is not None else []
        table.append(lead + [_fmt(r.p_opt), _fmt(r.value), witness, str(r.candidate_kind), audit])
    return _csv(header, table)


def _sweep_row(data, key, value, per_segment):
    row = dict(data)
    row[key] = value
    if key == "d":
        row.pop("N", None)
    try:
        cfg = _validated(row)
        if cfg.is_fence:
            res = maximin_fence(find_fence_ppd(cfg))
            worst = min(res, key=lambda r: r.value)
            return value, worst, None, "ok"
        prof = find_func(cfg)
        res = find_p(prof)
        segs = prof.evaluate(res.p_opt) if per_segment else None
        return value, res, segs, "ok"
    except ConfigError as exc:
        return value, None, None, type(exc).__name__
    except UnsupportedCombination as exc:
        return value, None, None, type(exc).__name__


def cmd_sweep(args, data) -> str:
    if not args.vary:
        raise ScenarioError("sweep needs --vary key=a..b")
    key, values = _parse_vary(args.vary)
    with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
        results = list(pool.map(lambda v: _sweep_row(data, key, v, args.per_segment), values))
    width = max((len(s) for *_, s, _ in results if s is not None), default=0)

    if args.format == "json":
        out = []
        for v, res, segs, status in results:
            item = {"param": v, "status": status,
                    "p_opt": None if res is None else res.p_opt,
                    "maximin_value": None if res is None else res.value}
            if segs is not None:
                item["segments"] = [float(x) for x in segs]
            out.append(item)
        return json.dumps({"vary": key, "rows": out}, indent=1) + "\n"

    header = ["param", "p_opt", "maximin_value", "status"] + [f"seg_{i}" for i in range(1, width + 1)]
    table = []
    for v, res, segs, status in results:
        seg_cols = [_fmt(x) for x in segs] if segs is not None else []
        seg_cols += [""] * (width - len(seg_cols))
        table.append([v, _fmt(res and res.p_opt), _fmt(res and res.value), status] + seg_cols)
    return _csv(header, table)


def cmd_simulate(args, data) -> str:
    cfg = _validated(data)
    location = args.location
    if cfg.is_fence and location is None:
        location = 1
    if args.p is None:
        raise ScenarioError("simulate needs --p VALUE or --p opt")
    profile = None
    if args.p == "opt":
        if cfg.is_fence:
            profile = find_fence_ppd(cfg).location(location)
        else:
            profile = find_func(cfg)
        p = find_p(profile).p_opt
    else:
        try:
            p = float(args.p)
        except ValueError:
            raise ScenarioError(f"--p expects a number or 'opt', got {args.p!r}") from None
        if not 0.0 <= p <= 1.0:
            raise InvalidParameter(f"p must lie in [0, 1], got {p}")

    if args.segment is not None:
        if not 1 <= args.segment <= cfg.d:
            raise InvalidParameter(f"segment must lie in 1..{cfg.d}")
        out = estimate_ppd(cfg, p, args.segment, args.trials, args.seed, location=location)
    else:
        out = adversary_game(cfg, p, args.adversary, args.trials, args.seed,
                             profile=profile, location=location)

    if args.format == "json":
        return json.dumps({"p": p, "fraction": out.detected_fraction, "trials": out.trials,
                           "halfwidth": out.confidence_halfwidth_3sigma, "seed": out.seed,
                           "segment": out.segment}, indent=1) + "\n"
    return _csv(["p", "fraction", "trials", "halfwidth", "seed", "segment"],
                [[_fmt(p), _fmt(out.detected_fraction), out.trials,
                  _fmt(out.confidence_halfwidth_3sigma), out.seed,
                  "" if out.segment is None else out.segment]])


COMMANDS = {"ppd": cmd_ppd, "optimize": cmd_optimize, "sweep": cmd_sweep, "simulate": cmd_simulate}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patrolppd", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", required=True, metavar="PATH", help="YAML scenario file")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--exact-rational", action="store_true",
                       help="cross-check float curves against exact rational arithmetic")
        return p

    p = common(sub.add_parser("ppd", help="detection curves per segment"))
    p.add_argument("--grid", type=int, default=101, help="p-grid size for CSV output")
    common(sub.add_parser("optimize", help="maximin patrol parameter"))
    p = common(sub.add_parser("sweep", help="maximin over a range of d or t"))
    p.add_argument("--vary", metavar="KEY=A..B")
    p.add_argument("--per-segment", action="store_true",
                   help="append each segment's ppd at the optimum")
    p.add_argument("--jobs", type=int, default=1)
    p = common(sub.add_parser("simulate", help="Monte Carlo adversary game"))
    p.add_argument("--p", metavar="VALUE|opt")
    p.add_argument("--adversary", choices=("full", "random"), default="full")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--segment", type=int, help="fix the penetrated segment instead")
    p.add_argument("--location", type=int, help="fence robot start location")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        data = load_scenario(args.scenario)
        text = COMMANDS[args.command](args, data)
    except (ConfigError, UnsupportedCombination) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"ScenarioError: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except yaml.YAMLError as exc:
        print(f"ScenarioError: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (NumericalFailure, ZeroPolynomial, FloatingPointError, ArithmeticError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
