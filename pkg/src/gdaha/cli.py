"""Command line front end: ``gdaha build | check | monodromy``.

Exit status is 0 when every check passes (or is vacuous), 1 on a
mathematical failure and 2 on a usage or validation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import report as rpt
from .core import (
    RepSpec,
    build_quantum_rep,
    check_gdaha_relations,
    derive_root_order,
    gdaha_parameters,
    long_word_check,
    r_squared_spectrum_check,
)
from .monodromy import LoopGeometry, compare_reps, convergence_table
from .scalars import ScalarField
from .weights import Weight

log = logging.getLogger("gdaha")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_SUITE = [
    RepSpec.make(2, 1, [(1,)]),
    RepSpec.make(2, 2, [(2,)]),
    RepSpec.make(2, 2, [(1,), (1,)], [0, 0]),
    RepSpec.make(3, 2, [(1,)], [Fraction(1, 2)]),
]
DEFAULT_R_SQUARED = [(2, (1, 0), (1, 0)), (2, (2, 0), (1, 0))]
DEFAULT_MONODROMY = RepSpec.make(2, 2, [(2,)])

CONFIG_KEYS = {"N", "n", "legs", "nu", "tol", "compare_tol", "out", "jobs", "golden",
               "tol_sweep", "inject_perturbation", "verbose", "geometry", "seed"}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# parsing

def _split_top(text):
    """Split on commas that are not inside brackets."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts if p.strip()]


def parse_leg(text):
    """``"mu=(2,0),lambda=1/2"`` -> (coords, Fraction).  ``mu=2 0`` and
    ``mu=2:0`` are accepted too; lambda defaults to 0."""
    mu, lam = None, Fraction(0)
    for item in _split_top(text):
        key, sep, val = item.partition("=")
        key = key.strip().lower()
        if not sep:
            raise UsageError(f"leg item {item!r} is not key=value")
        if key == "mu":
            nums = [x for x in re.split(r"[\s,:;()\[\]]+", val) if x]
            try:
                mu = tuple(int(x) for x in nums)
            except ValueError:
                raise UsageError(f"mu must be a list of integers, got {val!r}") from None
        elif key in ("lambda", "lam"):
            try:
                lam = Fraction(val.strip())
            except ValueError:
                raise UsageError(f"lambda must be rational, got {val!r}") from None
        else:
            raise UsageError(f"unknown leg key {key!r} (expected mu, lambda)")
    if mu is None:
        raise UsageError(f"leg {text!r} has no mu")
    return mu, lam


def make_spec(N, n, legs):
    parsed = [parse_leg(x) if isinstance(x, str) else x for x in legs]
    mus, lams = [], []
    for mu, lam in parsed:
        if len(mu) > N:
            raise UsageError(f"mu={mu} has more than N={N} entries")
        mus.append(Weight(tuple(mu) + (0,) * (N - len(mu))))
        lams.append(lam)
    try:
        return RepSpec(N, n, tuple(mus), tuple(lams))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _positive_float(text):
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError("must be positive")
    return x


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--N", type=int, help="rank: gl_N / U_q(sl_N)")
    common.add_argument("--n", type=int, help="number of vector factors")
    common.add_argument("--legs", action="append", metavar="SPEC",
                        help='one leg, e.g. "mu=(2,0),lambda=1/2"; repeat for each leg')
    common.add_argument("--config", help="JSON file of option values (unknown keys are errors)")
    common.add_argument("--out", help="write the JSON report here (default: stdout)")
    common.add_argument("--golden", metavar="FILE",
                        help="compare the report with FILE, or create FILE if missing")
    common.add_argument("--jobs", type=int, default=1, help="worker count for independent tasks")
    common.add_argument("--dry-run", action="store_true",
                        help="print root order and ambient dimension, compute nothing")
    common.add_argument("-v", "--verbose", action="count", default=0)
    common.add_argument("-q", "--quiet", action="store_true")

    p = argparse.ArgumentParser(prog="gdaha", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("build", parents=[common], help="construct E and the operators T_i, U_k")
    ck = sub.add_parser("check", parents=[common],
                        help="exact relation checks (default: built-in suite)")
    ck.add_argument("--inject-perturbation", action="store_true",
                    help="scale U_1 by q; relation (1) must then fail")
    ck.add_argument("--no-long-word", action="store_true")
    ck.add_argument("--no-r-squared", action="store_true")
    mo = sub.add_parser("monodromy", parents=[common],
                        help="numeric monodromy versus the quantum representation")
    mo.add_argument("--nu", type=float, default=None, help="default 1/pi")
    mo.add_argument("--tol", type=_positive_float, default=None, help="integrator tolerance (1e-10)")
    mo.add_argument("--compare-tol", type=_positive_float, default=None, help="match tolerance (1e-6)")
    mo.add_argument("--tol-sweep", action="store_true", help="add a convergence table")
    mo.add_argument("--seed", type=int, default=None)
    return p


def _apply_config(args, parser):
    if not args.config:
        return {}
    try:
        with open(args.config) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {args.config}: {exc}") from None
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    unknown = set(cfg) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    geometry = cfg.pop("geometry", {})
    if not isinstance(geometry, dict):
        raise UsageError("config 'geometry' must be an object")
    defaults = vars(parser.parse_args([args.command]))
    for key, val in cfg.items():
        if not hasattr(args, key):
            raise UsageError(f"config key {key!r} does not apply to '{args.command}'")
        if getattr(args, key) == defaults[key]:  # command-line flags win
            setattr(args, key, val)
    return geometry


def _spec_from_args(args, default):
    given = [args.N is not None, args.n is not None, bool(args.legs)]
    if not any(given):
        return default
    if not all(given):
        raise UsageError("--N, --n and at least one --legs are needed together")
    legs = args.legs if isinstance(args.legs, list) else [args.legs]
    return make_spec(args.N, args.n, legs)


def _dry(spec):
    D = derive_root_order(spec)
    return {"spec": spec.to_dict(), "root_order": D, "strands": spec.strands,
            "ambient_dim": spec.ambient_dim}


# ---------------------------------------------------------------------------
# commands

def cmd_build(args, spec):
    t0 = time.perf_counter()
    log.info("build: ambient dim %d", spec.ambient_dim)
    rep = build_quantum_rep(spec)
    params = gdaha_parameters(spec, rep.field)
    mats = {}
    for i, (a, b) in enumerate(zip(rep.T, rep.T_inv), start=1):
        mats[f"T{i}"], mats[f"T{i}^-1"] = rpt.exact_matrix(a), rpt.exact_matrix(b)
    for k, (a, b) in enumerate(zip(rep.U, rep.U_inv), start=1):
        mats[f"U{k}"], mats[f"U{k}^-1"] = rpt.exact_matrix(a), rpt.exact_matrix(b)
    out = {
        "kind": "build", "verdict": "vacuous" if rep.vacuous else "pass",
        "spec": spec.to_dict(), "root_order": rep.field.root_order,
        "ambient_dim": spec.ambient_dim, "dim_E": rep.dim,
        "parameters": params.to_dict(),
        "braid_words": {k: list(w.letters) for k, w in rep.words.items()},
        "matrices": mats, "timings": dict(rep.timings),
    }
    log.info("build done: dim E = %d (%.2fs)", rep.dim, time.perf_counter() - t0)
    return out


def _check_case(spec, inject, long_word):
    t0 = time.perf_counter()
    field = ScalarField(derive_root_order(spec))
    rep = build_quantum_rep(spec, field, u1_scale=field.q if inject else None)
    rel = check_gdaha_relations(rep)
    case = {"spec": spec.to_dict(), "dim_E": rep.dim, "ambient_dim": spec.ambient_dim,
            "relations": rel.to_dict(), "parameters": rep.params.to_dict()}
    verdicts = [case["relations"]["verdict"]]
    if long_word:
        lw = long_word_check(spec, field)
        case["long_word"] = lw.to_dict()
        if lw.status == "fail":
            verdicts.append("fail")
    case["verdict"] = "fail" if "fail" in verdicts else verdicts[0]
    case["timings"] = {"total": time.perf_counter() - t0}
    return case


def cmd_check(args, spec):
    specs = [spec] if spec is not None else DEFAULT_SUITE
    long_word = not args.no_long_word
    cases = []
    if args.jobs > 1 and len(specs) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            futures = [pool.submit(_check_case, s, args.inject_perturbation, long_word) for s in specs]
            cases = [f.result() for f in futures]
    else:
        for s in specs:
            t0 = time.perf_counter()
            log.info("check N=%d m=%d n=%d: ambient dim %d", s.N, s.m, s.n, s.ambient_dim)
            cases.append(_check_case(s, args.inject_perturbation, long_word))
            log.info("  -> %s, dim E = %d (%.2fs)", cases[-1]["verdict"], cases[-1]["dim_E"],
                     time.perf_counter() - t0)
    for c in cases:
        for r in c["relations"]["relations"]:
            if r["status"] == "fail":
                log.error("relation (%d) %s fails: %s", r["relation"], r["name"], r["witness"])
    r2 = []
    if spec is None and not args.no_r_squared:
        for N, mu, mup in DEFAULT_R_SQUARED:
            rows = r_squared_spectrum_check(N, mu, mup)
            r2.append({"N": N, "mu": list(mu), "mu_prime": list(mup), "rows": rows})
    verdicts = [c["verdict"] for c in cases]
    verdicts += ["fail" for t in r2 for row in t["rows"] if row["status"] == "fail"]
    if "fail" in verdicts:
        verdict = "fail"
    elif all(v == "vacuous" for v in verdicts):
        verdict = "vacuous"
    else:
        verdict = "pass"
    return {"kind": "check", "verdict": verdict, "cases": cases, "r_squared": r2}


def cmd_monodromy(args, spec, geometry):
    nu = 1 / math.pi if args.nu is None else float(args.nu)
    if nu == 0:
        raise UsageError("nu must be nonzero")
    tol = args.tol or 1e-10
    ctol = args.compare_tol or 1e-6
    seed = args.seed or 0
    rep = compare_reps(spec, nu, tol, ctol, geometry=geometry, jobs=args.jobs, seed=seed)
    out = {
        "kind": "monodromy",
        "verdict": "vacuous" if rep.dim_classical == 0 and rep.dim_quantum == 0
        else ("match" if rep.match else "mismatch"),
        "spec": spec.to_dict(), "nu": nu, "q": rpt.complex_pair(rep.q), "tol": tol,
        "compare_tol": ctol, "dim": rep.dim_classical, "dim_quantum": rep.dim_quantum,
        "geometry": geometry.__dict__,
        "rgdaha": rep.rgdaha,
        "monodromy": {k: rpt.complex_matrix(v) for k, v in rep.monodromy.items()},
        "quantum": {k: rpt.complex_matrix(v) for k, v in rep.quantum.items() if not k.endswith("^-1")},
        "error_estimates": rep.error_estimates,
        "charpoly": {k: {"monodromy": rpt.complex_vector(v["monodromy"]),
                         "quantum": rpt.complex_vector(v["quantum"]), "delta": v["delta"]}
                     for k, v in rep.charpoly.items()},
        "eigen_checks": rep.eigen_checks, "relation_checks": rep.relation_checks,
        "word_traces": {"checked": rep.words_checked, "max_delta": rep.max_trace_delta,
                        "worst_word": rep.worst_word, "largest": rep.trace_deltas},
        "max_deviation": rep.max_deviation,
        "loops": rep.loops, "warnings": rep.warnings, "timings": {"total": rep.elapsed},
    }
    if not rep.match and rep.dim_classical:
        log.error("mismatch: max deviation %.3g (worst word %s)", rep.max_deviation, rep.worst_word)
    if args.tol_sweep:
        t0 = time.perf_counter()
        out["convergence"] = convergence_table(spec, nu, geometry=geometry)
        log.info("tolerance sweep done (%.2fs)", time.perf_counter() - t0)
    return out


# ---------------------------------------------------------------------------

def _emit(out, args):
    text = rpt.dumps({"schema": rpt.SCHEMA_VERSION, **out})
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
        log.info("report written to %s", args.out)
    else:
        print(text)
    if args.golden:
        fresh = json.loads(text)
        if os.path.exists(args.golden):
            diffs = rpt.golden_diff(fresh, rpt.load(args.golden))
            if diffs:
                for d in diffs[:20]:
                    log.error("golden mismatch %s", d)
                return False
            log.info("golden file %s matches", args.golden)
        else:
            with open(args.golden, "w") as fh:
                fh.write(text + "\n")
            log.info("golden file %s created", args.golden)
    return True


def _configure_logging(level):
    """Send package logs to the current stderr, replacing any earlier CLI handler."""
    root = logging.getLogger("gdaha")
    for h in list(root.handlers):
        if getattr(h, "_gdaha_cli", False):
            root.removeHandler(h)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(message)s"))
    handler._gdaha_cli = True
    root.addHandler(handler)
    root.setLevel(level)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        geometry_cfg = _apply_config(args, parser)
        level = logging.WARNING if args.quiet else (logging.DEBUG if args.verbose > 1 else logging.INFO)
        _configure_logging(level)
        try:
            geometry = LoopGeometry.from_dict(geometry_cfg)
        except (TypeError, ValueError) as exc:
            raise UsageError(str(exc)) from None
        if args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        default = {"build": DEFAULT_SUITE[0], "check": None, "monodromy": DEFAULT_MONODROMY}[args.command]
        spec = _spec_from_args(args, default)
        if args.dry_run:
            specs = [spec] if spec is not None else DEFAULT_SUITE
            print(json.dumps([_dry(s) for s in specs], indent=2))
            return EXIT_OK
        if args.command == "build":
            out = cmd_build(args, spec)
        elif args.command == "check":
            out = cmd_check(args, spec)
        else:
            out = cmd_monodromy(args, spec, geometry)
    except UsageError as exc:
        print(f"gdaha: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    ok = _emit(out, args)
    return EXIT_OK if ok and out["verdict"] in ("pass", "vacuous", "match") else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
