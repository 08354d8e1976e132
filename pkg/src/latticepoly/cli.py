"""Command line interface: ``lattice-poly {norm,bohr,radius,construct,demo,verify}``.

Output is JSON on stdout; CSV only through ``--csv``. Exit codes: 0 ok,
1 bad input, 2 optimizer nonconvergence, 3 verification failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from .bohr import bohr_grid, disc_bohr_threshold, estimate_bohr_m
from .construct import BracketError, EtaUnreachableError, construct_ratio_polynomial, construct_small_regular_radius_series
from .lattice import SpaceSpec
from .norms import NonConvergenceError, OptimizerConfig, estimate_regular_norm, estimate_sup_norm
from .ortho import DiagonalPolynomial
from .poly import polynomial_from_json, polynomial_to_json
from .series import PowerSeries, coherence_demo, geometric_series, radii, regular_converges_at

EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGENCE, EXIT_VERIFY = 0, 1, 2, 3
THREADS_ENV = "LATTICE_POLY_THREADS"


class InputError(ValueError):
    pass


@dataclass
class RunRecord:
    command: str
    config: dict
    seed: int
    outputs: dict = field(default_factory=dict)
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"command": self.command, "config": self.config, "seed": self.seed, "outputs": self.outputs,
                "wall_time": self.wall_time}

    @classmethod
    def from_json(cls, data: dict) -> "RunRecord":
        return cls(data["command"], data["config"], int(data["seed"]), data.get("outputs", {}),
                   float(data.get("wall_time", 0.0)))


def _p(text: str) -> float:
    try:
        p = math.inf if text.strip().lower() in ("inf", "infinity") else float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a valid p: {text!r}")
    if not p >= 1:
        raise argparse.ArgumentTypeError(f"p must be >= 1, got {text}")
    return p


def _list(kind):
    def parse(text: str):
        try:
            vals = [kind(t) for t in text.split(",") if t.strip()]
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc))
        if not vals:
            raise argparse.ArgumentTypeError("empty list")
        return vals
    return parse


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def resolve_threads(flag: int | None) -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise InputError(f"{THREADS_ENV} must be an integer, got {env!r}")
        if n < 1:
            raise InputError(f"{THREADS_ENV} must be positive")
        return n
    return flag if flag else (os.cpu_count() or 1)


def _config(args) -> OptimizerConfig:
    cfg = OptimizerConfig()
    if getattr(args, "config", None):
        try:
            with open(args.config) as fh:
                cfg = OptimizerConfig.from_json(json.load(fh))
        except (OSError, ValueError, KeyError, TypeError) as exc:
            raise InputError(f"cannot read optimizer config {args.config}: {exc}")
    over = {k: getattr(args, k) for k in ("starts", "seed", "tol", "max_iter") if getattr(args, k, None) is not None}
    return cfg.with_(**over)


def _load_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}")


def _load_polynomial(path: str):
    data = _load_json(path)
    try:
        if isinstance(data, dict) and "diag" in data:
            return DiagonalPolynomial.from_json(data).to_polynomial()
        return polynomial_from_json(data)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"invalid polynomial in {path}: {exc}")


def _load_series(path: str) -> PowerSeries:
    data = _load_json(path)
    try:
        return PowerSeries.from_json(data)
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise InputError(f"invalid series in {path}: {exc}")


def _write_csv(path: str, header, rows):
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}")


def cmd_norm(args, cfg):
    P = _load_polynomial(args.file)
    est = (estimate_regular_norm if args.regular else estimate_sup_norm)(P, cfg)
    return est.to_json()


def cmd_bohr(args, cfg):
    ps, ns, ms = args.p, args.dim, args.degree
    if len(ps) * len(ns) * len(ms) > 1 and not args.grid:
        raise InputError("several values given for --p/--dim/--degree; add --grid for a sweep")
    if args.grid:
        rows = bohr_grid(ps, ns, ms, cfg, threads=args.threads)
        out = {"grid": [e.csv_row() for e in rows]}
    else:
        rows = [estimate_bohr_m(SpaceSpec(ns[0], ps[0]), ms[0], cfg)]
        out = rows[0].to_json()
    if args.csv:
        header = ["p", "n", "m", "k_m", "ratio_sup", "seed"]
        _write_csv(args.csv, header, [[e.csv_row()[h] for h in header] for e in rows])
    return out


def cmd_radius(args, cfg):
    f = _load_series(args.file)
    if f.truncation < 8:
        raise InputError(f"series truncated at degree {f.truncation}; radius estimates need at least 8")
    rep = radii(f, cfg)
    if args.csv:
        _write_csv(args.csv, ["m", "root_sup", "root_reg"], [[m, repr(a), repr(b)] for m, a, b in rep.per_degree])
    return rep.to_json()


def cmd_construct(args, cfg):
    try:
        if args.tau is not None:
            if args.terms is None:
                raise InputError("--tau needs --terms")
            f = construct_small_regular_radius_series(args.p, args.tau, args.terms, cfg, n_cap=args.n_cap)
            out = {"series": f.to_json()}
            if args.radius:
                out["radius"] = radii(f, cfg).to_json()
        else:
            if args.degree is None or args.eta is None:
                raise InputError("construct needs --degree and --eta, or --tau and --terms")
            res = construct_ratio_polynomial(args.p, args.degree, args.eta, cfg, n_cap=args.n_cap)
            out = {"polynomial": polynomial_to_json(res.P), "provenance": res.provenance()}
    except (EtaUnreachableError, BracketError) as exc:
        raise InputError(str(exc))
    except ValueError as exc:
        raise InputError(str(exc))
    if args.out:
        body = out["series"] if "series" in out else out["polynomial"]
        try:
            with open(args.out, "w") as fh:
                json.dump(body, fh, indent=1)
        except OSError as exc:
            raise InputError(f"cannot write {args.out}: {exc}")
    return out


def _complex_json(z: complex):
    return [z.real, z.imag]


def cmd_demo(args, cfg):
    if args.name == "coherence":
        a, b = coherence_demo()
        return {"expansion_at_0": _complex_json(a), "expansion_at_i/2": _complex_json(b),
                "text": f"{a.real:.6g}{a.imag:+.6g}i vs {b.real:.6f}"}
    if args.name == "bohr-disc":
        a = args.a
        if not 0 <= a < 1:
            raise InputError("--a must lie in [0, 1)")
        r = disc_bohr_threshold(a)
        return {"a": a, "threshold": r, "closed_form": 1.0 / (1.0 + 2.0 * a)}
    # matos: the full monomial expansion converges regularly iff z in l_1 with |z_j| < 1
    rows = []
    f = geometric_series(SpaceSpec(2, 1), 300)
    for z in ([0.5, 0.5j], [0.9, -0.3], [1.0, 0.5]):
        res = regular_converges_at(f, z)
        closed = float(np.prod([1.0 / (1.0 - abs(t)) for t in z])) if max(map(abs, z)) < 1 else math.inf
        rows.append({"z": [_complex_json(complex(t)) for t in z], "converges": res.converges,
                     "partial_sum": float(res.partial_sums[-1]), "closed_form": closed if math.isfinite(closed) else "inf"})
    tails = []
    for n in (10, 100, 1000, 10000):
        harmonic = float(np.prod(1.0 / (1.0 - 1.0 / (np.arange(n) + 2.0))))
        square = float(np.prod(1.0 / (1.0 - 1.0 / (np.arange(n) + 2.0) ** 2)))
        tails.append({"n": n, "z_j=1/(j+1)": harmonic, "z_j=1/(j+1)^2": square})
    return {"points": rows, "truncations": tails}


def cmd_verify(args, cfg):
    from .verify import run_suites

    results = run_suites(args.suite, cfg, seed=cfg.seed)
    out = {"checks": [{"suite": s, "name": n, "passed": ok, "detail": d} for s, n, ok, d in results]}
    out["passed"] = all(c["passed"] for c in out["checks"])
    return out


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lattice-poly", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--starts", type=_positive_int, help="multistart count per estimate")
    common.add_argument("--seed", type=int, help="base seed (default 0)")
    common.add_argument("--tol", type=float, help="gradient tolerance")
    common.add_argument("--max-iter", type=_positive_int, dest="max_iter")
    common.add_argument("--config", help="optimizer config JSON")
    common.add_argument("--threads", type=_positive_int, help=f"worker threads (env {THREADS_ENV} wins)")
    common.add_argument("--record", help="write a RunRecord JSON here")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("norm", parents=[common], help="sup or regular norm of a polynomial file")
    sp.add_argument("file")
    sp.add_argument("--regular", action="store_true")
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("bohr", parents=[common], help="homogeneous Bohr radius estimate or grid sweep")
    sp.add_argument("--p", type=_list(_p), required=True)
    sp.add_argument("--dim", type=_list(_positive_int), required=True)
    sp.add_argument("--degree", type=_list(_positive_int), required=True)
    sp.add_argument("--grid", action="store_true")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_bohr)

    sp = sub.add_parser("radius", parents=[common], help="radii of a series file")
    sp.add_argument("file")
    sp.add_argument("--csv")
    sp.set_defaults(func=cmd_radius)

    sp = sub.add_parser("construct", parents=[common], help="polynomial or series with a prescribed norm ratio")
    sp.add_argument("--p", type=_p, required=True)
    sp.add_argument("--degree", type=_positive_int)
    sp.add_argument("--eta", type=float)
    sp.add_argument("--tau", type=float)
    sp.add_argument("--terms", type=_positive_int)
    sp.add_argument("--n-cap", type=_positive_int, default=64, dest="n_cap")
    sp.add_argument("--radius", action="store_true", help="also report radii of the constructed series")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("demo", parents=[common], help="fixed demonstrations")
    sp.add_argument("name", choices=["coherence", "bohr-disc", "matos"])
    sp.add_argument("--a", type=float, default=0.9)
    sp.set_defaults(func=cmd_demo)

    sp = sub.add_parser("verify", parents=[common], help="property suites")
    sp.add_argument("suite", nargs="+", choices=["norms", "bohr", "series", "ortho", "all"])
    sp.set_defaults(func=cmd_verify)
    return ap


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else ("inf" if x > 0 else "-inf" if x < 0 else "nan")
    return obj


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    t0 = time.perf_counter()
    try:
        args.threads = resolve_threads(args.threads)
        cfg = _config(args)
        out = args.func(args, cfg)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NonConvergenceError as exc:
        print(f"error: optimizer did not converge: {exc}", file=sys.stderr)
        est = getattr(exc, "estimate", None)
        if est is not None:
            print(json.dumps(_jsonable(est.to_json())))
        return EXIT_NONCONVERGENCE
    out = _jsonable(out)
    print(json.dumps(out, indent=1))
    if args.record:
        argv_list = list(sys.argv[1:] if argv is None else argv)
        rec = RunRecord(" ".join(argv_list), cfg.to_json(), cfg.seed, out, time.perf_counter() - t0)
        try:
            with open(args.record, "w") as fh:
                json.dump(_jsonable(rec.to_json()), fh, indent=1)
        except OSError as exc:
            print(f"error: cannot write {args.record}: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if args.command == "verify" and not out["passed"]:
        for c in out["checks"]:
            if not c["passed"]:
                print(f"FAILED {c['suite']}: {c['name']} ({c['detail']})", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
