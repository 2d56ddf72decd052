"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or model-spec error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Sequence

import numpy as np

from . import capacity as cap
from .classify import QUESTIONS, ask
from .exponents import UnsupportedAsymptotics, analytic_exponents, critical_exponents, empirical_exponents
from .green import GreenProfile, lnorm_gradient, lnorm_u
from .measures import AssumptionProfile, DomainError, RadialMeasure, as_growth
from .modelspec import SpecError, load_model
from .regression import EXAMPLES, run_examples

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CAPACITY_COLUMNS = ["r", "R", "p", "method", "value", "error_estimate", "flag"]


class UsageError(Exception):
    pass


def _clean(obj: Any) -> Any:
    """JSON-safe copy: infinities become "inf", NaN becomes null."""
    if isinstance(obj, float):
        if math.isnan(obj):
            return None
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.floating):
        return _clean(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def _csv_text(rows: list[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: ("" if v is None else repr(v) if isinstance(v, float) else v) for k, v in _clean(row).items()})
    return buf.getvalue()


def _emit(args, payload: Any, rows: list[dict] | None = None, columns: list[str] | None = None) -> None:
    if args.format == "csv":
        if rows is None:
            rows = payload if isinstance(payload, list) else [payload]
        if columns is None:
            columns = list(rows[0].keys()) if rows else []
        text = _csv_text(rows, columns)
    else:
        text = json.dumps(_clean(payload), indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _model(args):
    if not args.model:
        raise UsageError("--model is required for this command")
    return load_model(args.model)


def _tol(args, default: float) -> float:
    return default if args.tol is None else args.tol


# --- commands ----------------------------------------------------------------


def cmd_exponents(args) -> int:
    model = _model(args)
    g = as_growth(model)
    rep = analytic_exponents(g)
    out: dict[str, Any] = {"model": g.spec, "report": rep.to_dict()}
    if args.p is not None:
        out["critical"] = critical_exponents(rep, args.p).to_dict()
    if args.empirical:
        r_hi = args.r_hi if args.r_hi is not None else g.anchor_radius
        out["empirical"] = empirical_exponents(g, args.r_lo, r_hi, args.k).to_dict()
    flat = {**{f"report.{k}": v for k, v in out["report"].items()}}
    if "critical" in out:
        flat.update({f"critical.{k}": v for k, v in out["critical"].items()})
    if "empirical" in out:
        flat["empirical.slope"] = out["empirical"]["us0"]
    _emit(args, out, rows=[flat])
    return EXIT_OK


def _capacity_methods(choice: str, radial: bool) -> list[str]:
    if choice == "auto":
        return ["exact" if radial else "integral"]
    if choice == "all":
        return ["integral", "exact", "dyadic", "variational"]
    return [choice]


def _capacity_row(model, g, method: str, p: float, r: float, R: float, N: int, rel_tol: float) -> dict:
    row: dict[str, Any] = {"r": r, "R": R, "p": p, "method": method, "value": None, "error_estimate": None, "flag": ""}
    try:
        q = cap.CapacityQuery(p, r, R)
        if method == "integral":
            res = cap.integral_estimate(g, q, rel_tol=rel_tol)
        elif method == "dyadic":
            res = cap.dyadic_upper(g, q)
        elif not isinstance(model, RadialMeasure):
            row["flag"] = "not-radial"
            return row
        elif method == "exact":
            res = cap.exact_radial(model, q)
        else:
            res = cap.variational_radial(model, q, N)
    except cap.HypothesisViolation as err:
        row["flag"] = f"hypothesis-violation: {err}"
        return row
    except cap.SolverDivergence as err:
        row["flag"] = f"solver-divergence: {err}"
        return row
    row.update(method=res.method.value, value=res.value, error_estimate=res.abs_error_estimate)
    if not res.hypothesis_ok:
        row["flag"] = "hypothesis-violation: 2r > R"
    return row


def cmd_capacity(args) -> int:
    model = _model(args)
    g = as_growth(model)
    radii = list(args.r or [])
    if args.dyadic_sweep:
        k1, k2 = args.dyadic_sweep
        radii += [2.0**-k for k in range(k1, k2 + 1)]
    if not radii:
        raise UsageError("give --r or --dyadic-sweep")
    if any(r >= args.R for r in radii):
        raise UsageError(f"every r must be below R={args.R}")
    methods = _capacity_methods(args.method, isinstance(model, RadialMeasure))
    jobs = [(r, m) for r in radii for m in methods]
    rel_tol = _tol(args, 1e-9)

    def run(job):
        r, method = job
        return _capacity_row(model, g, method, args.p, r, args.R, args.N, rel_tol)

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(run, jobs))
    if len(methods) > 1:
        # ratio of each method to the first one in the same (r, R) group
        for i in range(0, len(rows), len(methods)):
            ref = rows[i]["value"]
            for row in rows[i : i + len(methods)]:
                row["ratio"] = row["value"] / ref if ref and row["value"] is not None else None
    _emit(args, rows, rows=rows, columns=CAPACITY_COLUMNS)
    return EXIT_OK


def cmd_green_profile(args) -> int:
    model = _model(args)
    if not isinstance(model, RadialMeasure):
        raise UsageError("green-profile needs a radial model")
    table = GreenProfile(model, args.p, normalized=args.normalized).table(args.rho_min, args.points)
    rows = [{"rho": float(a), "u": float(b), "g": float(c)} for a, b, c in table]
    _emit(args, rows, rows=rows, columns=["rho", "u", "g"])
    return EXIT_OK


def cmd_green_norms(args) -> int:
    model = _model(args)
    if not isinstance(model, RadialMeasure):
        raise UsageError("green-norms needs a radial model")
    if not (args.tau or args.t):
        raise UsageError("give --tau and/or --t")
    jobs = [("tau", x) for x in args.tau or []] + [("t", x) for x in args.t or []]

    def run(job):
        key, x = job
        fn = lnorm_u if key == "tau" else lnorm_gradient
        return fn(model, args.p, x, normalized=args.normalized).to_dict()

    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        rows = list(pool.map(run, jobs))
    csv_rows = [{"kind": r["kind"], "exponent": r.get("tau", r.get("t")), "value": r["value"],
                 "verdict_basis": r["verdict_basis"], "numeric_finite": r["numeric_finite"]} for r in rows]
    _emit(args, rows, rows=csv_rows, columns=["kind", "exponent", "value", "verdict_basis", "numeric_finite"])
    return EXIT_OK


def cmd_classify(args) -> int:
    model = _model(args)
    hyp = AssumptionProfile(
        poincare_at_x0=frozenset(args.poincare or ()),
        poincare_large_radii=frozenset(args.poincare_large or ()),
    )
    questions = args.question or [q for q in QUESTIONS if not (q == "green_in_Ltau" and args.tau is None)
                                   and not (q == "gradient_in_Lt" and args.t is None)]
    rows = []
    for q in questions:
        v = ask(q, model, args.p, tau=args.tau, t=args.t, hyp=hyp)
        rows.append({"question": q, **v.to_dict()})
    csv_rows = [{**r, "hypotheses_used": ";".join(r["hypotheses_used"])} for r in rows]
    _emit(args, rows, rows=csv_rows, columns=["question", "state", "basis", "hypotheses_used"])
    return EXIT_OK


def cmd_verify_examples(args) -> int:
    reports = run_examples(args.only, tol=_tol(args, 1e-8), seed=args.seed, inject_beta=args.inject_beta)
    payload = {"passed": all(r.passed for r in reports), "examples": [r.to_dict() for r in reports]}
    rows = [{"example": r.example, **row.to_dict()} for r in reports for row in r.rows]
    for row in rows:
        row["expected"], row["observed"] = json.dumps(_clean(row["expected"])), json.dumps(_clean(row["observed"]))
    _emit(args, payload, rows=rows, columns=["example", "label", "expected", "observed", "passed"])
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        print(f"{status} {r.example} ({sum(x.passed for x in r.rows)}/{len(r.rows)} rows)", file=sys.stderr)
    return EXIT_OK if payload["passed"] else EXIT_FAIL


# --- parser ------------------------------------------------------------------


def _positive(text: str) -> float:
    x = float(text)
    if not x > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return x


def _at_least_two(text: str) -> int:
    k = int(text)
    if k < 2:
        raise argparse.ArgumentTypeError(f"must be >= 2, got {text}")
    return k


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", help="model spec: file path, inline JSON, or kind:key=value,...")
    common.add_argument("--format", choices=["json", "csv"], default="json")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--tol", type=_positive, help="relative tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized rows")
    common.add_argument("--workers", type=int, default=4, help="threads for sweeps")

    parser = argparse.ArgumentParser(prog="nlpot", description="Weighted nonlinear potential theory toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("exponents", parents=[common], help="exponent endpoints and critical exponents")
    p.add_argument("--p", type=float)
    p.add_argument("--empirical", action="store_true", help="append a log-log regression cross-check")
    p.add_argument("--r-lo", type=_positive, default=1e-6)
    p.add_argument("--r-hi", type=_positive)
    p.add_argument("--k", type=int, default=32)
    p.set_defaults(func=cmd_exponents)

    p = sub.add_parser("capacity", parents=[common], help="annulus capacities")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--r", type=_positive, nargs="+")
    p.add_argument("--R", type=_positive, required=True)
    p.add_argument("--dyadic-sweep", type=int, nargs=2, metavar=("K1", "K2"), help="add r = 2^-k for K1 <= k <= K2")
    p.add_argument("--method", choices=["auto", "integral", "exact", "dyadic", "variational", "all"], default="auto")
    p.add_argument("--N", type=int, default=4096, help="variational grid size")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("green-profile", parents=[common], help="Green profile table (rho, u, g)")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--rho-min", type=_positive, default=1e-6)
    p.add_argument("--points", type=_at_least_two, default=64)
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_green_profile)

    p = sub.add_parser("green-norms", parents=[common], help="L^tau norms of u and L^t norms of its gradient")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--tau", type=float, nargs="+")
    p.add_argument("--t", type=float, nargs="+")
    p.add_argument("--normalized", action="store_true")
    p.set_defaults(func=cmd_green_norms)

    p = sub.add_parser("classify", parents=[common], help="integrability and parabolicity verdicts")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--question", choices=QUESTIONS, action="append")
    p.add_argument("--tau", type=float)
    p.add_argument("--t", type=float)
    p.add_argument("--poincare", type=float, nargs="+", help="declared Poincare exponents at x0 (small radii)")
    p.add_argument("--poincare-large", type=float, nargs="+", help="declared Poincare exponents for large radii")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify-examples", parents=[common], help="run the worked-example regression tables")
    p.add_argument("--only", choices=EXAMPLES, action="append")
    p.add_argument("--inject-beta", type=float, help="replace beta in the ex-log table (negative test)")
    p.set_defaults(func=cmd_verify_examples)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SpecError, UsageError, DomainError, UnsupportedAsymptotics, KeyError) as err:
        print(f"nlpot {args.command}: error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
