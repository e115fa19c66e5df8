"""Command-line front end.

Every report is a JSON object with top-level keys ``config``, ``results``,
``summary`` and ``version`` (or CSV rows with the same content flattened).
Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Any, List, Optional, Sequence

from . import __version__
from .dims import Dims
from .errors import ConvergenceError, DomainError
from .exactnum import SymExpr, to_float
from .identities import ALL_IDS, sweep
from .laguerre import KernelSpec, oracle_IA, oracle_IB, quadrature_IA, quadrature_IB
from .montecarlo import estimate_moments
from .moments import (
    IA_closed,
    IA_consolidated,
    IB_closed,
    IB_consolidated,
    a1,
    a2,
    a3,
    assemble_E_T2,
    b4,
    b5,
    b6,
    induced_T2_target,
    moment_report,
    variance_S_via_relation,
    vpo_variance,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
MAX_SWEEP = 25
THREADS_ENV = "VNMOMENTS_THREADS"
Z_LIMIT = 4.0
ORACLE_RTOL = 1e-6


class UsageError(Exception):
    pass


# serialization -------------------------------------------------------------


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def _tokenize(obj: Any, floats: List[float]) -> Any:
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
        floats.append(obj)
        return f"@@F{len(floats) - 1}@@"
    if isinstance(obj, dict):
        return {k: _tokenize(v, floats) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_tokenize(v, floats) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _tokenize(obj.item(), floats)
    return obj


def dumps(obj: Any) -> str:
    """JSON with every float written to 17 significant digits."""
    floats: List[float] = []
    text = json.dumps(_tokenize(obj, floats), indent=2)
    for i in range(len(floats) - 1, -1, -1):
        text = text.replace(f'"@@F{i}@@"', fmt_float(floats[i]))
    return text + "\n"


def exact_fields(e: SymExpr) -> dict:
    return {"exact": str(e), "coeffs": e.to_json(), "numeric": to_float(e)}


def _csv_cell(v: Any) -> str:
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return "" if v is None else str(v)


def to_csv(rows: Sequence[dict]) -> str:
    if not rows:
        return ""
    cols: List[str] = []
    for r in rows:
        cols.extend(k for k in r if k not in cols)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for r in rows:
        w.writerow([_csv_cell(r.get(c)) for c in cols])
    return buf.getvalue()


# commands --------------------------------------------------------------------


def _dims(args) -> Dims:
    try:
        return Dims(args.m, args.n)
    except DomainError as exc:
        raise UsageError(str(exc)) from None


def _bound(value: int) -> int:
    if not 1 <= value <= MAX_SWEEP:
        raise UsageError(f"sweep bound must be between 1 and {MAX_SWEEP}")
    return value


def cmd_moments(args):
    d = _dims(args)
    results = [moment_report(d, q).to_dict() for q in ("mean_S", "var_S")]
    row = {"m": d.m, "n": d.n}
    for r in results:
        row[r["quantity"]] = r["exact"]
        row[r["quantity"] + "_numeric"] = r["numeric"]
    return results, [row], {"pass": True}


def _mismatch(label: str, lhs: SymExpr, rhs: SymExpr) -> dict:
    return {"check": label, "lhs": str(lhs), "rhs": str(rhs)}


def _verify_conjecture(max_n: int):
    results = []
    for n in range(1, max_n + 1):
        for m in range(1, n + 1):
            d = Dims(m, n)
            entry = {"m": m, "n": n, "failures": []}
            lhs, rhs = assemble_E_T2(d), induced_T2_target(d)
            if lhs != rhs:
                entry["failures"].append(_mismatch("E_T2", lhs, rhs))
            lhs, rhs = variance_S_via_relation(d), vpo_variance(d)
            if lhs != rhs:
                entry["failures"].append(_mismatch("var_S", lhs, rhs))
            entry["pass"] = not entry["failures"]
            results.append(entry)
    return results


def _verify_consolidation(max_n: int):
    results = []
    for n in range(4, max_n + 1):
        for m in range(3, n):
            d = Dims(m, n)
            entry = {"m": m, "n": n, "failures": []}
            for label, lhs, rhs in (
                ("I_A", IA_consolidated(d), IA_closed(d)),
                ("I_B", IB_consolidated(d), IB_closed(d)),
            ):
                if lhs != rhs:
                    entry["failures"].append(_mismatch(label, lhs, rhs))
            diffs = (
                ("a2-b5", a2(m, n) - b5(m, n), 0),
                ("a1-b4", a1(m, n) - b4(m, n), m * (n - m) * (n - m + 1) * (2 * n + m + 1)),
                ("a3-b6", a3(m, n) - b6(m, n), m * (m + 1) * (n - m) * (n - m + 1) / 2),
            )
            for label, got, want in diffs:
                if got != want:
                    entry["failures"].append({"check": label, "lhs": str(got), "rhs": str(want)})
            entry["pass"] = not entry["failures"]
            results.append(entry)
    return results


def _verify_identities(max_param: int):
    results = []
    for r in sweep(max_param, ALL_IDS):
        entry = {"identity": r.identity, "params": list(r.params), "pass": r.equal}
        if not r.equal:
            entry["lhs"], entry["rhs"] = str(r.lhs), str(r.rhs)
        results.append(entry)
    return results


def cmd_verify(args):
    bound = _bound(args.max)
    if args.target == "conjecture":
        results = _verify_conjecture(bound)
    elif args.target == "consolidation":
        results = _verify_consolidation(bound)
    else:
        results = _verify_identities(bound)
    failed = [r for r in results if not r["pass"]]
    for r in failed:
        print(f"FAIL {json.dumps({k: v for k, v in r.items() if k != 'pass'})}", file=sys.stderr)
    rows = [
        {k: (json.dumps(v) if isinstance(v, (list, dict)) else v) for k, v in r.items()}
        for r in results
    ]
    summary = {"pass": not failed, "checked": len(results), "failed": len(failed)}
    return results, rows, summary


def cmd_oracle(args):
    d = _dims(args)
    if d.n > 8:
        raise UsageError("oracle cross-checks require n <= 8")
    closed = IA_closed(d) if args.quantity == "ia" else IB_closed(d)
    result = {"m": d.m, "n": d.n, "quantity": args.quantity, "method": args.method}
    result["closed_form"] = exact_fields(closed)
    if args.method == "symbolic":
        oracle = oracle_IA(d) if args.quantity == "ia" else oracle_IB(d)
        diff = oracle - closed
        result["oracle"] = exact_fields(oracle)
        result["difference"] = str(diff)
        result["abs_deviation"] = abs(to_float(diff))
        result["pass"] = diff.is_zero()
    else:
        fn = quadrature_IA if args.quantity == "ia" else quadrature_IB
        target = to_float(closed)
        try:
            q = fn(KernelSpec(d))
            value, err, converged = q.value, q.error_estimate, True
        except ConvergenceError as exc:
            value, err, converged = exc.estimate, exc.error, False
            print(f"quadrature did not converge, error estimate {err:.3e}", file=sys.stderr)
        dev = abs(value - target)
        rel = dev / abs(target) if target else dev
        result.update(
            oracle=value,
            error_estimate=err,
            converged=converged,
            abs_deviation=dev,
            rel_deviation=rel,
            pass_=converged and rel < ORACLE_RTOL,
        )
        result["pass"] = result.pop("pass_")
    row = {
        "m": d.m,
        "n": d.n,
        "quantity": args.quantity,
        "method": args.method,
        "closed_form": result["closed_form"]["exact"],
        "closed_numeric": result["closed_form"]["numeric"],
        "abs_deviation": result["abs_deviation"],
        "pass": result["pass"],
    }
    return [result], [row], {"pass": result["pass"]}


def cmd_mc(args):
    d = _dims(args)
    if args.samples < 1000:
        raise UsageError("mc needs --samples >= 1000")
    if args.threads < 1:
        raise UsageError("--threads must be >= 1")
    rep = estimate_moments(d, args.samples, args.seed, threads=args.threads)
    out = rep.to_dict()
    checks = []
    for name, e in rep.estimates.items():
        checks.append({"check": name, "z": e.z, "pass": abs(e.z) < Z_LIMIT})
    corr_z = rep.corr_r_S * math.sqrt(rep.N)
    checks.append({"check": "corr_r_S", "z": corr_z, "pass": abs(corr_z) < Z_LIMIT})
    out["checks"] = checks
    rows = []
    for name, e in rep.estimates.items():
        rows.append({"quantity": name, **e.to_dict()})
    rows.append({"quantity": "corr_r_S", "value": rep.corr_r_S, "z": corr_z})
    for row in rows:
        row["pass"] = next(c["pass"] for c in checks if c["check"] == row["quantity"])
    summary = {"pass": all(c["pass"] for c in checks), "checked": len(checks)}
    summary["failed"] = sum(not c["pass"] for c in checks)
    return [out], rows, summary


# argument parsing --------------------------------------------------------------


def _default_threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")

    dims = argparse.ArgumentParser(add_help=False)
    dims.add_argument("--m", type=int, required=True)
    dims.add_argument("--n", type=int, required=True)

    p = argparse.ArgumentParser(prog="vnmoments", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("moments", parents=[common, dims], help="exact entropy mean and variance")
    sp.set_defaults(func=cmd_moments)

    sp = sub.add_parser("verify", parents=[common], help="exhaustive exact sweeps")
    sp.add_argument("target", choices=("conjecture", "identities", "consolidation"))
    sp.add_argument("--max-n", "--max", dest="max", type=int, default=None)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("oracle", parents=[common, dims], help="independent checks of I_A, I_B")
    sp.add_argument("quantity", choices=("ia", "ib"))
    sp.add_argument("--method", choices=("symbolic", "quadrature"), default="symbolic")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("mc", parents=[common, dims], help="Monte Carlo moment estimates")
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--threads", type=int, default=_default_threads())
    sp.set_defaults(func=cmd_mc)
    return p


_VERIFY_DEFAULTS = {"conjecture": 15, "identities": 20, "consolidation": 12}


def _config(args) -> dict:
    cfg = {k: v for k, v in vars(args).items() if k not in ("func", "out")}
    return cfg


def render(args, results, rows, summary) -> str:
    if args.format == "csv":
        return to_csv(rows)
    return dumps(
        {"config": _config(args), "results": results, "summary": summary, "version": __version__}
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    if args.command == "verify" and args.max is None:
        args.max = _VERIFY_DEFAULTS[args.target]
    try:
        results, rows, summary = args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(args, results, rows, summary)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if summary["pass"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
