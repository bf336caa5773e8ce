"""Command line entry point: ``rangesum <subcommand> ...``.

Exit codes: 0 success, 1 a checked mathematical assertion failed, 2 usage
error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from collections import defaultdict
from pathlib import Path

import jsonschema

from . import charsum, constructions, directions, manifest, profile, search
from .fp_core import as_modulus
from .poly import DegreeOverflowError, PolySyntaxError, eval_all, parse_poly, range_sum, \
    range_sum_mod_check

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class UsageError(Exception):
    pass


class BudgetExceeded(Exception):
    pass


def default_threads() -> int:
    env = os.environ.get("RANGESUM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


def _prime(text: str) -> int:
    try:
        return as_modulus(int(text)).p
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _degree_range(text: str) -> tuple:
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad degree {text!r}; use D or MIN:MAX")


def _parse(expr: str, p: int, fold: bool = False):
    try:
        return parse_poly(expr, p, reduce_frobenius=fold)
    except (PolySyntaxError, DegreeOverflowError) as exc:
        raise UsageError(str(exc))


# ----------------------------------------------------------------------
# subcommands; each returns (result payload, exit code, csv rows or None)


def cmd_verify(args):
    f = _parse(args.poly, args.p, args.reduce_frobenius)
    v = eval_all(f)
    total = range_sum(v)
    ok = True
    if args.expect_sum is not None and total != args.expect_sum:
        ok = False
    if args.expect_degree is not None and f.degree != args.expect_degree:
        ok = False
    mod_ok = range_sum_mod_check(f)
    result = {
        "p": args.p, "expression": args.poly, "coeffs": f.to_json()["coeffs"],
        "degree": f.degree, "values": list(v.values), "range_sum": total,
        "mod_check": mod_ok, "expect_sum": args.expect_sum,
        "expect_degree": args.expect_degree, "ok": ok and mod_ok,
    }
    return result, EXIT_OK if result["ok"] else EXIT_FAIL, None


def cmd_search(args):
    p = args.p
    if args.histogram:
        hist = search.degree_histogram(p, budget=args.budget)
        exhaustive = all(h["status"] != "not-exhausted" for h in hist.values())
        result = {"mode": "histogram", "p": p, "exhaustive": exhaustive,
                  "histogram": {str(d): h for d, h in hist.items()}}
        return result, EXIT_OK if exhaustive else EXIT_BUDGET, None
    if args.degree is None:
        raise UsageError("--degree is required unless --histogram is given")
    lo, hi = args.degree
    try:
        spec = search.SearchSpec(p, lo, hi, max_support=args.max_support,
                                 canonicalize=not args.no_canon, budget=args.budget,
                                 time_limit=args.time_limit, seed=args.seed or 0)
    except search.SearchSpecError as exc:
        raise UsageError(str(exc))
    res = search.search(spec, workers=args.threads)
    bad = search.verify_result(res)
    result = {"mode": "orbits", **res.as_dict(),
              "false_positives": [list(v.values) for v in bad]}
    if bad:
        code = EXIT_FAIL
    elif not res.exhaustive:
        code = EXIT_BUDGET
    else:
        code = EXIT_OK
    return result, code, None


def cmd_audit(args):
    p, seed = args.p, (args.seed if args.seed is not None else 0)
    rows = None
    if args.kind == "alpha":
        if args.sample is None and not args.exhaustive and p > charsum.EXHAUSTIVE_LIMIT:
            raise BudgetExceeded(f"p = {p} needs --sample for the subset audit")
        try:
            summ = charsum.exhaustive_audit(
                p, sample=args.sample, seed=seed, workers=args.threads,
                keep_rows=args.format == "csv")
        except charsum.AuditBudgetError as exc:
            raise BudgetExceeded(str(exc))
        result = {"kind": "alpha", "p": p, "holds": summ.all_hold, **summ.as_dict()}
        if args.format == "csv":
            rows = list(charsum.audit_csv_rows(summ))
    elif args.kind == "beta":
        rng = random.Random(seed)
        n = args.sample or 1000
        reports = [charsum.beta_report(charsum.random_multiset(p, rng), p, seed=seed)
                   for _ in range(n)]
        viol = [r for r in reports if not r.holds]
        worst = max(reports, key=lambda r: r.bound_sq_lhs / r.bound_sq_rhs)
        result = {"kind": "beta", "p": p, "samples": n, "seed": seed,
                  "violations": len(viol), "holds": not viol,
                  "worst": worst.as_dict()}
        rows = [["p", "subject_id", "statistic", "bound_sq_lhs", "bound_sq_rhs", "holds", "seed"]]
        rows += [[p, r.subject, r.statistic, r.bound_sq_lhs, r.bound_sq_rhs, int(r.holds), seed]
                 for r in reports]
    else:
        rng = random.Random(seed)
        n = args.betas
        betas = [rng.randrange(p) for _ in range(n)]
        counts = charsum.pv_interval_counts(p, betas)
        need = charsum.pv_required_count(p)
        need2 = charsum.pv_required_count(p, math.log2)
        lo, hi = charsum.pv_interval(p)
        result = {"kind": "pv", "p": p, "betas": n, "seed": seed,
                  "interval": [lo, hi], "required": need, "required_log2": need2,
                  "min_count": int(counts.min()) if n else None,
                  "max_count": int(counts.max()) if n else None,
                  "violations": int((counts < need).sum()),
                  "holds": bool((counts >= need).all())}
        rows = [["p", "subject_id", "statistic", "bound_sq_lhs", "bound_sq_rhs", "holds", "seed"]]
        rows += [[p, f"beta:{b}", int(c), int(c), need, int(c >= need), seed]
                 for b, c in zip(betas, counts.tolist())]
    return result, EXIT_OK if result["holds"] else EXIT_FAIL, rows


def cmd_construct(args):
    fam = args.family
    try:
        if fam == "legendre":
            _need_p(args)
            recs = list(constructions.legendre_family(args.p))
        elif fam == "small":
            recs = constructions.small_prime_examples(strict=False)
            if args.p is not None:
                recs = [r for r in recs if r.p == args.p]
                if not recs:
                    raise UsageError(f"no small-prime example for p = {args.p}")
        else:
            _need_p(args)
            alphas = [args.alpha] if args.alpha is not None else \
                constructions.cube_roots_of_unity(args.p)
            if args.p % 3 != 1:
                raise UsageError(f"cubic families need p = 1 mod 3, got {args.p}")
            if fam == "cubic":
                recs = [constructions.cubic_family(args.p, a) for a in alphas]
            else:
                which = [args.which] if args.which else [1, 2]
                recs = [constructions.scaled_cubic(args.p, a, w) for a in alphas for w in which]
    except constructions.ConstructionError as exc:
        raise UsageError(str(exc))
    ok = all(r.verified for r in recs)
    result = {"family": fam, "records": [r.as_dict() for r in recs], "all_verified": ok}
    return result, EXIT_OK if ok else EXIT_FAIL, None


def _need_p(args):
    if args.p is None:
        raise UsageError("--p is required for this family")


def cmd_directions(args):
    p = args.p
    if args.redei:
        out = directions.redei_scan(p, trials=args.trials, seed=args.seed or 0)
        return {"mode": "redei", **out}, EXIT_OK if out["holds"] else EXIT_FAIL, None
    if args.ls:
        out = directions.ls_count_check(p)
        return {"mode": "ls", **out}, EXIT_OK, None
    if args.points:
        try:
            S = directions.PlanarSet.from_json(Path(args.points).read_text())
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            raise UsageError(f"bad points file: {exc}")
        if S.p != p:
            raise UsageError(f"points file is over p = {S.p}, not {p}")
        source = {"points": args.points}
    elif args.poly:
        S = directions.graph_of(_parse(args.poly, p))
        source = {"poly": args.poly}
    else:
        raise UsageError("give one of --poly, --points, --ls, --redei")
    d = directions.directions_of(S)
    return {"mode": "set", "p": p, "source": source, **d.to_json()}, EXIT_OK, None


def cmd_profile(args):
    f = _parse(args.poly, args.p)
    try:
        rep = profile.profile_report(f)
    except profile.ProfileUsageError as exc:
        raise UsageError(str(exc))
    inst = profile.normalize_instance(f)
    congruence = profile.normalized_congruence_failures(inst)
    rep["normalized_congruence_failures"] = sorted(congruence)
    ok = not rep["eq2_failures"] and not congruence and \
        all(abs(r) <= 2 * f.p for r in rep["r"])
    return rep, EXIT_OK if ok else EXIT_FAIL, None


def cmd_report(args):
    docs = []
    for path in args.inputs:
        try:
            docs.append((path, manifest.load_document(path)))
        except (OSError, json.JSONDecodeError, jsonschema.ValidationError, KeyError) as exc:
            raise UsageError(f"{path}: not a valid rangesum document ({_short(exc)})")
    return build_report(docs), EXIT_OK, None


def _short(exc) -> str:
    return str(exc).splitlines()[0][:200]


def build_report(docs) -> dict:
    existence, audits, checklist = [], [], []
    by_p = defaultdict(lambda: {"existence": [], "audits": [], "constructions": []})
    for path, doc in docs:
        res = doc["result"]
        if doc["kind"] == "search" and res["mode"] == "orbits":
            spec = res["spec"]
            row = {"p": spec["p"], "degree_min": spec["degree_min"],
                   "degree_max": spec["degree_max"], "orbits": res["counters"]["orbits"],
                   "exhaustive": res["exhaustive"],
                   "status": "exists" if res["orbits"] else
                   ("none" if res["exhaustive"] else "not-exhausted")}
            existence.append(row)
            by_p[spec["p"]]["existence"].append(row)
        elif doc["kind"] == "search":
            for d, h in res["histogram"].items():
                row = {"p": res["p"], "degree_min": int(d), "degree_max": int(d),
                       "orbits": None, "exhaustive": res["exhaustive"], "status": h["status"]}
                existence.append(row)
                by_p[res["p"]]["existence"].append(row)
        elif doc["kind"] == "audit":
            row = {"p": res["p"], "kind": res["kind"], "holds": res["holds"],
                   "extreme": res.get("worst_alpha", res.get("min_count",
                                      (res.get("worst") or {}).get("statistic")))}
            audits.append(row)
            by_p[res["p"]]["audits"].append(row)
        elif doc["kind"] == "construct":
            for rec in res["records"]:
                row = {"p": rec["p"], "name": rec["name"], "verified": rec["verified"],
                       "range_sum": rec["range_sum"], "degree": rec["degree"]}
                checklist.append(row)
                by_p[rec["p"]]["constructions"].append(row)
    key = lambda r: (r["p"], json.dumps(r, sort_keys=True))
    return {
        "inputs": len(docs),
        "existence": sorted(existence, key=key),
        "audits": sorted(audits, key=key),
        "constructions": sorted(checklist, key=key),
        "by_p": {str(p): by_p[p] for p in sorted(by_p)},
    }


def report_csv_rows(rep: dict) -> list:
    rows = [["section", "p", "item", "status"]]
    for r in rep["existence"]:
        deg = r["degree_min"] if r["degree_min"] == r["degree_max"] else \
            f"{r['degree_min']}:{r['degree_max']}"
        rows.append(["existence", r["p"], f"degree {deg}", r["status"]])
    for r in rep["audits"]:
        rows.append(["audit", r["p"], r["kind"], "holds" if r["holds"] else "violated"])
    for r in rep["constructions"]:
        rows.append(["construction", r["p"], r["name"], "verified" if r["verified"] else "failed"])
    return rows


# ----------------------------------------------------------------------


COMMANDS = {
    "verify": cmd_verify, "search": cmd_search, "audit": cmd_audit,
    "construct": cmd_construct, "directions": cmd_directions,
    "profile": cmd_profile, "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None,
                        help="worker processes (default: $RANGESUM_THREADS or CPU count)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")

    ap = argparse.ArgumentParser(prog="rangesum", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"rangesum {manifest.__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="range sum and degree of one polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--p", type=_prime, required=True)
    s.add_argument("--expect-sum", type=int)
    s.add_argument("--expect-degree", type=int)
    s.add_argument("--reduce-frobenius", action="store_true")

    s = sub.add_parser("search", parents=[common], help="exhaustive orbit search")
    s.add_argument("--p", type=_prime, required=True)
    s.add_argument("--degree", type=_degree_range)
    s.add_argument("--max-support", type=int)
    s.add_argument("--no-canon", action="store_true")
    s.add_argument("--budget", type=int, help="max candidates to enumerate")
    s.add_argument("--time-limit", type=float, help="wall-clock seconds")
    s.add_argument("--histogram", action="store_true",
                   help="existence status for every degree (p-1)/2 .. p-1")

    s = sub.add_parser("audit", parents=[common], help="character-sum bound audits")
    s.add_argument("--p", type=_prime, required=True)
    s.add_argument("--kind", choices=("alpha", "beta", "pv"), default="alpha")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--exhaustive", action="store_true")
    g.add_argument("--sample", type=int)
    s.add_argument("--betas", type=int, default=1000, help="pv: number of random beta")

    s = sub.add_parser("construct", parents=[common], help="explicit families")
    s.add_argument("--family", required=True,
                   choices=("legendre", "small", "cubic", "scaled-cubic"))
    s.add_argument("--p", type=_prime)
    s.add_argument("--alpha", type=int)
    s.add_argument("--which", type=int, choices=(1, 2))

    s = sub.add_parser("directions", parents=[common], help="direction sets")
    s.add_argument("--p", type=_prime, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--poly")
    g.add_argument("--points", help='JSON file {"p": P, "points": [[x, y], ...]}')
    g.add_argument("--ls", action="store_true", help="direction count of x^((p+1)/2)")
    g.add_argument("--redei", action="store_true", help="scan function graphs")
    s.add_argument("--trials", type=int, help="redei: random graphs (default: all p^p)")

    s = sub.add_parser("profile", parents=[common], help="root/value profile of a polynomial")
    s.add_argument("--poly", required=True)
    s.add_argument("--p", type=_prime, required=True)

    s = sub.add_parser("report", parents=[common], help="merge JSON outputs")
    s.add_argument("inputs", nargs="*")
    return ap


def _write(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _csv_text(rows, man: manifest.RunManifest) -> str:
    buf = io.StringIO()
    buf.write("# manifest: " + json.dumps(man.as_dict(), sort_keys=True) + "\n")
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.threads is None:
        args.threads = default_threads()
    params = {k: v for k, v in vars(args).items() if k not in ("out",)}
    inputs = list(getattr(args, "inputs", []) or [])
    if getattr(args, "points", None):
        inputs.append(args.points)
    existing = [p for p in inputs if Path(p).is_file()]
    man = manifest.RunManifest(args.command, params, seed=args.seed, inputs=existing)
    try:
        result, code, rows = COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"rangesum {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"rangesum {args.command}: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    man.close()
    if args.format == "csv":
        if rows is None:
            rows = report_csv_rows(result) if args.command == "report" else \
                [["key", "value"]] + [[k, json.dumps(v)] for k, v in sorted(result.items())]
        _write(_csv_text(rows, man), args.out)
    else:
        _write(manifest.dumps(manifest.envelope(man, result)), args.out)
    return code


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
