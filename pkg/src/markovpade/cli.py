"""Command-line interface.

Examples
--------
    markovpade moments --example ex0 --L 6
    markovpade hankel --example polar-positive --n 4 --format json
    markovpade pade --input measure.json --n 2 --method determinant
    markovpade rationality --example rotation-invariant --n 6
    markovpade cubature --example polar-positive --n 3 --out rule.csv
    markovpade reproduce ex1-degenerate

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""
from __future__ import annotations

import argparse
import io
import json
import sys

import numpy as np

from . import catalog, cubature, harmonics, markov, measures, pade

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _g(x):
    return "%.17g" % float(np.real(x))


# ---------------------------------------------------------------------------
# inputs
# ---------------------------------------------------------------------------


def _load(args):
    """Measure, coefficient table or directional moments named by the flags."""
    if args.input and args.example:
        raise UsageError("give either --input or --example, not both")
    if args.example:
        try:
            return catalog.get_measure(args.example)
        except KeyError as exc:
            raise UsageError(str(exc.args[0])) from None
    if not args.input:
        raise UsageError("an --input file or an --example name is required")
    with open(args.input) as fh:
        text = fh.read()
    if args.input.endswith(".csv"):
        header = next((ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")), "")
        cols = [c.strip() for c in header.split(",")]
        if cols == ["l", "value"]:
            return markov.read_directional_csv(io.StringIO(text))
        if cols == ["l", "k", "m", "coefficient"]:
            return markov.read_table_csv(io.StringIO(text))
        raise UsageError("CSV input needs columns l,value or l,k,m,coefficient")
    return measures.parse_measure(text)


def _table(src, L):
    if isinstance(src, markov.DirectionalMoments):
        raise UsageError("this command needs a measure or a coefficient table, not a moment stream")
    if isinstance(src, markov.CoefficientTable):
        if src.L < L:
            raise UsageError(f"table holds f_0..f_{src.L}, need L >= {L}")
        return src.truncate(L)
    return markov.coefficient_table(src, L)


def _emit(args, text):
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_moments(args):
    table = _table(_load(args), args.L if args.L is not None else 8)
    if args.format == "json":
        rows = [
            {"l": l, "k": k, "m": m, "coefficient": c}
            for l, e in enumerate(table.entries)
            for (k, m), c in sorted(e.items())
        ]
        _emit(args, _json({"d": table.d, "R": table.R, "L": table.L, "rows": rows}))
    else:
        buf = io.StringIO()
        markov.write_table_csv(table, buf)
        _emit(args, buf.getvalue())
    return EXIT_OK


def cmd_hankel(args):
    N = args.n or 3
    table = _table(_load(args), 2 * N - 2)
    tol = args.tol if args.tol is not None else markov.POSITIVITY_TOL
    rep = markov.hankel_positivity_report(table, N, args.sphere_degree, tol)
    verdict = "positive" if rep.positive else "not-positive"
    if args.format == "json":
        _emit(args, _json({
            "verdict": verdict,
            "N": N,
            "tol": tol,
            "scale": rep.scale,
            "min_value": rep.min_value,
            "min_ratio": rep.min_ratio,
            "witness_theta": rep.witness_theta.tolist(),
            "witness_n": rep.witness_n,
            "failures": [{"theta": rep.directions[j].tolist(), "n": n} for j, n in rep.failures],
            "directions": rep.directions.tolist(),
            "values": rep.values.tolist(),
        }))
        return EXIT_OK
    d = table.d
    lines = [f"# verdict={verdict}", f"# min_ratio={_g(rep.min_ratio)}",
             ",".join(["j"] + [f"theta_{i + 1}" for i in range(d)] + ["n", "H"])]
    for j, th in enumerate(rep.directions):
        for n in range(1, N + 1):
            lines.append(",".join([str(j)] + [_g(v) for v in th] + [str(n), _g(rep.values[j, n - 1])]))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _pair_row(dm, n, method):
    try:
        pr = pade.pade_pair(dm, n, method)
    except pade.DegeneratePairError:
        return {"status": "degenerate", "hankel": 0.0, "P": [], "Q": [], "remainder_head": []}
    P = np.zeros(n + 1)
    P[: pr.P.coeffs.size] = pr.P.coeffs.real
    Q = np.zeros(n)
    Q[: pr.Q.coeffs.size] = pr.Q.coeffs.real
    return {
        "status": "normal" if pr.normal else "non-normal",
        "hankel": pr.hankel,
        "P": P.tolist(),
        "Q": Q.tolist(),
        "remainder_head": np.real(pr.remainder_head).tolist(),
    }


def cmd_pade(args):
    n = args.n or 2
    src = _load(args)
    if isinstance(src, markov.DirectionalMoments):
        items = [(None, src)]
    else:
        table = _table(src, 2 * n - 1)
        grid = harmonics.sphere_rule(table.d, args.sphere_degree or 4 * n - 1).nodes
        items = [(th, table.directional(th, 2 * n - 1)) for th in grid]
    rows = []
    for th, dm in items:
        row = _pair_row(dm, n, args.method)
        row["theta"] = None if th is None else th.tolist()
        rows.append(row)
    if args.format == "json":
        _emit(args, _json({"n": n, "method": args.method, "pairs": rows}))
        return EXIT_OK
    d = len(rows[0]["theta"]) if rows[0]["theta"] is not None else 0
    head = (["j"] + [f"theta_{i + 1}" for i in range(d)] + ["status", "hankel"]
            + [f"p_{i}" for i in range(n + 1)] + [f"q_{i}" for i in range(n)]
            + [f"rem_{i + 1}" for i in range(n)])
    lines = [",".join(head)]
    for j, r in enumerate(rows):
        vals = r["P"] + r["Q"] + r["remainder_head"]
        if r["status"] == "degenerate":
            vals = [0.0] * (3 * n + 1)
        theta = r["theta"] or []
        lines.append(",".join([str(j)] + [_g(v) for v in theta] + [r["status"], _g(r["hankel"])]
                              + [_g(v) for v in vals]))
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_rationality(args):
    n_max = args.n or 6
    table = _table(_load(args), 2 * n_max - 2)
    tol = args.tol if args.tol is not None else markov.KRONECKER_TOL
    rep = markov.kronecker_test(table, n_max, tol, args.sphere_degree)
    summary = [
        {"m": m + 1, "vanishing": rep.vanishing[m],
         "max_abs_H": float(np.abs(rep.residual[:, m]).max()),
         "max_ratio": float(rep.ratios[:, m].max())}
        for m in range(n_max)
    ]
    if args.format == "csv":
        lines = [f"# rational={str(rep.rational).lower()}",
                 f"# detected_degree={'' if rep.detected_degree is None else rep.detected_degree}",
                 "m,vanishing,max_abs_H,max_ratio"]
        lines += [f"{s['m']},{str(s['vanishing']).lower()},{_g(s['max_abs_H'])},{_g(s['max_ratio'])}"
                  for s in summary]
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, _json({"rational": rep.rational, "detected_degree": rep.detected_degree,
                           "n_max": n_max, "tol": tol, "orders": summary,
                           "residual": rep.residual.tolist()}))
    return EXIT_OK


def cmd_cubature(args):
    n = args.n or 3
    src = _load(args)
    if isinstance(src, markov.DirectionalMoments):
        raise UsageError("cubature needs a measure or a coefficient table")
    try:
        rule = cubature.build_cubature(src, n, args.sphere_degree)
    except cubature.CubatureError as exc:
        print(f"cubature: {exc}", file=sys.stderr)
        return EXIT_FAIL
    tol = args.tol if args.tol is not None else 1e-8
    ex = cubature.exactness_report(rule)
    pos = cubature.positivity_check(rule, 100, args.seed)
    ok = ex.max_rel_error <= tol and pos.passed
    if args.format == "json":
        _emit(args, _json({
            "rule": json.loads(cubature.rule_to_json(rule)),
            "exactness": {"max_rel_error": ex.max_rel_error, "oracle": ex.oracle,
                          "rows": [vars(r) for r in ex.rows]},
            "positivity": {k: v for k, v in vars(pos).items()},
            "passed": ok,
        }))
    else:
        buf = io.StringIO()
        buf.write(f"# n={n}\n# sphere_degree={rule.sphere.exact_degree}\n")
        buf.write(f"# max_rel_error={_g(ex.max_rel_error)}\n")
        buf.write(f"# positivity_violations={len(pos.violations)}\n")
        buf.write(f"# schmudgen_max={_g(pos.schmudgen_max)}\n")
        cubature.write_rule_csv(rule, buf)
        _emit(args, buf.getvalue())
    return EXIT_OK if ok else EXIT_FAIL


def cmd_reproduce(args):
    name = args.name or args.example
    if name is None:
        raise UsageError("reproduce needs an example name")
    checks = catalog.reproduce(name, args.n, args.seed)
    if args.format == "json":
        _emit(args, _json({"example": name, "checks": [vars(c) for c in checks],
                           "passed": all(c.passed for c in checks)}))
    else:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  {c.name}  ({c.detail})" for c in checks]
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAIL


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="measure JSON, or CSV of moments (l,value) or coefficients (l,k,m,coefficient)")
    common.add_argument("--example", help=f"built-in example: {', '.join(catalog.EXAMPLES)}")
    common.add_argument("--n", type=_positive_int, help="order (Pade, cubature) or maximal order (hankel, rationality)")
    common.add_argument("--L", type=int, help="highest coefficient function for 'moments' (default 8)")
    common.add_argument("--sphere-degree", type=int, help="exactness degree of the direction grid")
    common.add_argument("--tol", type=_positive_float, help="verification tolerance")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")

    parser = argparse.ArgumentParser(prog="markovpade", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("moments", parents=[common], help="coefficient table (l,k,m,coefficient)").set_defaults(
        func=cmd_moments, default_format="csv")
    sub.add_parser("hankel", parents=[common], help="Hankel determinants on a direction grid").set_defaults(
        func=cmd_hankel, default_format="csv")
    p = sub.add_parser("pade", parents=[common], help="Pade pairs per direction")
    p.add_argument("--method", choices=("linear-solve", "determinant"), default="linear-solve")
    p.set_defaults(func=cmd_pade, default_format="csv")
    sub.add_parser("rationality", parents=[common], help="Kronecker rationality test").set_defaults(
        func=cmd_rationality, default_format="json")
    sub.add_parser("cubature", parents=[common], help="cubature rule with exactness and positivity checks").set_defaults(
        func=cmd_cubature, default_format="csv")
    r = sub.add_parser("reproduce", parents=[common], help="canned checks for a built-in example")
    r.add_argument("name", nargs="?", choices=list(catalog.EXAMPLES))
    r.set_defaults(func=cmd_reproduce, default_format="csv")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    if args.L is not None and args.L < 0:
        parser.error("--L must be >= 0")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except measures.SchemaError as exc:
        print(f"{parser.prog}: schema error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"{parser.prog}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
