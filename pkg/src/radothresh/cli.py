"""Command-line interface.

Exit codes: 0 success, 1 usage or parse error, 2 validation failure,
3 budget or guard refusal.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import catalogue
from .errors import GuardError, InputError, NotRadoError, OrderingError, RadoError
from .hypergraph import (cherry_holds, codegree_function, enumerate_solutions,
                         projection_count_audit, tameness_constant)
from .rado import RadoProfile, m_asym
from .ramsey import EXHAUSTED, GOOD, RamseyInstance, decide_arrow
from .threshold import (concentration_check, config_hash, crossing_constant, janson_bound, preflight,
                        threshold_scan)
from .weights import WeightFunction, boundedness_audit, minimiser_sets, r_x, solve_weights

EXIT_OK, EXIT_USAGE, EXIT_INVALID, EXIT_GUARD = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def fmt(x) -> str:
    """Exact rational plus a decimal approximation."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d (%.6g)" % (x.numerator, x.denominator, float(x))


def _ints(text: str) -> list[int]:
    try:
        vals = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError("not a comma-separated integer list: %r" % text) from None
    if not vals:
        raise UsageError("empty grid")
    return vals


def _rationals(text: str) -> list[str]:
    vals = [v.strip() for v in text.split(",") if v.strip()]
    if not vals:
        raise UsageError("empty grid")
    for v in vals:
        try:
            if Fraction(v) <= 0:
                raise UsageError("grid values must be positive: %r" % v)
        except (ValueError, ZeroDivisionError):
            raise UsageError("not a rational number: %r" % v) from None
    return vals


def _matrices(args, minimum=1) -> list[RadoProfile]:
    names = list(args.matrices or []) + list(args.matrix or [])
    if len(names) < minimum:
        raise UsageError("need at least %d matrix argument(s)" % minimum)
    return [catalogue.resolve(a) for a in names]


def _require_rado(P: RadoProfile):
    if not P.is_rado:
        raise NotRadoError("%s is not a Rado matrix: %s" % (P.label(), "; ".join(P.issues) or "unknown"))


def _emit(args, text: str, name: str):
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)
    else:
        sys.stdout.write(text)


def _profile_dict(P: RadoProfile) -> dict:
    return {
        "name": P.label(),
        "rows": [list(r) for r in P.matrix.rows],
        "rank": P.rank,
        "dropped_rows": [i + 1 for i in P.dropped_rows],
        "partition_regular": P.partition_regular,
        "certificate": None if P.certificate is None else [[j + 1 for j in b] for b in P.certificate],
        "irredundant": P.irredundant,
        "witness": None if P.witness is None else list(P.witness),
        "m": None if P.m is None else str(P.m),
        "m_argmax": None if P.m_argmax is None else [j + 1 for j in P.m_argmax],
        "issues": list(P.issues),
    }


# --------------------------------------------------------------------------
# subcommands


def cmd_check(args) -> int:
    profs = _matrices(args)
    ok = True
    lines, data = [], []
    for P in profs:
        data.append(_profile_dict(P))
        lines.append("%s: %d x %d, rank %d" % (P.label(), len(P.original.rows), P.k, P.rank))
        for issue in P.issues:
            lines.append("  warning: %s" % issue)
        if P.partition_regular:
            blocks = " | ".join("{%s}" % ",".join(str(j + 1) for j in b) for b in P.certificate)
            lines.append("  partition-regular: yes, certificate %s" % blocks)
        else:
            lines.append("  partition-regular: no")
        lines.append("  irredundant: %s%s" % (P.irredundant, "" if P.witness is None
                                               else ", witness %s" % (P.witness,)))
        if P.m is not None:
            lines.append("  m = %s, attained at W = {%s}" % (fmt(P.m), ",".join(str(j + 1) for j in P.m_argmax)))
        ok &= P.is_rado
    if args.asym:
        if len(profs) != 2:
            raise UsageError("--asym needs exactly two matrices")
        A, B = profs
        _require_rado(A)
        _require_rado(B)
        val, W = m_asym(A, B)
        lines.append("m(%s, %s) = %s, attained at W = {%s}" % (A.label(), B.label(), fmt(val),
                                                              ",".join(str(j + 1) for j in W)))
        data.append({"asym": [A.label(), B.label()], "m": str(val), "argmax": [j + 1 for j in W]})
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n", "check.json")
    else:
        _emit(args, "\n".join(lines) + "\n", "check.txt")
    return EXIT_OK if ok else EXIT_INVALID


def cmd_audit(args) -> int:
    (A,) = _matrices(args)
    _require_rado(A)
    grid = _ints(args.grid)
    hs = {}
    rows = projection_count_audit(A, grid, cap=args.cap, hypergraphs=hs)
    out = ["%s: log-log slopes of |H_I| on n = %s" % (A.label(), ",".join(map(str, sorted(hs)))),
           "I\texponent\tslope\tdeviation\tcounts"]
    for r in rows:
        out.append("{%s}\t%d\t%.4f\t%+.4f\t%s" % (",".join(str(i + 1) for i in r.I), r.exponent, r.slope,
                                                  r.deviation, ",".join(map(str, r.counts))))
    top = max(hs)
    H = hs[top]
    K = tameness_constant(H)
    out.append("tameness constant at n=%d: %s, cherry bound %s" % (top, fmt(K),
                                                                   "holds" if cherry_holds(H, K) else "fails"))
    if args.tau is not None:
        _, delta = codegree_function(H.unordered_edges(), top, Fraction(args.tau))
        out.append("co-degree function at n=%d, tau=%s: %s" % (top, args.tau, fmt(delta)))
    data = {"matrix": A.label(), "grid": sorted(hs),
            "slopes": [{"I": [i + 1 for i in r.I], "exponent": r.exponent, "slope": r.slope,
                        "counts": r.counts} for r in rows],
            "tameness": str(K)}
    if args.boundedness:
        B = catalogue.resolve(args.boundedness)
        _require_rado(B)
        w = solve_weights(A, B)
        rep = boundedness_audit(A, B, w, grid, cap=args.cap, hypergraphs=hs)
        out.append("boundedness against %s, w = %s" % (B.label(), json.dumps(json.loads(w.to_json()))))
        out.append("n\tmin_I p^w(I)|H_I|\targmin")
        for n, v, I in zip(rep.grid, rep.minima, rep.argmins):
            out.append("%d\t%.6g\t{%s}" % (n, v, ",".join(str(i + 1) for i in I)))
        out.append("slope %.4f, target 1 - 1/m(%s) = %s" % (rep.slope, B.label(), fmt(rep.target)))
        data["boundedness"] = {"against": B.label(), "weights": json.loads(w.to_json()),
                               "minima": rep.minima, "slope": rep.slope, "target": str(rep.target)}
    if args.format == "json":
        _emit(args, json.dumps(data, indent=2) + "\n", "audit.json")
    else:
        _emit(args, "\n".join(out) + "\n", "audit.txt")
    return EXIT_OK


def cmd_weights(args) -> int:
    A1, A2 = _matrices(args, 2)
    _require_rado(A1)
    _require_rado(A2)
    w = solve_weights(A1, A2)
    sets, proper = minimiser_sets(w, A1, A2)
    m12, _ = m_asym(A1, A2)
    out = ["m(%s, %s) = %s" % (A1.label(), A2.label(), fmt(m12))]
    for i, v in enumerate(w.weights):
        out.append("w(%d) = %s\tr_x = %s" % (i + 1, fmt(v), fmt(r_x(w, i, A1, A2))))
    out.append("minimising sets: %s" % ", ".join("{%s}" % ",".join(str(i + 1) for i in I) for I in sets))
    out.append("proper: %s" % ("yes" if proper else "no"))
    if args.format == "json":
        data = {"weights": json.loads(w.to_json()), "m12": str(m12), "proper": proper,
                "minimisers": [[i + 1 for i in I] for I in sets]}
        _emit(args, json.dumps(data, indent=2) + "\n", "weights.json")
    else:
        _emit(args, "\n".join(out) + "\n", "weights.txt")
    return EXIT_OK


def cmd_arrow(args) -> int:
    mats = _matrices(args)
    for P in mats:
        _require_rado(P)
    if args.n is None or args.n < 1:
        raise UsageError("--n must be a positive integer")
    res = decide_arrow(RamseyInstance.interval(args.n, mats), args.budget)
    names = ", ".join(P.label() for P in mats)
    if args.format == "json":
        data = res.to_json()
        data.pop("seconds")
        _emit(args, json.dumps({"n": args.n, "matrices": [P.label() for P in mats], **data}, indent=2) + "\n",
              "arrow.json")
    else:
        if res.verdict == GOOD:
            cls = ["colour %d: %s" % (c + 1, sorted(x for x, v in res.colouring.items() if v == c))
                   for c in range(len(mats))]
            body = "[%d] -/-> (%s): good colouring\n  %s\n" % (args.n, names, "\n  ".join(cls))
        elif res.verdict == EXHAUSTED:
            body = "[%d] ? (%s): budget of %d nodes exhausted\n" % (args.n, names, args.budget)
        else:
            body = "[%d] --> (%s) (%d nodes)\n" % (args.n, names, res.nodes)
        _emit(args, body, "arrow.txt")
    return EXIT_GUARD if res.verdict == EXHAUSTED else EXIT_OK


def _need_seed(args):
    if args.seed is None:
        raise UsageError("--seed is required for randomised subcommands")


def _write_manifest(args, config: dict, extra: dict, csv_text: str | None):
    manifest = {"config": config, "config_hash": config_hash(config), **extra}
    if csv_text is not None:
        manifest["csv_sha256"] = hashlib.sha256(csv_text.encode()).hexdigest()
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"


def cmd_scan(args) -> int:
    mats = _matrices(args, 2 if args.r is None else 1)
    if args.r is not None:
        if len(mats) == 1:
            mats = mats * args.r
        elif len(mats) != args.r:
            raise UsageError("--r=%d but %d matrices given" % (args.r, len(mats)))
    for P in mats:
        _require_rado(P)
    _need_seed(args)
    n_grid = _ints(args.n_grid)
    c_grid = _rationals(args.c_grid)
    if args.trials < 1:
        raise UsageError("--trials must be positive")
    curve = threshold_scan(mats, n_grid, c_grid, args.trials, args.seed, args.budget, args.workers)
    checks = []
    if len(mats) >= 2:
        checks = preflight(mats, max(n_grid), args.epsilon, args.cprime, budget=args.budget)
    for c in checks:
        if not c.get("ok"):
            print("warning: preflight %s not met: %s" % (c["check"], json.dumps(c, sort_keys=True)),
                  file=sys.stderr)
    for note in curve.notices:
        print("notice: %s" % note, file=sys.stderr)
    config = {"command": "scan", "matrices": [{"name": P.label(), "rows": [list(r) for r in P.matrix.rows]}
                                              for P in mats],
              "n_grid": n_grid, "c_grid": c_grid, "trials": args.trials, "seed": args.seed,
              "budget": args.budget, "epsilon": args.epsilon, "cprime": args.cprime}
    csv_text = curve.to_csv()
    crossings = {str(n): crossing_constant(curve.by_n(n)) for n in sorted(set(n_grid))}
    extra = {"density": str(curve.density), "order": curve.names, "notices": curve.notices,
             "preflight": checks, "crossing_constants": crossings}
    manifest = _write_manifest(args, config, extra, csv_text)
    if args.format == "json":
        rows = [{"n": c.n, "C": c.C, "p": c.p, "trials": c.trials, "successes": c.successes,
                 "unknown": c.unknown, "ci_low": round(c.interval[0], 6), "ci_high": round(c.interval[1], 6)}
                for c in curve.cells]
        _emit(args, json.dumps(rows, indent=2) + "\n", "scan.json")
    else:
        _emit(args, csv_text, "scan.csv")
    if args.out:
        (Path(args.out) / "manifest.json").write_text(manifest)
    return EXIT_OK


def cmd_concentration(args) -> int:
    mats = _matrices(args)
    A1 = mats[0]
    _require_rado(A1)
    _need_seed(args)
    if args.n is None:
        raise UsageError("--n is required")
    if len(mats) >= 2:
        _require_rado(mats[1])
        w = solve_weights(A1, mats[1])
    else:
        w = WeightFunction.ones(A1.k)
    q = float(Fraction(args.q)) if args.q else 10 * args.n ** -0.5
    warnings = []
    rows = concentration_check(A1, w, q, args.n, args.trials, args.seed, warn=warnings.append)
    for msg in warnings:
        print("warning: %s" % msg, file=sys.stderr)
    lines = ["I,size,threshold,frequency,mean"]
    for r in rows:
        lines.append("%s,%d,%.12g,%.6f,%.6g" % ("-".join(str(i + 1) for i in r.I), r.size, r.threshold,
                                              r.frequency, r.mean))
    _emit(args, "\n".join(lines) + "\n", "concentration.csv")
    return EXIT_OK


def cmd_janson(args) -> int:
    mats = _matrices(args)
    A1 = mats[0]
    _require_rado(A1)
    if args.n is None:
        raise UsageError("--n is required")
    w = solve_weights(A1, mats[1]) if len(mats) >= 2 else WeightFunction.ones(A1.k)
    q = Fraction(args.q) if args.q else None
    if q is None:
        raise UsageError("--q is required")
    H = enumerate_solutions(A1, args.n)
    rep = janson_bound(H, q, w, args.digits)
    vals = rep.formatted()
    _emit(args, "".join("%s = %s\n" % (k, vals[k]) for k in ("mu", "Delta", "delta", "exponent", "bound")),
          "janson.txt")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="radothresh", description="Random asymmetric Rado thresholds: exact checks, audits "
                                                "and Monte-Carlo scans.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, fmt_choices=("text", "json")):
        sp.add_argument("matrices", nargs="*", help="catalogue names or matrix files")
        sp.add_argument("--matrix", action="append", help="catalogue name or matrix file (repeatable)")
        sp.add_argument("--out", help="write outputs into this directory instead of stdout")
        sp.add_argument("--format", choices=fmt_choices, default=fmt_choices[0])
        sp.add_argument("--workers", type=int, default=1, help="worker processes (never affects outputs)")

    sp = sub.add_parser("check", help="validate matrices and report densities")
    common(sp)
    sp.add_argument("--asym", action="store_true", help="also report m(A, B) for two matrices")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("audit", help="projection-count slopes, tameness and boundedness")
    common(sp)
    sp.add_argument("--grid", "--n-grid", dest="grid", default="100,200,400")
    sp.add_argument("--boundedness", metavar="MATRIX", help="second matrix for the boundedness audit")
    sp.add_argument("--tau", help="also evaluate the co-degree function at this tau")
    sp.add_argument("--cap", type=int, default=10 ** 8, help="enumeration guard (candidate tuples)")
    sp.set_defaults(func=cmd_audit)

    sp = sub.add_parser("weights", help="solve for a weight function")
    common(sp)
    sp.set_defaults(func=cmd_weights)

    sp = sub.add_parser("arrow", help="decide [n] -> (A_1, ..., A_r)")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--budget", type=int, default=10 ** 9, help="search node budget")
    sp.set_defaults(func=cmd_arrow)

    sp = sub.add_parser("scan", help="Monte-Carlo threshold scan")
    common(sp, ("csv", "json"))
    sp.add_argument("--n-grid", required=True)
    sp.add_argument("--c-grid", required=True)
    sp.add_argument("--r", type=int, help="number of colours (repeats a single matrix)")
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--budget", type=int, default=10 ** 6, help="oracle node budget per trial")
    sp.add_argument("--epsilon", type=float, default=0.01)
    sp.add_argument("--cprime", type=float, default=1.0)
    sp.set_defaults(func=cmd_scan)

    sp = sub.add_parser("concentration", help="empirical concentration of projected counts")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--q", help="sampling probability (default 10 n^-1/2)")
    sp.add_argument("--trials", type=int, default=200)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_concentration)

    sp = sub.add_parser("janson", help="evaluate the Suen-Janson bound")
    common(sp)
    sp.add_argument("--n", type=int)
    sp.add_argument("--q")
    sp.add_argument("--digits", type=int, default=30)
    sp.set_defaults(func=cmd_janson)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be positive")
        return args.func(args)
    except UsageError as exc:
        print("usage error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except InputError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except GuardError as exc:
        est = "" if exc.estimate is None else " (estimate %s)" % exc.estimate
        print("refused: %s%s" % (exc, est), file=sys.stderr)
        return EXIT_GUARD
    except (NotRadoError, OrderingError) as exc:
        print("invalid: %s" % exc, file=sys.stderr)
        return EXIT_INVALID
    except RadoError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
