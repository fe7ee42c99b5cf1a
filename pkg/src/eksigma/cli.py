"""Command-line frontend.

Every subcommand builds one report object and renders it in the requested
format: human-readable text, JSON whose reals are decimal strings with 15
significant digits, or CSV. Errors map onto stable exit codes: 2 for domain
errors, 3 for capacity limits, 4 for an Undecided verdict under --strict,
64 for usage mistakes.
"""

import argparse
import json
import math
import os
import sys

from . import bounds, cuspforms, ekcore, oracle, shanks
from .config import RunConfig
from .errors import CapacityError, DomainError, ThresholdNotFound

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_CAPACITY = 3
EXIT_UNDECIDED = 4
EXIT_USAGE = 64

_TYPEII_BY_Q = {q: w for w, q in cuspforms.TYPEII_PAIRS.items()}


class _Parser(argparse.ArgumentParser):
    """argparse with BSD-style usage exits."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_arg(text):
    """Integer flag that tolerates scientific notation like 1e7."""
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(v)


def _dec(x):
    """Reals as decimal strings, 15 significant digits."""
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return str(x)
    return f"{x:.15g}"


# ---------------------------------------------------------------------------
# rendering

def _emit_json(obj):
    print(json.dumps(obj, indent=2))


def _emit_pairs(pairs):
    width = max(len(k) for k, _ in pairs)
    for k, v in pairs:
        print(f"{k:<{width}}  {v}")


def _report_dict(rep):
    return {
        "k": rep.k,
        "q": rep.q,
        "r": rep.r,
        "h": rep.h,
        "case": rep.case,
        "gamma": _dec(rep.gamma),
        "gamma_prime": _dec(rep.gamma_prime),
        "C": _dec(rep.C),
        "C_prime": _dec(rep.C_prime),
        "err": _dec(rep.err),
        "verdict": rep.verdict,
        "verdict_prime": rep.verdict_prime,
        "prime_limit": rep.prime_limit,
        "details": {
            k: _dec(v) if isinstance(v, (int, float)) else str(v)
            for k, v in sorted(rep.details.items())
        },
    }


def _report_pairs(rep):
    return [
        ("pair", f"k={rep.k} q={rep.q} (r={rep.r}, h={rep.h}, case={rep.case})"),
        ("gamma", _dec(rep.gamma)),
        ("gamma_prime", _dec(rep.gamma_prime)),
        ("C", _dec(rep.C)),
        ("C_prime", _dec(rep.C_prime)),
        ("err", _dec(rep.err)),
        ("verdict", rep.verdict),
        ("verdict_prime", rep.verdict_prime),
        ("prime_limit", str(rep.prime_limit)),
    ]


def _undecided_exit(cfg, *verdicts):
    if cfg.strict and any(v == "Undecided" for v in verdicts):
        return EXIT_UNDECIDED
    return EXIT_OK


# ---------------------------------------------------------------------------
# figures

def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def _table_figure(rows, path):
    plt = _pyplot()
    qs = [r.q for r in rows]
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    ax.scatter(qs, [r.gamma for r in rows], s=16, label="gamma")
    ax.scatter(qs, [r.gamma_prime for r in rows], s=16, marker="x", label="gamma'")
    ax.axhline(0.5, color="black", lw=0.8, ls="--", label="1/2")
    ax.set_xscale("log")
    ax.set_xlabel("q")
    ax.set_ylabel("Euler-Kronecker constant")
    ax.legend(loc="lower right")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _fit_figure(rep, path):
    plt = _pyplot()
    xs = [p.x for p in rep.points]
    fig, (ax1, ax2) = plt.subplots(2, 1, figsize=(7.0, 6.0), sharex=True)
    ax1.plot(xs, [p.ratio for p in rep.points], marker="o", label="count ratio")
    ax1.axhline(rep.C, color="black", lw=0.8, ls="--", label="C")
    ax1.set_ylabel("count log^{1/h}(x) / x")
    ax1.legend()
    ax2.plot(xs, [p.residual for p in rep.points], marker="o", color="tab:orange",
             label="second-order residual")
    ax2.axhline(1.0 - rep.gamma, color="black", lw=0.8, ls="--", label="1 - gamma")
    ax2.set_xscale("log")
    ax2.set_xlabel("x")
    ax2.set_ylabel("residual")
    ax2.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


# ---------------------------------------------------------------------------
# subcommand handlers

def _cmd_gamma(args, cfg, fmt):
    rep = ekcore.compute_report(args.k, args.q, cfg)
    if fmt == "json":
        _emit_json(_report_dict(rep))
    elif fmt == "csv":
        print(ekcore.EkReport.CSV_HEADER)
        print(rep.csv_row())
    else:
        _emit_pairs(_report_pairs(rep))
    return _undecided_exit(cfg, rep.verdict, rep.verdict_prime)


def _cmd_decide(args, cfg, fmt):
    verdict, rep = ekcore.decide(args.k, args.q, cfg)
    if fmt == "json":
        _emit_json({"k": rep.k, "q": rep.q, "verdict": verdict,
                    "gamma": _dec(rep.gamma), "err": _dec(rep.err)})
    elif fmt == "csv":
        print("k,q,verdict")
        print(f"{rep.k},{rep.q},{verdict}")
    else:
        print(verdict)
    return _undecided_exit(cfg, verdict)


def _cmd_table(args, cfg, fmt):
    rows = ekcore.sweep_table(args.r, args.q_max, cfg)
    if fmt == "json":
        _emit_json({"r": args.r, "q_max": args.q_max,
                    "rows": [_report_dict(r) for r in rows]})
    elif fmt == "csv":
        print(ekcore.EkReport.CSV_HEADER)
        for r in rows:
            print(r.csv_row())
    else:
        print(f"{'q':>7} {'r':>3} {'h':>5} {'gamma':>12} {'gamma_prime':>12} "
              f"{'verdict':>10} {'verdict_prime':>13}")
        for r in rows:
            print(f"{r.q:>7} {r.r:>3} {r.h:>5} {r.gamma:>12.6f} "
                  f"{r.gamma_prime:>12.6f} {r.verdict:>10} {r.verdict_prime:>13}")
    if args.figure:
        _table_figure(rows, args.figure)
    verdicts = [r.verdict for r in rows] + [r.verdict_prime for r in rows]
    return _undecided_exit(cfg, *verdicts)


def _cmd_q0(args, cfg, fmt):
    try:
        res = bounds.find_q0(args.r) if args.q_max is None else bounds.find_q0(
            args.r, q_max=args.q_max)
    except ThresholdNotFound as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY
    if fmt == "json":
        _emit_json({"r": res.r, "q0": res.q0, "last_failure": res.last_failure,
                    "scanned_to": res.scanned_to})
    elif fmt == "csv":
        print("r,q0,last_failure,scanned_to")
        print(f"{res.r},{res.q0},{res.last_failure},{res.scanned_to}")
    else:
        _emit_pairs([("r", str(res.r)), ("q0", str(res.q0)),
                     ("last_failure", str(res.last_failure)),
                     ("scanned_to", str(res.scanned_to))])
    return EXIT_OK


def _cmd_shanks(args, cfg, fmt):
    scfg = shanks.ShanksConfig(levels_b=args.levels, levels_c=args.levels,
                               residual_P=args.residual_p)
    K = shanks.landau_ramanujan_K(scfg, threads=cfg.threads)
    res = shanks.shanks_c(scfg, threads=cfg.threads, cache_dir=cfg.cache_dir)
    if fmt == "json":
        _emit_json({"levels": args.levels, "K": _dec(K), "c": _dec(res.c),
                    "gamma_sb": _dec(res.gamma_sb), "err": _dec(res.err)})
    elif fmt == "csv":
        print("levels,K,c,gamma_sb,err")
        print(f"{args.levels},{_dec(K)},{_dec(res.c)},{_dec(res.gamma_sb)},{_dec(res.err)}")
    else:
        _emit_pairs([("K", _dec(K)), ("c", _dec(res.c)),
                     ("gamma_SB", _dec(res.gamma_sb)), ("err", _dec(res.err))])
    return EXIT_OK


def _cmd_typeii(args, cfg, fmt):
    rep = ekcore.compute_typeii(_TYPEII_BY_Q[args.q], cfg)
    if fmt == "json":
        _emit_json({"w": rep.w, "q": rep.q, "gamma": _dec(rep.gamma),
                    "gamma_prime": _dec(rep.gamma_prime), "C": _dec(rep.C),
                    "err": _dec(rep.err), "cross_gap": _dec(rep.cross_gap),
                    "verdict": rep.verdict, "prime_limit": rep.prime_limit})
    elif fmt == "csv":
        print("w,q,gamma,gamma_prime,C,err,verdict")
        print(f"{rep.w},{rep.q},{_dec(rep.gamma)},{_dec(rep.gamma_prime)},"
              f"{_dec(rep.C)},{_dec(rep.err)},{rep.verdict}")
    else:
        _emit_pairs([
            ("pair", f"w={rep.w} q={rep.q}"),
            ("gamma", _dec(rep.gamma)),
            ("gamma_prime", _dec(rep.gamma_prime)),
            ("C", _dec(rep.C)),
            ("err", _dec(rep.err)),
            ("cross_gap", _dec(rep.cross_gap)),
            ("verdict", rep.verdict),
        ])
    return _undecided_exit(cfg, rep.verdict)


def _verify_pairs(rep):
    return [
        ("kind", rep.kind),
        ("weight", str(rep.w)),
        ("q", str(rep.q)),
        ("v", str(rep.v)),
        ("r", str(rep.r)),
        ("n_max", str(rep.n_max)),
        ("checked", str(rep.checked)),
        ("violations", str(len(rep.violations))),
        ("ok", str(rep.ok)),
    ]


def _cmd_cusp_verify(args, cfg, fmt):
    w, q = args.weight, args.q
    is_type_i = (w, q) in cuspforms.TYPE_I_SMALL or q in cuspforms.TYPE_I_LARGE.get(w, ())
    if is_type_i:
        rep = cuspforms.verify_type_i(w, q, v=args.v, n_max=args.n_max)
    elif cuspforms.TYPEII_PAIRS.get(w) == q:
        rep = cuspforms.verify_type_ii(w, q, args.n_max or 10**4)
    else:
        raise DomainError(f"q={q} is not an exceptional prime of the weight-{w} form")
    if fmt == "json":
        _emit_json({"kind": rep.kind, "weight": rep.w, "q": rep.q, "v": rep.v,
                    "r": rep.r, "n_max": rep.n_max, "checked": rep.checked,
                    "violations": len(rep.violations), "ok": rep.ok})
    elif fmt == "csv":
        print("kind,weight,q,v,r,n_max,checked,violations,ok")
        print(f"{rep.kind},{rep.w},{rep.q},{rep.v},{rep.r},{rep.n_max},"
              f"{rep.checked},{len(rep.violations)},{rep.ok}")
    else:
        _emit_pairs(_verify_pairs(rep))
        for item in rep.violations[:8]:
            print(f"  violation: {item}")
    return EXIT_OK if rep.ok else EXIT_DOMAIN


def _cmd_cusp_tau(args, cfg, fmt):
    series = cuspforms.tau_w_series(args.weight, args.n, modulus=args.mod)
    value = series[args.n]
    if fmt == "json":
        _emit_json({"weight": args.weight, "n": args.n, "mod": args.mod,
                    "tau": str(value)})
    elif fmt == "csv":
        print("weight,n,mod,tau")
        print(f"{args.weight},{args.n},{args.mod if args.mod else ''},{value}")
    else:
        suffix = f" (mod {args.mod})" if args.mod else ""
        print(f"tau_{args.weight}({args.n}){suffix} = {value}")
    return EXIT_OK


def _cmd_oracle_count(args, cfg, fmt):
    variant = "prime" if args.prime_variant else "plain"
    res = oracle.count_S(args.x, args.k, args.q, variant)
    if fmt == "json":
        _emit_json({"x": res.x, "k": res.k, "q": res.q, "variant": res.variant,
                    "count": res.count})
    elif fmt == "csv":
        print("x,k,q,variant,count")
        print(f"{res.x},{res.k},{res.q},{res.variant},{res.count}")
    else:
        print(res.count)
    return EXIT_OK


def _cmd_oracle_fit(args, cfg, fmt):
    rep = oracle.fit_first_order(args.x_grid, args.k, args.q, cfg)
    if fmt == "json":
        _emit_json({
            "k": rep.k, "q": rep.q, "r": rep.r, "h": rep.h,
            "C": _dec(rep.C), "gamma": _dec(rep.gamma),
            "points": [
                {"x": p.x, "count": p.count, "ratio": _dec(p.ratio),
                 "residual": _dec(p.residual)}
                for p in rep.points
            ],
        })
    elif fmt == "csv":
        print("x,count,ratio,residual")
        for p in rep.points:
            print(f"{p.x},{p.count},{_dec(p.ratio)},{_dec(p.residual)}")
    else:
        print(f"k={rep.k} q={rep.q} h={rep.h}  C={_dec(rep.C)}  "
              f"1-gamma={_dec(1.0 - rep.gamma)}")
        for p in rep.points:
            print(f"  x={p.x:>10}  count={p.count:>10}  ratio={p.ratio:.6f}  "
                  f"residual={p.residual:.4f}")
    if args.figure:
        _fit_figure(rep, args.figure)
    return EXIT_OK


def _cmd_bound_supper(args, cfg, fmt):
    sb = bounds.upper_bound_S(args.m, args.q, alpha=args.alpha)
    if fmt == "json":
        _emit_json({"m": args.m, "q": args.q, "value": _dec(sb.value),
                    "terms": [_dec(t) for t in sb.terms],
                    "dropped": list(sb.dropped)})
    elif fmt == "csv":
        print("m,q,value")
        print(f"{args.m},{args.q},{_dec(sb.value)}")
    else:
        _emit_pairs([("value", _dec(sb.value)),
                     ("terms", " + ".join(_dec(t) for t in sb.terms)),
                     ("dropped", ",".join(sb.dropped) or "none")])
    return EXIT_OK


def _cmd_bound_gamma_lower(args, cfg, fmt):
    v = bounds.gamma_lower_bound(args.r, args.q)
    if fmt == "json":
        _emit_json({"r": args.r, "q": args.q, "lower_bound": _dec(v)})
    elif fmt == "csv":
        print("r,q,lower_bound")
        print(f"{args.r},{args.q},{_dec(v)}")
    else:
        print(_dec(v))
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser assembly

def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--format", choices=("human", "json", "csv"), default=None,
                     help="output format (default human)")
    fmt.add_argument("--json", action="store_true",
                     help="shorthand for --format json")
    p.add_argument("--prime-limit", type=_int_arg, default=None, metavar="P",
                   help="cutoff for truncated prime sums")
    p.add_argument("--accel", type=int, default=None, metavar="LEVELS",
                   help="acceleration ladder depth (0 disables)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads (0 = auto)")
    p.add_argument("--cache-dir", default=None,
                   help="directory for persisted prime sums (overrides env)")
    p.add_argument("--strict", action="store_true",
                   help="exit 4 when a verdict is Undecided")
    return p


def _build_parser():
    common = _common_flags()
    top = _Parser(prog="eksigma",
                  description="Euler-Kronecker constants of divisor-sum "
                              "non-divisibility, with bounds, cusp-form "
                              "congruences, and counting oracles.")
    sub = top.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("gamma", parents=[common],
                       help="full report for one (k, q) pair")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("decide", parents=[common],
                       help="Landau-vs-Ramanujan verdict for one pair")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-q", type=int, required=True)
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("table", parents=[common],
                       help="reports for all admissible q up to a cutoff")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q-max", type=_int_arg, required=True)
    p.add_argument("--figure", metavar="PATH",
                   help="also render the gamma-vs-q scatter to PATH")
    p.set_defaults(func=_cmd_table)

    p = sub.add_parser("q0", parents=[common],
                       help="least prime beyond which the lower bound clears 1/2")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q-max", type=_int_arg, default=None)
    p.set_defaults(func=_cmd_q0)

    p = sub.add_parser("shanks", parents=[common],
                       help="Landau-Ramanujan constant and Shanks coefficient")
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--residual-P", dest="residual_p", type=_int_arg,
                   default=10**5)
    p.set_defaults(func=_cmd_shanks)

    p = sub.add_parser("typeii", parents=[common],
                       help="constants for the class-number-3 congruences")
    p.add_argument("--q", type=int, required=True, choices=sorted(_TYPEII_BY_Q))
    p.set_defaults(func=_cmd_typeii)

    cusp = sub.add_parser("cusp", help="cusp-form congruence tools")
    cusp_sub = cusp.add_subparsers(dest="cusp_command", required=True,
                                   metavar="SUBCOMMAND")
    p = cusp_sub.add_parser("verify", parents=[common],
                            help="verify an exceptional-prime congruence")
    p.add_argument("--weight", type=int, required=True,
                   choices=cuspforms.WEIGHTS)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n-max", type=_int_arg, default=None)
    p.add_argument("--v", type=int, default=None,
                   help="override the stored power of q (type i only)")
    p.set_defaults(func=_cmd_cusp_verify)
    p = cusp_sub.add_parser("tau", parents=[common],
                            help="one Fourier coefficient, exact or mod q")
    p.add_argument("--weight", type=int, required=True,
                   choices=cuspforms.WEIGHTS)
    p.add_argument("--n", type=_int_arg, required=True)
    p.add_argument("--mod", type=int, default=None)
    p.set_defaults(func=_cmd_cusp_tau)

    orc = sub.add_parser("oracle", help="direct counting ground truth")
    orc_sub = orc.add_subparsers(dest="oracle_command", required=True,
                                 metavar="SUBCOMMAND")
    p = orc_sub.add_parser("count", parents=[common],
                           help="exact count of n <= x with q not dividing sigma_k(n)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=_int_arg, required=True)
    p.add_argument("--prime-variant", action="store_true",
                   help="require q not divide n itself as well")
    p.set_defaults(func=_cmd_oracle_count)
    p = orc_sub.add_parser("fit", parents=[common],
                           help="counting trend against the leading constant")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x-grid", dest="x_grid", type=_int_arg, nargs="+",
                   default=(10**4, 10**5, 10**6))
    p.add_argument("--figure", metavar="PATH",
                   help="also render ratio and residual panels to PATH")
    p.set_defaults(func=_cmd_oracle_fit)

    bnd = sub.add_parser("bound", help="closed-form bound evaluations")
    bnd_sub = bnd.add_subparsers(dest="bound_command", required=True,
                                 metavar="SUBCOMMAND")
    p = bnd_sub.add_parser("s-upper", parents=[common],
                           help="upper bound for the prime-order sum S(m, q)")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--alpha", type=float, default=None)
    p.set_defaults(func=_cmd_bound_supper)
    p = bnd_sub.add_parser("gamma-lower", parents=[common],
                           help="unconditional lower bound for gamma_{r,q}")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.set_defaults(func=_cmd_bound_gamma_lower)

    return top


def _config_of(args):
    cfg = RunConfig()
    kw = {}
    if args.prime_limit is not None:
        kw["prime_limit"] = args.prime_limit
    if args.accel is not None:
        kw["accel_levels"] = args.accel
    if args.threads is not None:
        kw["threads"] = args.threads if args.threads > 0 else (os.cpu_count() or 1)
    if args.cache_dir is not None:
        kw["cache_dir"] = args.cache_dir
    if args.strict:
        kw["strict"] = True
    return cfg.with_(**kw) if kw else cfg


def main(argv=None):
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    fmt = args.format or ("json" if args.json else "human")
    cfg = _config_of(args)
    try:
        return args.func(args, cfg, fmt)
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DOMAIN
    except CapacityError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAPACITY


if __name__ == "__main__":
    sys.exit(main())
