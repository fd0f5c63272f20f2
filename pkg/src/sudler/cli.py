"""Command-line front end: `sudler <command> [options]`."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from fractions import Fraction

from .cf import parse_cf
from .enclosure import default_precision, working_precision
from .report import EXIT_FAIL, SCHEMA_VERSION, RunConfig, VerificationReport, _jsonable

EXIT_USAGE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run configuration")
    g.add_argument("--precision", type=int, default=None,
                   help="working precision in bits (default: $SUDLER_PRECISION or 128)")
    g.add_argument("--threads", type=int, default=1, help="worker threads for grid campaigns")
    g.add_argument("--scale", type=float, default=1.0,
                   help="grid reduction factor; anything but 1 gives a non-certifying smoke run")
    g.add_argument("--format", dest="output_format", choices=("json", "csv", "text"), default=None)
    g.add_argument("--output", "-o", default=None, help="write to this file instead of stdout")
    g.add_argument("--timing", action="store_true", help="include wall-clock times in JSON reports")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="sudler", description="Certified evaluation of Sudler products and their limit functions.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", parents=[common], help="enclose P_N(alpha) or P_{q_n}(alpha, eps)")
    p.add_argument("--alpha", required=True, help='continued fraction like "[0;(6,5)]" or a rational "p/q"')
    p.add_argument("--N", type=int, help="number of factors")
    p.add_argument("--n", type=int, help="convergent index for the perturbed product")
    p.add_argument("--eps", type=_fraction, help="perturbation (with --n)")

    p = sub.add_parser("decompose", parents=[common], help="factorisation of P_N along the Ostrowski digits")
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("limit", parents=[common], help="enclose G_r(alpha, eps)")
    p.add_argument("--alpha", required=True)
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--eps", type=_fraction, default=Fraction(0))
    p.add_argument("--T", type=int, default=None, help="truncation (default: double from 10^4 until width < 5e-4)")

    p = sub.add_parser("figure1", parents=[common], help="grid values of F(T, x, x + 1/R)")
    p.add_argument("--T", type=int, default=100)
    p.add_argument("--R", type=int, default=100)

    p = sub.add_parser("figure6a", parents=[common], help="curves eps -> G_0([0;(6,a)], eps)")
    p.add_argument("--T", type=int, default=20_000)
    p.add_argument("--digits", default="2,3,4,5")
    p.add_argument("--eps-min", type=_fraction, default=Fraction(-1, 2))
    p.add_argument("--eps-max", type=_fraction, default=Fraction(1, 2))
    p.add_argument("--eps-step", type=_fraction, default=Fraction(1, 100))

    p = sub.add_parser("verify-theorem1", parents=[common], help="grid criterion campaigns")
    p.add_argument("--case", choices=(">=18", "9-18", "8", "7", "all"), default="all")

    p = sub.add_parser("verify-theorem2", parents=[common], help="the vanishing example and its pair bounds")
    p.add_argument("--alpha", default="[0;(6,5)]")
    p.add_argument("--depth", type=int, default=40)

    p = sub.add_parser("verify-theorem3", parents=[common], help="lower-approximation certificates")
    p.add_argument("--alpha", default="[0;(5,4)]", help='"[0;(5,4)]" or "[0;(6,5,5)]"')
    p.add_argument("--summary-only", action="store_true", help="omit the per-tuple rows")

    p = sub.add_parser("remark-conjectures", parents=[common], help="G_1 threshold for [0;(1,a)] and [0;(2,a)]")
    p.add_argument("--T", type=int, default=None)
    return ap


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def _json(obj) -> str:
    return json.dumps(_jsonable(obj), indent=2, ensure_ascii=False) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(x) for x in row])
    return buf.getvalue()


def _cell(x):
    if isinstance(x, Fraction):
        return repr(float(x))
    if isinstance(x, float):
        return repr(x)
    return x


def _report_out(rep: VerificationReport, cfg: RunConfig, timing: bool) -> int:
    fmt = cfg.output_format
    if fmt == "text":
        _emit(rep.summary() + "\n", cfg)
    elif fmt == "csv":
        rows = []

        def walk(r, depth):
            rows.append([r.campaign, depth, r.status, r.certifying, "" if r.min_margin is None else r.min_margin])
            for c in r.children:
                walk(c, depth + 1)

        walk(rep, 0)
        _emit(_csv(["campaign", "depth", "status", "certifying", "min_margin"], rows), cfg)
    else:
        _emit(rep.to_json(timing) + "\n", cfg)
    return rep.exit_code


def _value_out(payload: dict, cfg: RunConfig) -> int:
    if cfg.output_format == "text":
        _emit("\n".join(f"{k}: {v}" for k, v in _jsonable(payload).items()) + "\n", cfg)
    elif cfg.output_format == "csv":
        flat = _jsonable(payload)
        keys = [k for k, v in flat.items() if not isinstance(v, (list, dict))]
        _emit(_csv(keys, [[flat[k] for k in keys]]), cfg)
    else:
        _emit(_json(payload), cfg)
    return 0


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_eval(args, cfg: RunConfig) -> int:
    from .products import sudler, sudler_perturbed

    alpha = _alpha(args.alpha)
    if args.n is not None:
        eps = args.eps if args.eps is not None else Fraction(0)
        v = sudler_perturbed(alpha, args.n, eps)
        payload = {"alpha": args.alpha, "n": args.n, "eps": eps}
    else:
        if args.N is None:
            raise ValueError("--N is required unless --n is given")
        if args.eps is not None:
            raise ValueError("--eps needs --n")
        v = sudler(alpha, args.N)
        payload = {"alpha": args.alpha, "N": args.N}
    payload.update(v.to_dict())
    return _value_out(payload, cfg)


def cmd_decompose(args, cfg: RunConfig) -> int:
    from .cf import ostrowski
    from .products import decompose, product_of
    from .products import sudler as sudler_direct

    alpha = _alpha(args.alpha)
    terms, kf = decompose(alpha, args.N)
    digits = ostrowski(alpha, args.N).digits
    if cfg.output_format == "csv":
        rows = [[t.i, t.c, t.epsilon.mid, t.factor.lo, t.factor.hi] for t in terms]
        _emit(_csv(["i", "c", "eps", "lo", "hi"], rows), cfg)
        return 0
    payload = {
        "schema": SCHEMA_VERSION,
        "alpha": args.alpha,
        "N": args.N,
        "digits": list(digits),
        "terms": [{"i": t.i, "c": t.c, "eps": t.epsilon.to_dict(), "factor": t.factor.to_dict()} for t in terms],
        "K": [{"i": k.i, "value": k.value.to_dict()} for k in kf],
        "product": product_of(terms).to_dict(),
        "direct": sudler_direct(alpha, args.N).to_dict(),
    }
    return _value_out(payload, cfg)


def cmd_limit(args, cfg: RunConfig) -> int:
    from .limit import G_enclosure, G_enclosure_adaptive, LimitFunctionSpec

    cf = parse_cf(args.alpha)
    spec = LimitFunctionSpec(cf, args.r)
    if args.T:
        g = G_enclosure(spec, args.eps, args.T)
    else:
        g = G_enclosure_adaptive(spec, args.eps, lambda e: e.width < 5e-4, 10_000, 1_600_000)
    payload = {"alpha": args.alpha, "r": spec.r, "eps": args.eps, "T": g.T, "C": str(spec.C)}
    payload.update(g.enclosure.to_dict())
    payload["below_one"] = g.certainly_below(1)
    payload["above_one"] = g.certainly_above(1)
    return _value_out(payload, cfg)


def cmd_figure1(args, cfg: RunConfig) -> int:
    from .criterion import figure1_rows

    rows = [[x, F] for x, F in figure1_rows(args.T, args.R)]
    if cfg.output_format == "json":
        _emit(_json({"T": args.T, "R": args.R, "rows": [{"x": x, "F": F} for x, F in rows]}), cfg)
    else:
        _emit(_csv(["x", "F"], rows), cfg)
    return 0


def cmd_figure6a(args, cfg: RunConfig) -> int:
    from .limit import figure6a_rows

    digits = [int(d) for d in args.digits.split(",") if d.strip()]
    eps = []
    if args.eps_step <= 0:
        raise ValueError("--eps-step must be positive")
    e = args.eps_min
    while e <= args.eps_max:
        eps.append(e)
        e += args.eps_step
    rows = [[a, x, lo, hi] for a, x, lo, hi in figure6a_rows(digits, eps, args.T)]
    if cfg.output_format == "json":
        _emit(_json({"T": args.T, "rows": [{"a": a, "eps": x, "lo": lo, "hi": hi} for a, x, lo, hi in rows]}), cfg)
    else:
        _emit(_csv(["a", "eps", "lo", "hi"], rows), cfg)
    return 0


def cmd_verify_theorem1(args, cfg: RunConfig) -> int:
    from .criterion import verify_theorem1

    rep = verify_theorem1(None if args.case == "all" else args.case, scale=cfg.scale, threads=cfg.threads)
    return _report_out(rep, cfg, args.timing)


def cmd_verify_theorem2(args, cfg: RunConfig) -> int:
    from .periods import theorem2_demo

    rep = theorem2_demo(args.depth, cf=parse_cf(args.alpha))
    return _report_out(rep, cfg, args.timing)


def cmd_verify_theorem3(args, cfg: RunConfig) -> int:
    from .periods import certify_period2, certify_period3

    cf = parse_cf(args.alpha)
    rows = not args.summary_only
    if cf.ell == 2 and not cf.preperiod:
        rep = certify_period2(cf, with_rows=rows)
    elif cf.ell == 3 and not cf.preperiod:
        rep = certify_period3(cf, with_rows=rows)
    else:
        raise ValueError("verify-theorem3 supports purely periodic expansions of period 2 or 3")
    if cfg.scale != 1:
        rep.certifying = False
    return _report_out(rep, cfg, args.timing)


def cmd_remark(args, cfg: RunConfig) -> int:
    from .limit import remark_conjectures

    t0 = time.perf_counter()
    res = remark_conjectures(args.T)
    status = "pass" if res["ok"] else ("undecided" if res["undecided"] else "fail")
    margins = [(1 - c["hi"]) if c["expected_below_one"] else (c["lo"] - 1) for c in res["cases"]]
    rep = VerificationReport("remark-conjectures", params={"T": args.T or "adaptive"}, status=status,
                             min_margin=min(margins), cases=res["cases"], wall_clock=time.perf_counter() - t0)
    return _report_out(rep, cfg, args.timing)


COMMANDS = {
    "eval": cmd_eval,
    "decompose": cmd_decompose,
    "limit": cmd_limit,
    "figure1": cmd_figure1,
    "figure6a": cmd_figure6a,
    "verify-theorem1": cmd_verify_theorem1,
    "verify-theorem2": cmd_verify_theorem2,
    "verify-theorem3": cmd_verify_theorem3,
    "remark-conjectures": cmd_remark,
}

_DEFAULT_FORMAT = {"figure1": "csv", "figure6a": "csv"}


def _alpha(text: str):
    """A continued fraction literal or a plain rational, as a ContinuedFraction."""
    return parse_cf(text.strip())


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = RunConfig(
            precision=args.precision or default_precision(),
            threads=args.threads,
            scale=args.scale,
            output_format=args.output_format or _DEFAULT_FORMAT.get(args.command, "json"),
            output_path=args.output,
        )
        with working_precision(cfg.precision):
            return COMMANDS[args.command](args, cfg)
    except (ValueError, ZeroDivisionError, argparse.ArgumentTypeError) as exc:
        print(f"sudler {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_FAIL if isinstance(exc, ArithmeticError) else EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
