"""Command line surface: one subcommand per computation, JSON to stdout.

Every record carries the command echo, the alphabet, the input parameters,
the results with an error bound (a number or "exact-to-rounding") and a
method tag, and the wall time.  `--format csv` switches to CSV rows: the
curve and xi commands emit their natural tables, everything else emits
key,value rows.  Exit codes: 0 success, 2 usage, 3 target out of range,
4 insufficient input.

LEVY_THREADS caps process parallelism for the curve command (default serial).
"""

import argparse
import io
import json
import os
import sys
import time
from fractions import Fraction

from .errors import (
    InsufficientDigitsError,
    InvalidWordError,
    NoConvergenceError,
    TargetOutOfRangeError,
    TruncatedStreamError,
)
from .levy import (
    METHOD_RATIONAL,
    QuadPeriod,
    f_irrational,
    invert_f,
    letter_levy,
    levy_empirical,
    levy_quadratic,
    mu_mean,
    slope_point,
    tail_spread,
    xi_oscillation,
)
from .words import (
    Alphabet,
    SlopeCF,
    christoffel,
    format_word,
    load_words,
    parse_word,
    sturmian_prefix,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RANGE = 3
EXIT_INPUT = 4


def _f15(x):
    """Round a float to 15 significant digits for stable printing."""
    return float(f"{x:.15g}")


def _error_bound_field(bound):
    return "exact-to-rounding" if bound is None else _f15(bound)


def _add_alphabet(p):
    p.add_argument("-a", type=int, required=True, metavar="A", help="smaller alphabet letter")
    p.add_argument("-b", type=int, required=True, metavar="B", help="larger alphabet letter")


def _add_format(p):
    p.add_argument("--format", choices=("json", "csv"), default="json", help="output format")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="levy",
        description="Levy constants of periodic and Sturmian continued fractions over {a, b}.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    quad = sub.add_parser("quad", help="Levy constant of a periodic continued fraction")
    quad.add_argument("--period", required=True, help="period word, comma-separated letters")
    quad.add_argument("--preperiod", default="", help="optional preperiod word (ignored by the value)")
    _add_alphabet(quad)
    _add_format(quad)

    slope = sub.add_parser("slope", help="evaluate f at a rational or digit-given slope")
    slope.add_argument("fraction", nargs="?", help="rational slope p/q in [0, 1]")
    slope.add_argument("--cf", help="slope digits d1,d2,... (theta = [0; 1+d1, d2, ...])")
    slope.add_argument("--repeat", help="periodic digit tail appended after --cf digits")
    slope.add_argument("--depth", type=int, default=20, help="convergent index k for --cf slopes")
    _add_alphabet(slope)
    _add_format(slope)

    curve = sub.add_parser("curve", help="sample f over all reduced fractions with q <= qmax")
    curve.add_argument("--qmax", type=int, required=True)
    _add_alphabet(curve)
    _add_format(curve)

    invert = sub.add_parser("invert", help="find a slope realizing a target Levy value")
    invert.add_argument("target", type=float)
    invert.add_argument("--tol", type=float, default=1e-8, help="enclosure width to reach")
    _add_alphabet(invert)
    _add_format(invert)

    xi = sub.add_parser("xi", help="oscillation of log Q_{2^m}/2^m for the doubling-block word")
    xi.add_argument("--mmax", type=int, required=True)
    _add_alphabet(xi)
    _add_format(xi)

    est = sub.add_parser("estimate", help="empirical Levy estimate from a letter stream")
    src = est.add_mutually_exclusive_group(required=True)
    src.add_argument("--word", help="file with comma-separated letters, one word per line")
    src.add_argument("--slope", help="Sturmian source: slope digits d1,d2,...")
    src.add_argument("--periodic", help="periodic source: one period word")
    est.add_argument("--repeat", help="periodic digit tail for --slope")
    est.add_argument("-n", type=int, required=True, help="number of partial quotients to use")
    est.add_argument("--method", choices=("logq", "birkhoff"), default="logq")
    est.add_argument("--tail-depth", type=int, default=40)
    _add_alphabet(est)
    _add_format(est)

    return ap


def _alphabet(args):
    try:
        return Alphabet(args.a, args.b)
    except (TypeError, ValueError) as exc:
        raise InvalidWordError(str(exc)) from None


def _parse_digits(text):
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError as exc:
        raise InvalidWordError(f"cannot parse digits {text!r}: {exc}") from None


def cmd_quad(args):
    alphabet = _alphabet(args)
    period = parse_word(args.period)
    preperiod = parse_word(args.preperiod)
    if not period:
        raise InvalidWordError("--period must be nonempty")
    qp = QuadPeriod(period=period, preperiod=preperiod)
    res = levy_quadratic(qp)
    return {
        "command": "quad",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {"preperiod": format_word(preperiod), "period": format_word(period)},
        "results": {
            "trace": qp.t,
            "period_length": qp.s,
            "value": _f15(res.value),
            "mu": _f15(mu_mean(period)),
            "error_bound": _error_bound_field(res.error_bound),
            "method": res.method,
        },
    }


def cmd_slope(args):
    alphabet = _alphabet(args)
    if (args.fraction is None) == (args.cf is None):
        raise InvalidWordError("give exactly one of a p/q fraction or --cf digits")
    if args.fraction is not None:
        try:
            p_str, q_str = args.fraction.split("/")
            p, q = int(p_str), int(q_str)
        except ValueError:
            raise InvalidWordError(f"cannot parse fraction {args.fraction!r}, expected p/q") from None
        if q == 0:
            raise InvalidWordError("denominator must be nonzero")
        frac = Fraction(p, q)
        if (frac.numerator, frac.denominator) != (p, q):
            print(f"warning: reduced {p}/{q} to {frac}", file=sys.stderr)
        sp = slope_point(frac, alphabet)
        return {
            "command": "slope",
            "alphabet": {"a": alphabet.a, "b": alphabet.b},
            "params": {"p": frac.numerator, "q": frac.denominator},
            "results": {
                "word": format_word(christoffel(frac, alphabet)),
                "trace": sp.trace,
                "f": _f15(sp.f_value),
                "x": _f15(sp.x_value),
                "error_bound": "exact-to-rounding",
                "method": METHOD_RATIONAL,
            },
        }
    digits = _parse_digits(args.cf)
    repeat = _parse_digits(args.repeat) if args.repeat else ()
    slope = SlopeCF(digits, repeat=repeat)
    if args.depth < 1:
        raise InvalidWordError("--depth must be >= 1")
    res = f_irrational(slope, args.depth, alphabet)
    p_k, q_k = slope.convergent(args.depth)
    return {
        "command": "slope",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {"cf": list(digits), "repeat": list(repeat), "depth": args.depth},
        "results": {
            "p_k": p_k,
            "q_k": q_k,
            "f": _f15(res.value),
            "tail_spread": _f15(tail_spread(alphabet)),
            "error_bound": _error_bound_field(res.error_bound),
            "method": res.method,
        },
    }


def _curve_row(job):
    frac, a, b = job
    sp = slope_point(frac, Alphabet(a, b))
    return {"p": frac.numerator, "q": frac.denominator, "f": _f15(sp.f_value), "x": _f15(sp.x_value)}


def cmd_curve(args):
    alphabet = _alphabet(args)
    if args.qmax < 1:
        raise InvalidWordError("--qmax must be >= 1")
    fracs = sorted({Fraction(p, q) for q in range(1, args.qmax + 1) for p in range(q + 1)})
    jobs = [(frac, alphabet.a, alphabet.b) for frac in fracs]
    threads = int(os.environ.get("LEVY_THREADS", "1") or "1")
    if threads > 1:
        import multiprocessing

        with multiprocessing.get_context("fork").Pool(threads) as pool:
            rows = pool.map(_curve_row, jobs)
    else:
        rows = [_curve_row(job) for job in jobs]
    for prev, cur in zip(rows, rows[1:]):
        if not prev["f"] < cur["f"]:
            raise AssertionError(f"f not strictly increasing at {cur['p']}/{cur['q']}")
    return {
        "command": "curve",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {"qmax": args.qmax},
        "results": {"count": len(rows), "rows": rows},
    }


def cmd_invert(args):
    alphabet = _alphabet(args)
    if args.tol <= 0:
        raise InvalidWordError("--tol must be positive")
    res = invert_f(args.target, alphabet, args.tol)
    return {
        "command": "invert",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {"target": _f15(args.target), "tol": _f15(args.tol)},
        "results": {
            "lower": str(res.lower),
            "upper": str(res.upper),
            "mediant": str(res.mediant),
            "f_lower": _f15(res.f_lower),
            "f_upper": _f15(res.f_upper),
            "width": _f15(res.width),
            "cf_digits": list(res.cf_digits),
            "exact": res.exact,
            "steps": res.steps,
        },
    }


def cmd_xi(args):
    alphabet = _alphabet(args)
    if args.mmax < 4:
        raise InvalidWordError("--mmax must be >= 4")
    osc = xi_oscillation(alphabet, args.mmax)
    verdict = "no Levy constant" if osc.gap > 3.0 * osc.noise_floor else "inconclusive"
    return {
        "command": "xi",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {"mmax": args.mmax},
        "results": {
            "points": [[m, _f15(u)] for m, u in osc.points],
            "acc_even": _f15(osc.acc_even),
            "acc_odd": _f15(osc.acc_odd),
            "predicted_even": _f15(osc.predicted_even),
            "predicted_odd": _f15(osc.predicted_odd),
            "gap": _f15(osc.gap),
            "predicted_gap": _f15(osc.predicted_gap),
            "noise_floor": _f15(osc.noise_floor),
            "verdict": verdict,
        },
    }


def cmd_estimate(args):
    alphabet = _alphabet(args)
    if args.n < 1:
        raise InvalidWordError("-n must be >= 1")
    period = None
    if args.word:
        letters = []
        for w in load_words(args.word):
            letters.extend(w)
        source = {"word_file": args.word}
    elif args.slope:
        digits = _parse_digits(args.slope)
        repeat = _parse_digits(args.repeat) if args.repeat else ()
        slope = SlopeCF(digits, repeat=repeat)
        need = args.n + (args.tail_depth if args.method == "birkhoff" else 0)
        letters = sturmian_prefix(slope, need, alphabet)
        source = {"slope_cf": list(digits), "repeat": list(repeat)}
    else:
        word = parse_word(args.periodic)
        if not word:
            raise InvalidWordError("--periodic must be nonempty")
        need = args.n + max(len(word), args.tail_depth)
        reps = need // len(word) + 1
        letters = word * reps
        if args.method == "logq":
            period = len(word)
        source = {"periodic": format_word(word)}
    res = levy_empirical(letters, args.n, method=args.method, tail_depth=args.tail_depth, period=period)
    results = {
        "n": args.n,
        "value": _f15(res.value),
        "error_bound": _error_bound_field(res.error_bound),
        "method": res.method,
    }
    if args.method == "birkhoff":
        results["tail_depth"] = args.tail_depth
    return {
        "command": "estimate",
        "alphabet": {"a": alphabet.a, "b": alphabet.b},
        "params": {**source, "n": args.n, "method": args.method},
        "results": results,
    }


HANDLERS = {
    "quad": cmd_quad,
    "slope": cmd_slope,
    "curve": cmd_curve,
    "invert": cmd_invert,
    "xi": cmd_xi,
    "estimate": cmd_estimate,
}


def _emit_csv(record, out):
    command = record["command"]
    if command == "curve":
        out.write("p,q,slope,f,x\n")
        for row in record["results"]["rows"]:
            out.write(f"{row['p']},{row['q']},{row['p']}/{row['q']},{row['f']:.15g},{row['x']:.15g}\n")
        return
    if command == "xi":
        out.write("m,u\n")
        for m, u in record["results"]["points"]:
            out.write(f"{m},{u:.15g}\n")
        for key in ("acc_even", "acc_odd", "predicted_even", "predicted_odd", "gap", "predicted_gap", "noise_floor", "verdict"):
            out.write(f"# {key}={record['results'][key]}\n")
        return
    out.write("key,value\n")
    for section in ("params", "results"):
        for key, value in record[section].items():
            out.write(f"{section}.{key},{value}\n")
    out.write(f"wall_time_s,{record['wall_time_s']}\n")


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        record = HANDLERS[args.command](args)
    except TargetOutOfRangeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"valid interval: [{exc.low:.15g}, {exc.high:.15g}]", file=sys.stderr)
        return EXIT_RANGE
    except (TruncatedStreamError, InsufficientDigitsError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidWordError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    record["wall_time_s"] = time.perf_counter() - start
    if args.format == "csv":
        buf = io.StringIO()
        _emit_csv(record, buf)
        sys.stdout.write(buf.getvalue())
    else:
        print(json.dumps(record, indent=2))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
