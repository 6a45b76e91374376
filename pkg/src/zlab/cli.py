"""Command-line entry point: one experiment per invocation.

Exit status is 0 on success, 1 for invalid parameters (checked before any
computation) and 2 when a computation fails its own sanity checks.
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import adelic, duality, explicit_formula, prime_poset, spectrum_stats, zeta_core
from ._parallel import thread_count
from .errors import ComputationError, ZlabError
from .io import atomic_write_text
from .primes import is_prime, prime_powers_up_to

EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTATION = 0, 1, 2


class UsageError(ZlabError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _emit(text: str, out) -> None:
    if out:
        atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _gnuplot(path, data_file: str, columns: list[str], title: str) -> None:
    lines = ["set datafile separator ','", f"set title '{title}'", "set key outside"]
    plots = [f"'{data_file}' every ::1 using 1:{i + 2} with lines title '{c}'"
             for i, c in enumerate(columns)]
    lines.append("plot " + ", \\\n     ".join(plots))
    atomic_write_text(path, "\n".join(lines) + "\n")


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise UsageError(message)


def _check_format(args, allowed) -> None:
    if args.format is not None:
        _require(args.format in allowed,
                 f"--format must be one of {', '.join(allowed)} for {args.command}")


def _check_grid(args, lo=-math.inf) -> None:
    _require(args.grid_step > 0, "--grid-step must be positive")
    _require(args.grid_end >= args.grid_start, "--grid-end must be >= --grid-start")
    _require(args.grid_start > lo, f"--grid-start must exceed {lo:g}")


def _check_zero_source(args) -> None:
    if args.zeros is None:
        _require(args.tmax is not None, "give --zeros PATH or --tmax")
        _require(zeta_core.SCAN_FLOOR < args.tmax <= zeta_core.DEFAULT_CEILING,
                 f"--tmax must lie in ({zeta_core.SCAN_FLOOR:g}, {zeta_core.DEFAULT_CEILING:g}]")


def _load_zeros(args) -> zeta_core.ZeroList:
    if args.zeros is not None:
        return zeta_core.ingest_zeros(args.zeros)
    return zeta_core.find_zeros(args.tmax)


# -- subcommands -------------------------------------------------------------

def cmd_zeros(args):
    _check_format(args, ("text", "json"))
    _require(args.compute != (args.ingest is not None), "give exactly one of --compute, --ingest")
    if args.compute:
        _require(args.tmax is not None, "--compute needs --tmax")
        _require(zeta_core.SCAN_FLOOR < args.tmax <= zeta_core.DEFAULT_CEILING,
                 f"--tmax must lie in ({zeta_core.SCAN_FLOOR:g}, {zeta_core.DEFAULT_CEILING:g}]")
    _require(args.limit is None or args.limit >= 1, "--limit must be >= 1")
    if args.compute:
        zeros = zeta_core.find_zeros(args.tmax)
        if args.limit is not None and args.limit < len(zeros):
            zeros = zeros.head(args.limit)
    else:
        zeros = zeta_core.ingest_zeros(args.ingest, args.limit)
    if args.format == "json":
        obs, pred = zeta_core.count_check(zeros, zeros.t_max)
        text = json.dumps({"source": zeros.source.value, "count": len(zeros),
                           "t_max": zeros.t_max, "predicted_count": pred,
                           "gammas": zeros.gammas.tolist()}, indent=2, sort_keys=True) + "\n"
    else:
        text = zeros.to_text()
    _emit(text, args.out)


def _dilation_params(args) -> spectrum_stats.DilationParams:
    _require((args.p is None) != (args.alpha is None), "give exactly one of --p, --alpha")
    _require(args.a >= 1 and args.q >= 1, "--a and --q must be >= 1")
    if args.alpha is not None:
        _require(args.alpha > 0, "--alpha must be positive")
        return spectrum_stats.DilationParams.free(args.alpha)
    if not is_prime(args.p):
        raise UsageError(f"--p {args.p} is not prime; use --alpha for composite bases")
    _require(math.gcd(args.a, args.q) == 1, "--a and --q must be coprime")
    return spectrum_stats.DilationParams.structured(args.p, args.a, args.q)


def cmd_dilate(args):
    _check_format(args, ("csv", "json"))
    params = _dilation_params(args)
    _require(args.bins >= 2, "--bins must be >= 2")
    _check_zero_source(args)
    zeros = _load_zeros(args)
    report = spectrum_stats.run_dilation_experiment(zeros, params, args.bins)
    _emit(report.to_json() if args.format == "json" else report.to_csv(), args.out)
    if args.gnuplot:
        _gnuplot(args.gnuplot, args.out or "dilate.csv", ["count", "density", "predicted_density"],
                 f"alpha={params.alpha:.6g}")


def cmd_gtheory(args):
    _check_format(args, ("csv",))
    _require(args.p is not None and is_prime(args.p), "--p must be a prime")
    _require(args.a >= 1 and args.q >= 1 and math.gcd(args.a, args.q) == 1,
             "--a, --q must be coprime positive integers")
    _require(args.K >= 1, "--K must be >= 1")
    _check_grid(args)
    xs = duality.uniform_grid(args.grid_start, args.grid_end, args.grid_step)
    closed = spectrum_stats.g_alpha_closed(xs, args.p, args.a, args.q)
    series = spectrum_stats.g_alpha_series(xs, args.p, args.a, args.q, args.K)
    rows = ["x,g_closed,g_series\n"]
    rows += [f"{float(x)!r},{float(c)!r},{float(s)!r}\n" for x, c, s in zip(xs, closed, series)]
    _emit("".join(rows), args.out)
    if args.gnuplot:
        _gnuplot(args.gnuplot, args.out or "gtheory.csv", ["g_closed", "g_series"],
                 f"g_alpha p={args.p} a={args.a} q={args.q}")


def cmd_pratt(args):
    _check_format(args, ("text", "dot", "json"))
    _require(args.p is not None and is_prime(args.p), "--p must be a prime")
    tree = prime_poset.pratt_tree(args.p)
    if args.format == "dot":
        text = tree.to_dot()
    elif args.format == "json":
        text = json.dumps(tree.as_dict(), sort_keys=True) + "\n"
    else:
        text = tree.to_text() + "\n"
    _emit(text, args.out)


def cmd_poset(args):
    _check_format(args, ("dot", "json", "text"))
    _require(args.limit is not None and args.limit >= 2, "--limit must be >= 2")
    _require(args.limit <= 10**7, "--limit must be <= 10^7")
    graph = prime_poset.poset_graph(args.limit)
    if args.format == "json":
        text = json.dumps(graph.as_dict(), sort_keys=True) + "\n"
    elif args.format == "text":
        preds = graph.predecessors()
        text = "".join(f"{v}: {' '.join(map(str, preds[v]))}\n" for v in graph.vertices)
    else:
        text = graph.to_dot()
    _emit(text, args.out)


def cmd_duality(args):
    _check_format(args, ("csv", "json"))
    _require(args.prominence > 0, "--prominence must be positive")
    _require(args.tol > 0, "--tol must be positive")
    if args.direction == "primes-to-zeros":
        _require(args.cutoff is not None and args.cutoff >= 2, "--cutoff must be >= 2")
        start, end, step = (args.grid_start if args.grid_start is not None else 10.0,
                            args.grid_end if args.grid_end is not None else 40.0,
                            args.grid_step if args.grid_step is not None else 0.01)
    else:
        _require(args.K is not None and args.K >= 0, "--K (number of zeros) must be >= 0")
        start, end, step = (args.grid_start if args.grid_start is not None else 1.5,
                            args.grid_end if args.grid_end is not None else 10.5,
                            args.grid_step if args.grid_step is not None else 0.005)
        _require(start > 1, "--grid-start must exceed 1")
    _require(step > 0 and end >= start, "grid must satisfy --grid-step > 0, --grid-end >= --grid-start")
    grid = duality.uniform_grid(start, end, step)
    if args.direction == "primes-to-zeros":
        curve = duality.primes_to_zeros_sum(grid, args.cutoff)
        need_targets = args.format == "json"
        if need_targets:
            if args.zeros is None and args.tmax is None:
                args.tmax = max(end + 1.0, zeta_core.SCAN_FLOOR + 1.0)
            _check_zero_source(args)
            zeros = _load_zeros(args)
            targets = [g for g in zeros.gammas if start <= g <= end]
    else:
        _check_zero_source(args)
        zeros = _load_zeros(args)
        _require(args.K <= len(zeros), f"--K {args.K} exceeds the {len(zeros)} available zeros")
        curve = duality.zeros_to_primes_sum(grid, args.K, zeros)
        targets = [pk for pk, _, _ in prime_powers_up_to(int(end)) if pk >= start]
    if args.format == "json":
        match = duality.best_polarity_match(curve, targets, args.tol, args.prominence)
        text = match.to_json()
    else:
        text = curve.to_csv()
    _emit(text, args.out)
    if args.gnuplot:
        _gnuplot(args.gnuplot, args.out or "duality.csv", ["y"], args.direction)


def cmd_explicit(args):
    _check_format(args, ("csv",))
    _require(args.K is not None and args.K >= 0, "--K must be >= 0")
    if args.x is not None:
        _require(args.x > 1, "--x must exceed 1")
        xs = [args.x]
    else:
        _require(None not in (args.grid_start, args.grid_end, args.grid_step),
                 "give --x or --grid-start/--grid-end/--grid-step")
        _check_grid(args, lo=1.0)
        xs = duality.uniform_grid(args.grid_start, args.grid_end, args.grid_step).tolist()
    _check_zero_source(args)
    zeros = _load_zeros(args)
    _require(args.K <= len(zeros), f"--K {args.K} exceeds the {len(zeros)} available zeros")
    _emit(explicit_formula.psi_sweep_csv(xs, zeros, args.K), args.out)
    if args.gnuplot:
        _gnuplot(args.gnuplot, args.out or "explicit.csv", ["psi_sieve", "psi_explicit"],
                 f"explicit formula K={args.K}")


def cmd_landau(args):
    _check_format(args, ("json",))
    _require(args.x is not None and args.x > 1, "--x must exceed 1")
    _require(args.tmax is not None, "--tmax (the height T) is required")
    if args.zeros is None:
        _check_zero_source(args)
    zeros = _load_zeros(args)
    _require(args.tmax <= zeros.t_max, f"--tmax exceeds the zero table height {zeros.t_max}")
    res = explicit_formula.landau_sum(args.x, zeros, args.tmax)
    _emit(json.dumps(res.as_dict(), indent=2, sort_keys=True) + "\n", args.out)


def cmd_adelic(args):
    _check_format(args, ("text", "json"))
    _require(args.rational is not None, "--rational num/den is required")
    x = adelic.parse_rational(args.rational)
    dec = adelic.partial_fractions(x)
    residue = adelic.character_triviality_check(x)
    if residue != 0:
        raise ComputationError(f"character check left residue {residue}")
    if args.format == "json":
        d = dec.as_dict()
        d["character_residue"] = str(residue)
        text = json.dumps(d, indent=2, sort_keys=True) + "\n"
    else:
        text = dec.to_text() + "\n"
    _emit(text, args.out)


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="zlab", description="Prime/zero duality experiments.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, fn, help_, fmt_default):
        p = sub.add_parser(name, help=help_, description=help_)
        p.set_defaults(func=fn)
        p.add_argument("--out", help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json", "dot", "text"), default=fmt_default)
        return p

    def zero_source(p):
        p.add_argument("--zeros", metavar="PATH", help="zero table, one height per line")
        p.add_argument("--tmax", type=float, help="compute zeros up to this height")

    def grid(p, start=None, end=None, step=None):
        p.add_argument("--grid-start", type=float, default=start)
        p.add_argument("--grid-end", type=float, default=end)
        p.add_argument("--grid-step", type=float, default=step)

    p = add("zeros", cmd_zeros, "compute or ingest zeta zero heights", "text")
    p.add_argument("--compute", action="store_true")
    p.add_argument("--tmax", type=float)
    p.add_argument("--ingest", metavar="PATH")
    p.add_argument("--limit", type=int)

    p = add("dilate", cmd_dilate, "histogram of dilated fractional parts", "csv")
    zero_source(p)
    p.add_argument("--p", type=int)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--alpha", type=float)
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--gnuplot", metavar="PATH", help="also write a gnuplot script")

    p = add("gtheory", cmd_gtheory, "g_alpha curve: closed form and partial series", "csv")
    p.add_argument("--p", type=int)
    p.add_argument("--a", type=int, default=1)
    p.add_argument("--q", type=int, default=1)
    p.add_argument("--K", type=int, default=60)
    grid(p, 0.0, 0.999, 0.001)
    p.add_argument("--gnuplot", metavar="PATH")

    p = add("pratt", cmd_pratt, "Pratt tree of a prime", "text")
    p.add_argument("--p", type=int)

    p = add("poset", cmd_poset, "POSet graph of primes up to a limit", "dot")
    p.add_argument("--limit", type=int)

    p = add("duality", cmd_duality, "prime-power and zero trigonometric sums", "csv")
    p.add_argument("--direction", choices=("primes-to-zeros", "zeros-to-primes"),
                   default="primes-to-zeros")
    p.add_argument("--cutoff", type=float)
    p.add_argument("--K", type=int, help="number of zeros (zeros-to-primes)")
    p.add_argument("--prominence", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=0.5)
    zero_source(p)
    grid(p)
    p.add_argument("--gnuplot", metavar="PATH")

    p = add("explicit", cmd_explicit, "psi(x) by sieve and by the explicit formula", "csv")
    zero_source(p)
    p.add_argument("--x", type=float)
    p.add_argument("--K", type=int)
    grid(p)
    p.add_argument("--gnuplot", metavar="PATH")

    p = add("landau", cmd_landau, "Landau sum over zeros up to height T", "json")
    zero_source(p)
    p.add_argument("--x", type=float)

    p = add("adelic", cmd_adelic, "principal-part decomposition of a rational", "text")
    p.add_argument("--rational")
    return parser


def dispatch(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_VALIDATION
    try:
        thread_count()
        args.func(args)
    except ComputationError as exc:
        print(f"zlab {args.command}: computation error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    except (ZlabError, OSError) as exc:
        print(f"zlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
