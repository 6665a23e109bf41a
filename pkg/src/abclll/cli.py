"""Command-line interface: verify, reduce, search, tables, estimate.

Exit statuses: 0 success, 1 a checked property failed, 2 bad input,
3 output file unwritable.
"""

from __future__ import annotations

import argparse
import logging
import sys
from decimal import Decimal, InvalidOperation

from abclll import _kernels
from abclll.errors import AbcError, BoundsTooLarge, OutputUnwritable, ParseError, RadicalIsOne
from abclll.lattice import DEFAULT_BOX, DEFAULT_CF_DEPTH, gram_determinant, norm2
from abclll.numt import DEFAULT_EFFORT, FactorEffort, Factorization, gcd_factored, radical
from abclll.triples import (
    GOOD_ABC,
    GOOD_SZPIRO,
    BaseTriple,
    build_triple,
    format_factored,
    parse_factored,
    triple_metrics,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_OUTPUT = 0, 1, 2, 3

MODE_NAMES = {
    "smooth": "smooth",
    "prime-powers": "prime_powers",
    "pp-products-2": "prime_power_products_2",
}


class UsageError(Exception):
    pass


def count(text: str) -> int:
    """Non-negative integer flag; scientific notation allowed (``1e7``)."""
    try:
        d = Decimal(text)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not d.is_finite() or d != d.to_integral_value() or d < 0:
        raise argparse.ArgumentTypeError(f"not a non-negative integer: {text!r}")
    return int(d)


def real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _g(x: float) -> str:
    return f"{x:.10g}"


def _show(label: str, f: Factorization) -> str:
    return f"{label} = {format_factored(f)}  ({f.value})"


def _effort(args) -> FactorEffort:
    if getattr(args, "factor_effort", None) is None:
        return DEFAULT_EFFORT
    return FactorEffort(DEFAULT_EFFORT.trial_bound, args.factor_effort)


def cmd_verify(args) -> int:
    a, b, c = (parse_factored(x) for x in (args.a, args.b, args.c))
    if args.reduce_gcd:
        g = gcd_factored(gcd_factored(a, b), c)
        if g.value != 1:
            print(f"dividing by common gcd {format_factored(g)}")
            a, b, c = a.divide(g), b.divide(g), c.divide(g)
    print(_show("A", a))
    print(_show("B", b))
    print(_show("C", c))
    sum_ok = a.value + b.value == c.value
    print(f"A + B = C: {'yes' if sum_ok else 'NO'}")
    coprime = all(gcd_factored(x, y).value == 1 for x, y in ((a, b), (a, c), (b, c)))
    print(f"pairwise coprime: {'yes' if coprime else 'no'}")
    rad = radical(a, b, c)
    print(f"rad = {format_factored(rad)}  ({rad.value})")
    try:
        p, rho, size = triple_metrics(a, b, c)
    except RadicalIsOne:
        print("P, rho undefined (rad = 1)")
    else:
        print(f"P = {_g(p)}")
        print(f"rho = {_g(rho)}")
        print(f"size: log10 max = {_g(size)}")
        good_abc = sum_ok and coprime and p > GOOD_ABC
        good_sz = sum_ok and coprime and rho > GOOD_SZPIRO
        print(f"good ABC triple: {'yes' if good_abc else 'no'}")
        print(f"good Szpiro triple: {'yes' if good_sz else 'no'}")
    return EXIT_OK if sum_ok else EXIT_FAIL


def cmd_reduce(args) -> int:
    from abclll.lattice import combine_candidates, relation_basis
    from abclll.errors import DegenerateRelation, IncompleteFactorization

    facs = [parse_factored(x) for x in (args.a0, args.b0, args.c0)]
    try:
        base = BaseTriple(*facs)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    vals = base.values
    v1, v2 = relation_basis(*vals)
    print(f"base: {', '.join(format_factored(f) for f in facs)}")
    print(f"v1 = {tuple(v1)}  |v1|^2 = {norm2(v1)}")
    print(f"v2 = {tuple(v2)}  |v2|^2 = {norm2(v2)}")
    g = gcd_factored(gcd_factored(facs[0], facs[1]), facs[2]).value
    det = gram_determinant([v1, v2])
    target = norm2([x // g for x in vals])
    print(f"Gram determinant {det} {'==' if det == target else '!='} |base/gcd|^2 = {target}")
    effort = _effort(args)
    cands = combine_candidates(v1, v2, args.cf_depth, args.box)
    print(f"{len(cands)} candidates")
    for rel in cands:
        try:
            t = build_triple(rel, base, effort)
        except DegenerateRelation:
            print(f"  {tuple(rel)}: degenerate")
            continue
        except IncompleteFactorization as exc:
            print(f"  {tuple(rel)}: skipped, cofactor {exc.cofactor} unfactored")
            continue
        marks = ("  good ABC" if t.p_metric > GOOD_ABC else "") + (
            "  good Szpiro" if t.rho_metric > GOOD_SZPIRO else "")
        print(f"  {tuple(rel)}: {format_factored(t.a)} + {format_factored(t.b)} = "
              f"{format_factored(t.c)}  P={_g(t.p_metric)} rho={_g(t.rho_metric)}{marks}")
    return EXIT_OK


def cmd_search(args) -> int:
    from abclll.search import SearchConfig, run_search

    try:
        cfg = SearchConfig(
            value_bound=args.max_value,
            prime_bound=args.prime_bound,
            mode=MODE_NAMES[args.mode],
            include_one=args.include_one,
            p_threshold=args.p_threshold,
            rho_threshold=args.rho_threshold,
            cf_depth=args.cf_depth,
            box=args.box,
            factor_effort=_effort(args),
            worker_count=args.workers,
            output_path=args.out,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    try:
        records, stats = run_search(cfg)
    except BoundsTooLarge as exc:
        raise UsageError(str(exc)) from exc
    for r in records[: args.show]:
        print(f"P={_g(r.p_metric)} rho={_g(r.rho_metric)}  {format_factored(r.triple.a)} + "
              f"{format_factored(r.triple.b)} = {format_factored(r.triple.c)}")
    print(f"{len(records)} records written to {cfg.output_path}")
    print(stats.summary())
    return EXIT_OK


def cmd_tables(args) -> int:
    from abclll.search import default_fixture, verify_tables

    path = args.fixture or default_fixture()
    try:
        report = verify_tables(path)
    except OSError as exc:
        raise UsageError(f"cannot read fixture: {exc}") from exc
    for row in report.rows:
        print(row.line())
    if not report.rows:
        print(f"warning: fixture {path} has no rows", file=sys.stderr)
    n_ok = sum(r.passed for r in report.rows)
    print(f"{n_ok}/{len(report.rows)} rows pass "
          f"({report.count('szpiro')} szpiro, {report.count('abc')} abc)")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_estimate(args) -> int:
    from abclll.triples import estimate_worst_case_power

    try:
        primes = [float(x) for x in args.primes.split(",")]
    except ValueError as exc:
        raise UsageError(f"bad --primes: {exc}") from exc
    if len(primes) != 3:
        raise UsageError(f"--primes needs exactly three values, got {len(primes)}")
    try:
        value = estimate_worst_case_power(args.size, *primes)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    print(f"worst-case P for size {args.size:g}, primes {args.primes}: {_g(value)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="abclll", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check a triple and print its metrics")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("c")
    p.add_argument("--reduce-gcd", action="store_true", help="divide out the common gcd first")
    p.set_defaults(func=cmd_verify)

    def candidate_flags(p):
        p.add_argument("--cf-depth", type=count, default=DEFAULT_CF_DEPTH)
        p.add_argument("--box", type=count, default=DEFAULT_BOX)
        p.add_argument("--factor-effort", type=count, default=None,
                       help="Pollard-Brent iterations per cofactor")

    p = sub.add_parser("reduce", help="relation lattice of three numbers and its candidates")
    p.add_argument("a0")
    p.add_argument("b0")
    p.add_argument("c0")
    candidate_flags(p)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("search", help="search for good triples")
    p.add_argument("--max-value", type=count, default=10**7, help="bases are < this")
    p.add_argument("--prime-bound", type=count, default=24, help="primes of bases are < this")
    p.add_argument("--mode", choices=sorted(MODE_NAMES), default="prime-powers")
    p.add_argument("--include-one", action="store_true")
    p.add_argument("--p-threshold", type=real, default=GOOD_ABC)
    p.add_argument("--rho-threshold", type=real, default=GOOD_SZPIRO)
    candidate_flags(p)
    p.add_argument("--workers", type=count, default=1)
    p.add_argument("--out", default="abc_search.jsonl")
    p.add_argument("--show", type=count, default=20, help="records echoed to stdout")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("tables", help="re-verify the published tables")
    p.add_argument("--fixture", default=None)
    p.set_defaults(func=cmd_tables)

    p = sub.add_parser("estimate", help="worst-case power estimate")
    p.add_argument("--size", type=real, required=True)
    p.add_argument("--primes", required=True, help="three comma-separated numbers")
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(message)s",
        stream=sys.stderr,
    )
    logging.getLogger(__name__).debug("kernel backend: %s", _kernels.BACKEND)
    try:
        return args.func(args)
    except (ParseError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OutputUnwritable as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_OUTPUT
    except AbcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
