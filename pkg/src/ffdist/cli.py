"""Command-line entry point: ``ffdist <subcommand> [options]``.

Exit codes: 0 success, 1 domain or validation error, 2 resource cap hit.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import analysis, report, verify
from .asymptotics import (
    hq,
    hq_direct_product,
    hq_direct_tail,
    hwang_main_term,
    new_main_term,
    normalized_count,
    warlimont_main_term,
)
from .errors import DomainError, ResourceError
from .exact_dist import (
    OMEGA_EXACT_CAP,
    STIRLING_EXACT_CAP,
    Kind,
    Mode,
    omega_dist_float,
    omega_row,
    stirling_row,
    stirling_row_float,
)
from .prime_tab import check_prime_power, prime_counts

CLI_TOL = 1e-10
ORACLE_DEGREE = 30

LOG_NOTE = "All logarithms are natural (base e): r = (k-1)/log n, Poisson mean log n."


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; 2 is reserved for resource caps
    def error(self, message):
        raise _UsageError(message)


def _int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def _tol(text: str) -> float:
    try:
        tol = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid tolerance {text!r}") from None
    if not 0 < tol <= 1e-3:
        raise argparse.ArgumentTypeError(f"tol must lie in (0, 1e-3], got {text}")
    return tol


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="write here instead of stdout")
    common.add_argument(
        "--threads",
        type=_positive,
        default=os.cpu_count() or 1,
        help="worker processes for independent (q, n) jobs; FFDIST_THREADS overrides",
    )

    parser = _Parser(
        prog="ffdist",
        description="Prime-factor counts of random polynomials over F_q against cycle counts of random permutations. "
        + LOG_NOTE,
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text, description=f"{help_text}. {LOG_NOTE}")

    p = add("pi", "number of monic irreducibles of each degree")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--dmax", type=_positive, required=True)

    p = add("dist", "law of Omega(f_n) or of the cycle count K(pi_n)")
    p.add_argument("--kind", choices=[k.value for k in Kind], required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--q", type=int)
    p.add_argument("--mode", choices=[m.value for m in Mode], help="default: exact when n is within the exact cap")
    p.add_argument("--kcap", type=_positive, help="float-mode truncation in k (omega only)")

    p = add("hq", "Euler-product correction h_q(x) for real 0 <= x < q")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--tol", type=_tol, default=CLI_TOL)
    p.add_argument("--oracle", action="store_true", help=f"also report the direct product to degree {ORACLE_DEGREE}")

    p = add("mainterm", "main-term approximations to P(Omega(f_n) = k)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--which", choices=("hwang", "warlimont", "new"), required=True)
    p.add_argument("--tol", type=_tol, default=CLI_TOL)

    p = add("compare", "pointwise ratio P(Omega=k)/P(K=k) against h_q(r)")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--kmax", type=_positive)
    p.add_argument("--mode", choices=[m.value for m in Mode])

    p = add("tv", "total variation distance between the two laws")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--decompose", action="store_true", help="add the interval sums S1, S2, S3 (summing to 2 d_TV)")
    p.add_argument("--mode", choices=[m.value for m in Mode])

    p = add("scaling", "total variation over a (q, n) grid")
    p.add_argument("--q", type=_int_list, required=True, help="comma-separated, e.g. 2,3,5")
    p.add_argument("--n", type=_int_list, required=True, help="comma-separated, e.g. 100,1000")
    p.add_argument("--mode", choices=[m.value for m in Mode])

    p = add("verify", "run the invariant and acceptance checks")
    p.add_argument("--suite", choices=("fast", "all"), default="fast")
    return parser


def _threads(args) -> int:
    env = os.environ.get("FFDIST_THREADS")
    if env is None:
        return args.threads
    try:
        return _positive(env)
    except argparse.ArgumentTypeError as exc:
        raise DomainError(f"FFDIST_THREADS: {exc}") from None


def _mode(args) -> Mode | None:
    return Mode(args.mode) if args.mode else None


# --- subcommands: each returns (records, record class) ---


def _cmd_pi(args):
    table = prime_counts(args.q, args.dmax)
    return [report.PiRecord(d, c) for d, c in table.rows()], report.PiRecord


def _cmd_dist(args):
    kind = Kind(args.kind)
    if kind is Kind.OMEGA:
        if args.q is None:
            raise DomainError("--q is required for --kind omega")
        check_prime_power(args.q)
        cap = OMEGA_EXACT_CAP
    else:
        if args.q is not None:
            check_prime_power(args.q)
        cap = STIRLING_EXACT_CAP
    mode = _mode(args) or (Mode.EXACT if args.n <= cap else Mode.FLOAT)
    if args.kcap is not None and (kind is Kind.CYCLES or mode is Mode.EXACT):
        raise DomainError("--kcap applies only to float-mode omega")
    if kind is Kind.OMEGA:
        row = omega_row(args.q, args.n) if mode is Mode.EXACT else omega_dist_float(args.q, args.n, args.kcap)
        q = args.q
    else:
        row = stirling_row(args.n) if mode is Mode.EXACT else stirling_row_float(args.n)
        q = None
    k_last = row.k_cap or row.n
    records = [report.DistRecord(kind.value, row.n, q, mode.value, k, row[k]) for k in range(1, k_last + 1)]
    return records, report.DistRecord


def _cmd_hq(args):
    value = hq(args.q, args.x, args.tol)
    oracle = tail = None
    if args.oracle:
        oracle = hq_direct_product(args.q, args.x, ORACLE_DEGREE)
        tail = hq_direct_tail(args.q, args.x, ORACLE_DEGREE)
    return [report.HqRecord(args.q, args.x, args.tol, value, oracle, tail)], report.HqRecord


def _cmd_mainterm(args):
    r = normalized_count(args.n, args.k)
    check_prime_power(args.q)
    if args.which == "hwang":
        value = hwang_main_term(args.n, args.k)
    elif args.which == "warlimont":
        value = warlimont_main_term(args.n, args.k, args.q, args.tol)
    else:
        cycles, _ = analysis.distribution_pair(args.q, args.n)
        value = new_main_term(float(cycles[args.k]), r, args.q, args.tol)
    return [report.MainTermRecord(args.n, args.k, args.q, args.which, r, value)], report.MainTermRecord


def _cmd_compare(args):
    check_prime_power(args.q)
    return analysis.ratio_report(args.q, args.n, args.kmax, _mode(args)), analysis.ComparisonRow


def _cmd_tv(args):
    check_prime_power(args.q)
    r = analysis.tv_report(args.q, args.n, _mode(args))
    if args.decompose:
        return [r], analysis.TVReport
    return [report.TVSummaryRecord(r.n, r.q, r.d_tv, r.scaled, r.mode)], report.TVSummaryRecord


def _cmd_scaling(args):
    for q in args.q:
        check_prime_power(q)
    for n in args.n:
        if n < 1:
            raise DomainError(f"n must be >= 1, got {n}")
    return analysis.tv_scaling_study(args.q, args.n, _mode(args), threads=_threads(args)), analysis.TVReport


def _cmd_verify(args):
    results = verify.run_suite(args.suite)
    records = [report.CheckRecord(r.name, r.passed, r.detail, r.seconds) for r in results]
    return records, report.CheckRecord


COMMANDS = {
    "pi": _cmd_pi,
    "dist": _cmd_dist,
    "hq": _cmd_hq,
    "mainterm": _cmd_mainterm,
    "compare": _cmd_compare,
    "tv": _cmd_tv,
    "scaling": _cmd_scaling,
    "verify": _cmd_verify,
}


def _fail(code: int, message: str) -> int:
    sys.stderr.write("ffdist: " + " ".join(str(message).split()) + "\n")
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _threads(args)
        records, cls = COMMANDS[args.command](args)
        data = report.serialize(records, cls, args.format)
        if args.out:
            with open(args.out, "wb") as fh:
                fh.write(data)
        else:
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
    except _UsageError as exc:
        return _fail(1, exc)
    except ResourceError as exc:
        return _fail(2, exc)
    except MemoryError:
        return _fail(2, "out of memory")
    except (DomainError, ValueError, OverflowError) as exc:
        return _fail(1, exc)
    except BrokenPipeError:
        # downstream closed early (e.g. piped into head); not an error
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        return 0
    except OSError as exc:
        return _fail(1, f"cannot write output: {exc}")
    if args.command == "verify":
        failed = [r.name for r in records if not r.passed]
        if failed:
            return _fail(1, f"{len(failed)} check(s) failed: {', '.join(failed)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
