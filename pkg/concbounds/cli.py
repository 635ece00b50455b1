"""
Conc-Bounds Command Line
========================

    conc-bounds phi     --n N --z Z
    conc-bounds bound   {vector,matrix} --method M --n N [--m M] --delta D [--eps E|auto]
    conc-bounds compare --n N --sigma S --delta D [--eps E]
    conc-bounds table   --axis {delta,n} --values V1,V2,... --n N --sigma S --delta D
    conc-bounds verify  {lemma1,deriv,amgf,mgf,coverage,matrix,quantile} [suite flags]

Every command accepts --format {json,csv}, --seed, --strict, --workers and
--log-level. Records go to standard output (newline-delimited JSON by
default), logs to standard error.

Exit codes:
    0  success, or every check passed
    1  a verification check failed (or was inconclusive under --strict)
    2  usage or domain error
    3  numerical failure (no convergence, quadrature failure)
"""

import argparse
import logging
import sys
from typing import Callable, Dict, List, Optional

from concbounds import amgf, bounds, suites
from concbounds.exceptions import ConcBoundsError, UsageError, exit_code_for
from concbounds.models import BoundMethod, BoundParams, PhiQuery, Verdict
from concbounds.output import (
    OutputRecord,
    ResultEntry,
    bound_entries,
    encode_csv,
    encode_json,
    encode_table_csv,
)
from concbounds.streams import MonteCarloConfig

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1

METHOD_CHOICES = ["all", "scalar", "eps_net", "thm2", "thm3", "hkz", "thm4", "matrix_thm4"]

# Defaults for the grid suites when --n / --zmax / --grid are omitted
LEMMA1_DIMENSIONS = [1, 2, 3, 5, 10, 50, 200]
DERIVATIVE_DIMENSIONS = list(range(2, 21))

DEFAULT_DELTA_SWEEP = "0.1,0.01,0.001,0.0001"
DEFAULT_N_SWEEP = "1,2,5,10,20,50,100"


def parse_eps(text: str) -> Optional[float]:
    """--eps value: a float, or 'auto' for the optimiser."""
    if text.strip().lower() == "auto":
        return None
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number or 'auto', got {text!r}") from None


def parse_method(text: str) -> Optional[BoundMethod]:
    if text == "all":
        return None
    if text == "thm4":
        return BoundMethod.MATRIX_THM4
    return BoundMethod(text)


# ============================================================================
# Commands
# ============================================================================

def cmd_phi(args: argparse.Namespace) -> List[OutputRecord]:
    result = amgf.log_phi(PhiQuery(args.n, args.z))
    value = result.value
    entries = [
        ResultEntry(name="log_value", value=result.log_value),
        ResultEntry(name="value", value=value, verdict="overflow" if value is None else None),
    ]
    params = {"n": args.n, "z": args.z, "method": result.method}
    return [OutputRecord.build("phi", params, entries)]


def cmd_bound(args: argparse.Namespace) -> List[OutputRecord]:
    method = parse_method(args.method)
    params = {
        "kind": args.kind,
        "method": args.method,
        "n": args.n,
        "m": args.m,
        "sigma": args.sigma,
        "delta": args.delta,
        "eps": args.eps if args.eps is not None else "auto",
    }

    if args.kind == "matrix":
        if args.m is None:
            raise UsageError("matrix bounds require --m")
        if method not in (None, BoundMethod.MATRIX_THM4):
            raise UsageError(f"method {args.method} is a vector bound; use 'bound vector'")
        p = BoundParams(n=args.n, sigma=args.sigma, delta=args.delta, m=args.m, eps=args.eps)
        results = [bounds.resolve_bound(BoundMethod.MATRIX_THM4, p)]
    else:
        if method is BoundMethod.MATRIX_THM4:
            raise UsageError("matrix method requires 'bound matrix' with --m")
        if args.m is not None:
            raise UsageError("--m applies to matrix bounds only")
        p = BoundParams(n=args.n, sigma=args.sigma, delta=args.delta, eps=args.eps)
        if method is None:
            results = bounds.compare_methods(p)
        else:
            results = [bounds.resolve_bound(method, p)]

    entries = [e for r in results for e in bound_entries(r)]
    return [OutputRecord.build("bound", params, entries)]


def cmd_compare(args: argparse.Namespace) -> List[OutputRecord]:
    p = BoundParams(n=args.n, sigma=args.sigma, delta=args.delta, eps=args.eps)
    entries = [e for r in bounds.compare_methods(p) for e in bound_entries(r)]
    params = {"n": args.n, "sigma": args.sigma, "delta": args.delta, "eps": args.eps}
    return [OutputRecord.build("compare", params, entries)]


def cmd_table(args: argparse.Namespace) -> str:
    raw = args.values or (DEFAULT_DELTA_SWEEP if args.axis == "delta" else DEFAULT_N_SWEEP)
    try:
        values = [float(v) if args.axis == "delta" else int(v) for v in raw.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"--values must be comma-separated numbers, got {raw!r}") from None
    if not values:
        raise UsageError("--values is empty")
    p = BoundParams(n=args.n, sigma=args.sigma, delta=args.delta, eps=args.eps)
    return encode_table_csv(args.axis, bounds.sweep_methods(p, args.axis, values))


def _coverage_methods(args: argparse.Namespace, is_matrix: bool, n: int) -> List[BoundMethod]:
    method = parse_method(args.method)
    if method is not None:
        return [method]
    if is_matrix:
        return [BoundMethod.MATRIX_THM4]
    methods = [BoundMethod.EPS_NET, BoundMethod.THM2, BoundMethod.THM3, BoundMethod.HKZ]
    return ([BoundMethod.SCALAR] if n == 1 else []) + methods


def cmd_verify(args: argparse.Namespace) -> List[OutputRecord]:
    config = MonteCarloConfig(workers=args.workers)
    suite = args.suite

    if suite == "lemma1":
        ns = [args.n] if args.n is not None else LEMMA1_DIMENSIONS
        eps = [args.eps] if args.eps is not None else None
        return suites.lemma1_suite(ns, eps, args.zmax or 500.0, args.grid or 200)
    if suite == "deriv":
        ns = [args.n] if args.n is not None else DERIVATIVE_DIMENSIONS
        return suites.derivative_suite(ns, args.zmin, args.zmax or 50.0, args.grid or 50)

    if suite == "matrix":
        return suites.matrix_suite(
            args.m or 3, args.n or 4, args.lam, args.count, args.samples,
            args.coverage_samples, args.delta, args.seed, args.eps, config,
        )

    n = args.n if args.n is not None else 10
    if suites.DIST_FAMILIES[args.dist].is_matrix and args.m is None:
        raise UsageError("--dist gaussian_matrix requires --m")
    spec = suites.make_spec(args.dist, n, args.sigma, args.m)
    if suite == "amgf":
        return suites.amgf_suite(spec, args.lam, args.samples, args.seed, config)
    if suite == "mgf":
        return suites.mgf_suite(
            spec, args.lam, args.samples, args.seed, args.directions, args.trials, config
        )
    if suite == "coverage":
        methods = _coverage_methods(args, spec.is_matrix, n)
        return suites.coverage_suite(
            spec, methods, args.delta, args.samples, args.seed, args.eps, config
        )
    return suites.quantile_suite(spec, args.delta, args.samples, args.seed, config)


COMMANDS: Dict[str, Callable[[argparse.Namespace], List[OutputRecord]]] = {
    "phi": cmd_phi,
    "bound": cmd_bound,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


# ============================================================================
# Parser
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv"], default="json",
                        help="Output encoding (default: json)")
    common.add_argument("--seed", type=int, default=0, help="Unsigned seed (default: 0)")
    common.add_argument("--strict", action="store_true",
                        help="Treat inconclusive checks as failures")
    common.add_argument("--workers", type=int, default=1,
                        help="Monte Carlo threads; results do not depend on it (default: 1)")
    common.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"],
                        help="Log level for standard error (default: WARNING)")

    parser = argparse.ArgumentParser(
        prog="conc-bounds",
        description="Norm concentration bounds for sub-Gaussian vectors and matrices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    phi = sub.add_parser("phi", parents=[common], help="Evaluate log φₙ(z)")
    phi.add_argument("--n", type=int, required=True, help="Dimension n >= 1")
    phi.add_argument("--z", type=float, required=True, help="Argument z >= 0")

    bound = sub.add_parser("bound", parents=[common], help="Concentration radius")
    bound.add_argument("kind", choices=["vector", "matrix"])
    bound.add_argument("--method", choices=METHOD_CHOICES, default="all")
    bound.add_argument("--n", type=int, required=True, help="Dimension (columns for matrices)")
    bound.add_argument("--m", type=int, help="Row count (matrix bounds)")
    bound.add_argument("--sigma", type=float, default=1.0, help="Variance proxy σ")
    bound.add_argument("--delta", type=float, required=True, help="Failure probability δ")
    bound.add_argument("--eps", type=parse_eps, default=None, help="ε in (0, 1) or 'auto'")

    compare = sub.add_parser("compare", parents=[common], help="All vector radii side by side")
    compare.add_argument("--n", type=int, required=True)
    compare.add_argument("--sigma", type=float, default=1.0)
    compare.add_argument("--delta", type=float, required=True)
    compare.add_argument("--eps", type=parse_eps, default=None,
                         help="ε for the ε-net bound (default: optimised)")

    table = sub.add_parser("table", parents=[common], help="CSV sweep of compare over δ or n")
    table.add_argument("--axis", choices=["delta", "n"], default="delta")
    table.add_argument("--values", help="Comma-separated sweep values")
    table.add_argument("--n", type=int, default=10)
    table.add_argument("--sigma", type=float, default=1.0)
    table.add_argument("--delta", type=float, default=0.01)
    table.add_argument("--eps", type=parse_eps, default=None)

    verify = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    verify.add_argument("suite", choices=list(suites.SUITES))
    verify.add_argument("--n", type=int, help="Dimension (grid suites default to a set)")
    verify.add_argument("--m", type=int, help="Row count for matrix samplers")
    verify.add_argument("--eps", type=parse_eps, default=None)
    verify.add_argument("--zmin", type=float, default=0.1)
    verify.add_argument("--zmax", type=float)
    verify.add_argument("--grid", type=int)
    verify.add_argument("--dist", choices=list(suites.DIST_FAMILIES), default="gaussian")
    verify.add_argument("--sigma", type=float, default=1.0,
                        help="Sampler scale; equals its certified variance proxy")
    verify.add_argument("--lambda", dest="lam", type=float, default=1.0)
    verify.add_argument("--method", choices=METHOD_CHOICES, default="all")
    verify.add_argument("--delta", type=float, default=0.01)
    verify.add_argument("--samples", type=int, default=100_000)
    verify.add_argument("--coverage-samples", type=int, default=10_000,
                        help="Samples for matrix coverage (default: 10000)")
    verify.add_argument("--directions", type=int, default=20)
    verify.add_argument("--trials", type=int, default=1)
    verify.add_argument("--count", type=int, default=20, help="Random matrices to check")

    return parser


def overall_verdict(records: List[OutputRecord]) -> Verdict:
    seen = {v for record in records for v in record.verdicts}
    if Verdict.FAIL.value in seen:
        return Verdict.FAIL
    if Verdict.INCONCLUSIVE.value in seen:
        return Verdict.INCONCLUSIVE
    return Verdict.PASS


def main(argv: Optional[List[str]] = None) -> int:
    """Entry point for the conc-bounds console script."""
    parser = build_parser()
    args = parser.parse_args(argv)

    logging.basicConfig(
        level=getattr(logging, args.log_level),
        format=LOG_FORMAT,
        stream=sys.stderr,
    )

    try:
        if args.command == "table":
            sys.stdout.write(cmd_table(args))
            return EXIT_OK
        records = COMMANDS[args.command](args)
    except (ConcBoundsError, ArithmeticError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return exit_code_for(e)

    encoded = encode_csv(records) if args.format == "csv" else encode_json(records)
    sys.stdout.write(encoded)

    if args.command != "verify":
        return EXIT_OK
    verdict = overall_verdict(records)
    if verdict is Verdict.FAIL:
        return EXIT_VERIFICATION_FAILED
    if verdict is Verdict.INCONCLUSIVE:
        if args.strict:
            return EXIT_VERIFICATION_FAILED
        logger.warning("some checks were inconclusive (counted as pass; use --strict to fail)")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
