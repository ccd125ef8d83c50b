"""Command-line interface: ``sboc run`` and ``sboc bench``.

Exit codes: 0 success, 2 bad arguments, 3 objective failure, 4 surrogate failure.
"""

import argparse
import logging
import sys

import numpy as np

from . import __version__
from .bench import get_function, run_suite, select
from .blackbox import MODES, BlackBoxEvaluator
from .core import BoxDomain
from .engine import SbocConfig, run
from .exceptions import ObjectiveFailure, OutOfBounds, SurrogateFailure
from .surrogate import SurrogateSpec, available_surrogates

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_OBJECTIVE = 3
EXIT_SURROGATE = 4


class UsageError(Exception):
    pass


def parse_bounds(text):
    """``"l1,u1;l2,u2;..."`` to a BoxDomain."""
    try:
        pairs = [tuple(float(v) for v in part.split(",")) for part in text.split(";") if part.strip()]
    except ValueError:
        raise UsageError(f"cannot parse bounds {text!r}; expected 'l1,u1;l2,u2;...'") from None
    if not pairs or any(len(p) != 2 for p in pairs):
        raise UsageError(f"cannot parse bounds {text!r}; expected 'l1,u1;l2,u2;...'")
    try:
        return BoxDomain.from_pairs(pairs)
    except ValueError as exc:
        raise UsageError(f"invalid bounds: {exc}") from None


def load_points(path, dim):
    """Raw-unit points, one per row, separated by commas or whitespace; '#' comments."""
    with open(path) as fh:
        rows = [ln.split("#", 1)[0].replace(",", " ").split() for ln in fh]
    rows = [r for r in rows if r]
    try:
        pts = np.array([[float(v) for v in r] for r in rows], dtype=float)
    except ValueError:
        raise UsageError(f"{path}: non-numeric entry") from None
    if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] != dim:
        raise UsageError(f"{path}: expected rows of {dim} numbers")
    return pts


def _ids(values):
    out = []
    for v in values or []:
        out.extend(p for p in v.split(",") if p.strip())
    return out


def build_parser():
    p = argparse.ArgumentParser(prog="sboc", description="Surrogate-based optimization via clustering.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to standard error")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="optimize one objective")
    src = r.add_mutually_exclusive_group(required=True)
    src.add_argument("--fn", help="registry function: id, name slug, or <slug>-<N>d")
    src.add_argument("--exec", dest="executable", help="black-box executable")
    r.add_argument("--bounds", help="box for --exec: 'l1,u1;l2,u2;...'")
    r.add_argument("--mode", choices=MODES, default="per-call", help="black-box invocation mode")
    r.add_argument("--timeout", type=float, default=None, help="seconds per black-box evaluation")
    r.add_argument("--surrogate", choices=available_surrogates(), default="rbf")
    r.add_argument("--kmax", type=int, default=None, help="evaluation budget (default 100 N)")
    r.add_argument("--k0", type=int, default=None, help="initial design size (default 5 N)")
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("--trace", help="write the per-evaluation trace CSV here")
    r.add_argument("--init-points", help="file of raw-unit initial points, one per row")
    r.add_argument("--backend", choices=("numba", "numpy"), default=None)

    b = sub.add_parser("bench", help="run the benchmark protocol")
    b.add_argument("--suite", choices=("all", "2d"), default="all")
    b.add_argument("--ids", action="append", help="comma-separated function ids or names")
    b.add_argument("--runs", type=int, default=10)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--kmax", type=int, default=None, help="evaluation budget (default 100 N)")
    b.add_argument("--surrogate", choices=available_surrogates(), default="rbf")
    b.add_argument("--out", default="sboc-report.json", help="JSON report path")
    b.add_argument("--csv", help="also write a flat CSV table here")
    b.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    b.add_argument("--backend", choices=("numba", "numpy"), default=None)
    return p


def _print_result(res, out):
    print("x_best: " + " ".join(repr(float(v)) for v in res.x_best_raw), file=out)
    print(f"f_best: {float(res.f_best)!r}", file=out)
    print(f"evaluations: {res.n_evals}", file=out)


def cmd_run(args, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    evaluator = None
    if args.fn is not None:
        if args.bounds:
            raise UsageError("--bounds applies to --exec only")
        try:
            fn = get_function(args.fn)
        except KeyError as exc:
            raise UsageError(exc.args[0]) from None
        objective, domain = fn.raw, fn.domain
    else:
        if not args.bounds:
            raise UsageError("--exec requires --bounds")
        domain = parse_bounds(args.bounds)
        evaluator = BlackBoxEvaluator(args.executable, args.mode, args.timeout)
        objective = evaluator
    init = load_points(args.init_points, domain.dim) if args.init_points else None
    if args.kmax is not None and args.kmax < 1:
        raise UsageError("--kmax must be positive")
    if args.k0 is not None and args.k0 < 1:
        raise UsageError("--k0 must be positive")
    cfg = SbocConfig(k_max=args.kmax, k0=args.k0, seed=args.seed,
                     surrogate=SurrogateSpec(args.surrogate), backend=args.backend)
    try:
        res = run(objective, domain, cfg, init_points=init)
    except OutOfBounds as exc:
        raise UsageError(f"initial point outside the bounds: {exc}") from None
    except ObjectiveFailure as exc:
        print(f"error: objective failure: {exc}", file=err)
        if args.trace and exc.partial is not None:
            exc.partial.write_trace(args.trace)
        return EXIT_OBJECTIVE
    except SurrogateFailure as exc:
        print(f"error: surrogate failure: {exc}", file=err)
        return EXIT_SURROGATE
    finally:
        if evaluator is not None:
            evaluator.close()
    if args.trace:
        res.write_trace(args.trace)
    _print_result(res, out)
    return EXIT_OK


def cmd_bench(args, out=None):
    out = out or sys.stdout
    if args.runs < 1:
        raise UsageError("--runs must be >= 1")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.kmax is not None and args.kmax < 1:
        raise UsageError("--kmax must be positive")
    try:
        fns = select(_ids(args.ids), args.suite)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    report = run_suite(fns, runs=args.runs, seed=args.seed, k_max=args.kmax,
                       surrogate=args.surrogate, jobs=args.jobs, backend=args.backend)
    report.write(args.out, args.csv)
    print(report.summary_text(), file=out)
    return EXIT_OK


def _join_bounds(argv):
    # "--bounds -1,1" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok == "--bounds":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--bounds={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = _join_bounds(sys.argv[1:] if argv is None else list(argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    handler = cmd_run if args.command == "run" else cmd_bench
    try:
        return handler(args)
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
