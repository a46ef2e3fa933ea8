"""Command-line interface: invert, verify, gen, and bench.

Exit codes (stable, also documented in the README):
    0  success
    1  parse/usage errors (bad files, bad flags, malformed tokens)
    2  dimension mismatches between inputs
    3  a weight failed the symmetric positive definite check
    4  degenerate quadratic form inside the recursion (weight not p.d.)
    5  the two engines disagreed where they must agree (internal gate)

Payload goes to stdout (or --output); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import statistics
import sys
import time

import numpy as np

from .errors import (
    DegenerateDelta,
    DegenerateWeight,
    DimensionMismatch,
    DivisionByZero,
    ParseError,
    UnsupportedField,
    WeightNotSPD,
)
from .fields import FIELDS_BY_NAME, FLOAT64, RATFUN, RATIONAL
from .matio import GenSpec, parse_matrix, random_matrix, random_spd, serialize_matrix
from .matrix import Matrix, fro_norm, max_abs_gap
from .recursion import RecursionConfig, lm_udwadia, wmp_wang
from .verify import penrose_residuals, residual_threshold


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on usage errors; we reserve 2 for
    # dimension mismatches, so route usage problems through exit 1.
    def error(self, message):
        raise _UsageError(message)


def _read_matrix(path: str) -> Matrix:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_matrix(fh.read())


def _write_text(path, text: str):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _weights_for(a: Matrix, left_path, right_path):
    left = _read_matrix(left_path) if left_path else Matrix.identity(a.rows, a.field)
    right = _read_matrix(right_path) if right_path else Matrix.identity(a.cols, a.field)
    return left, right


def cmd_invert(args) -> int:
    a = _read_matrix(args.matrix)
    left, right = _weights_for(a, args.left_weight, args.right_weight)
    cfg = RecursionConfig(zero_tol_rel=args.tol, validate_weights=not args.no_validate)
    if args.algorithm == "wang":
        x = wmp_wang(a, left, right, cfg)
        _write_text(args.output, serialize_matrix(x))
        return 0
    if args.algorithm == "udwadia":
        x = lm_udwadia(a, left, right, cfg)
        _write_text(args.output, serialize_matrix(x))
        return 0
    x_w = wmp_wang(a, left, right, cfg)
    x_u = lm_udwadia(a, left, right, cfg)
    _write_text(args.output, serialize_matrix(x_w))
    if a.field is FLOAT64:
        gap = max_abs_gap(x_w, x_u)
        print(f"equivalent: max gap {gap:.3e}")
    elif x_w == x_u:
        print("equivalent: exact")
    else:
        print("equivalent: MISMATCH", file=sys.stderr)
        return 5
    return 0


def cmd_verify(args) -> int:
    a = _read_matrix(args.matrix)
    x = _read_matrix(args.inverse)
    left, right = _weights_for(a, args.left_weight, args.right_weight)
    res = penrose_residuals(a, x, left, right)
    names = ("AXA=A", "XAX=X", "(MAX)*=MAX", "(NXA)*=NXA")
    if res.exact:
        flags = (res.r1, res.r2, res.r3, res.r4)
        for name, ok in zip(names, flags):
            print(f"{name}: {'PASS' if ok else 'FAIL'}")
        return 0 if all(flags) else 1
    thr = residual_threshold(a, args.tol)
    norms = (res.r1, res.r2, res.r3, res.r4)
    ok_all = True
    for name, r in zip(names, norms):
        ok = r <= thr
        ok_all = ok_all and ok
        print(f"{name}: {r:.6e} {'PASS' if ok else 'FAIL'} (threshold {thr:.6e})")
    return 0 if ok_all else 1


def cmd_gen(args) -> int:
    field = FIELDS_BY_NAME[args.field] if args.field else None
    if args.spd:
        cols = args.rows
    else:
        if args.cols is None:
            raise _UsageError("--cols is required unless --spd is given")
        cols = args.cols
    if args.degree > 0 and field is not None and field is not RATFUN:
        raise _UsageError("--degree >= 1 needs --field ratfun")
    if args.spd:
        m = random_spd(args.rows, args.seed, field or RATIONAL)
    else:
        spec = GenSpec(
            rows=args.rows, cols=cols, degree=args.degree,
            prob1=args.prob1, prob2=args.prob2, seed=args.seed,
        )
        m = random_matrix(spec, field=field)
    _write_text(args.output, serialize_matrix(m))
    return 0


def _parse_sizes(text: str):
    sizes = []
    for tok in text.split(","):
        tok = tok.strip()
        parts = tok.lower().split("x")
        if len(parts) != 2 or not all(p.isdigit() and int(p) >= 1 for p in parts):
            raise _UsageError(f"bad size token {tok!r}; expected like 5x6")
        sizes.append((int(parts[0]), int(parts[1])))
    return sizes


def _case_seed(base_seed: int, case_index: int, role: int) -> int:
    ss = np.random.SeedSequence(base_seed, spawn_key=(case_index, role))
    return int(ss.generate_state(1, np.uint64)[0])


def cmd_bench(args) -> int:
    sizes = _parse_sizes(args.sizes)
    try:
        degrees = [int(t) for t in args.degrees.split(",")]
    except ValueError:
        raise _UsageError(f"bad degree list {args.degrees!r}") from None
    if any(d < 0 for d in degrees):
        raise _UsageError("degrees must be nonnegative")
    sep = "\t" if args.format == "tsv" else ","
    out = sys.stdout
    print("# timings from this build and host; the original experiments'", file=out)
    print("# absolute CPU times are environment-bound and are not reproduced here.", file=out)
    print("# generator: prob1=1 prob2=1, coefficients in [-10, 10]", file=out)
    print(sep.join(
        ("rows", "cols", "degree", "field", "algorithm", "trials",
         "median_s", "mean_s", "seed")
    ), file=out)
    cfg = RecursionConfig(validate_weights=False)
    case_index = 0
    for rows, cols in sizes:
        for degree in degrees:
            if degree >= 1:
                field = RATFUN
                if args.field and args.field != "ratfun":
                    raise _UsageError("degree >= 1 cases need --field ratfun")
            else:
                field = FIELDS_BY_NAME[args.field] if args.field else RATIONAL
            spec = GenSpec(
                rows=rows, cols=cols, degree=degree, prob1=1.0, prob2=1.0,
                seed=_case_seed(args.seed, case_index, 0),
            )
            a = random_matrix(spec, field=field)
            left = random_spd(rows, _case_seed(args.seed, case_index, 1), field)
            right = random_spd(cols, _case_seed(args.seed, case_index, 2), field)
            # equivalence gate, untimed: both engines must agree entrywise
            x_w = wmp_wang(a, left, right, cfg)
            x_u = lm_udwadia(a, left, right, cfg)
            if field is FLOAT64:
                gap = max_abs_gap(x_w, x_u)
                norm = max(1.0, fro_norm(x_w))
                if gap > 1e-8 * norm:
                    print(
                        f"bench abort: engines disagree on {rows}x{cols} "
                        f"degree {degree} (gap {gap:.3e})", file=sys.stderr,
                    )
                    return 5
            elif x_w != x_u:
                print(
                    f"bench abort: engines disagree on {rows}x{cols} degree {degree}",
                    file=sys.stderr,
                )
                return 5
            for name, fn in (("wang", wmp_wang), ("udwadia", lm_udwadia)):
                times = []
                for _ in range(args.trials):
                    t0 = time.perf_counter()
                    fn(a, left, right, cfg)
                    times.append(time.perf_counter() - t0)
                print(sep.join((
                    str(rows), str(cols), str(degree), field.name, name,
                    str(args.trials),
                    f"{statistics.median(times):.6f}",
                    f"{statistics.fmean(times):.6f}",
                    str(args.seed),
                )), file=out)
            case_index += 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="wmpinv",
        description="Weighted Moore-Penrose / generalized LM-inverse toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("invert", help="compute a weighted pseudoinverse")
    p.add_argument("--matrix", required=True)
    p.add_argument("--left-weight")
    p.add_argument("--right-weight")
    p.add_argument("--algorithm", choices=("wang", "udwadia", "both"), default="both")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--no-validate", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("verify", help="check a candidate inverse")
    p.add_argument("--matrix", required=True)
    p.add_argument("--inverse", required=True)
    p.add_argument("--left-weight")
    p.add_argument("--right-weight")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="generate a random matrix file")
    p.add_argument("--rows", type=int, required=True)
    p.add_argument("--cols", type=int)
    p.add_argument("--degree", type=int, default=0)
    p.add_argument("--prob1", type=float, default=1.0)
    p.add_argument("--prob2", type=float, default=1.0)
    p.add_argument("--spd", action="store_true")
    p.add_argument("--field", choices=("rational", "float", "ratfun"))
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time both engines on generated cases")
    p.add_argument("--sizes", required=True)
    p.add_argument("--degrees", required=True)
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--field", choices=("rational", "float", "ratfun"))
    p.add_argument("--format", choices=("tsv", "csv"), default="tsv")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ParseError, DivisionByZero, UnsupportedField, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except DimensionMismatch as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except WeightNotSPD as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (DegenerateDelta, DegenerateWeight) as e:
        print(f"error: {e}", file=sys.stderr)
        return 4


def console_entry():
    sys.exit(main())


if __name__ == "__main__":
    console_entry()
