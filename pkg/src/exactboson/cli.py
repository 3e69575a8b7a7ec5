"""Command-line interface.

Exit codes: 0 success or passing verification, 1 failed verification,
2 input error, 3 refusal by a size guard. Each command echoes its resolved
configuration (including a defaulted seed) as one JSON line on stderr.
"""

import argparse
import contextlib
import csv
import json
import secrets
import sys
import warnings

from .bench import bench
from .distribution import DEFAULT_CAP, exact_table
from .estimator import ALGORITHMS, BosonSampler
from .exceptions import GuardError, InputError, SamplerError
from .io import (
    load_matrix,
    matrix_to_dict,
    read_samples,
    read_table_csv,
    sample_format,
    save_matrix,
    write_samples,
    write_table_csv,
)
from .linalg import haar_unitary, input_matrix, orthonormality_deviation
from .permanent import minors_last_row, permanent_glynn, permanent_naive
from .verify import Histogram, chisq_exact, chisq_two_sample, collision_audit

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_GUARD = 0, 1, 2, 3


def _echo_config(args):
    cfg = {k: v for k, v in vars(args).items() if k != "func"}
    print(json.dumps({"config": cfg}, sort_keys=True), file=sys.stderr)


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        try:
            fh = open(path, "w", newline="")
        except OSError as exc:
            raise InputError(f"cannot write {path}: {exc}") from exc
        with fh:
            yield fh


def cmd_gen_unitary(args):
    n = args.n if args.n is not None else args.m
    U = haar_unitary(args.m, args.seed)
    A = input_matrix(U, n)
    meta = {
        "seed": args.seed,
        "m": args.m,
        "n": n,
        "generator": "numpy PCG64 Ginibre + QR phase fix",
        "max_orthonormality_deviation": orthonormality_deviation(A),
    }
    if args.output in (None, "-"):
        print(json.dumps(matrix_to_dict(A, meta), sort_keys=True))
    else:
        try:
            save_matrix(args.output, A, meta)
        except OSError as exc:
            raise InputError(f"cannot write {args.output}: {exc}") from exc
    return EXIT_OK


def _matrix_from_args(args):
    if args.input:
        return load_matrix(args.input)
    if args.m is None or args.n is None:
        raise InputError("give --input or both --m and --n")
    if args.n > args.m:
        raise InputError(f"n={args.n} exceeds m={args.m}")
    return input_matrix(haar_unitary(args.m, args.seed), args.n)


def cmd_sample(args):
    A = _matrix_from_args(args)
    est = BosonSampler(
        algorithm=args.algorithm,
        fixed_alpha=args.fixed_alpha == "identity",
        cap=args.cap,
        max_n_A=args.max_n_a,
        max_tries=args.max_tries,
        n_jobs=args.jobs,
        random_state=args.seed,
    ).fit(A)
    records = est.sample_records(args.count)
    fmt = args.format or (sample_format(args.output) if args.output else "json")
    with _open_out(args.output) as fh:
        write_samples(records, fh, fmt, n=A.shape[1])
    return EXIT_OK


def _fmt_complex(v):
    return f"{float(v.real)!r} {float(v.imag)!r}"


def cmd_permanent(args):
    B = load_matrix(args.input)
    if B.shape[0] != B.shape[1]:
        raise InputError(f"permanent needs a square matrix, got {B.shape[0]}x{B.shape[1]}")
    if args.mode == "minors":
        for v in minors_last_row(B).minors:
            print(_fmt_complex(v))
    else:
        fn = permanent_glynn if args.mode == "glynn" else permanent_naive
        print(_fmt_complex(fn(B)))
    return EXIT_OK


def cmd_table(args):
    A = load_matrix(args.input)
    table = exact_table(A, args.cap)
    with _open_out(args.output) as fh:
        write_table_csv(table, fh)
    return EXIT_OK


def cmd_verify(args):
    samples = read_samples(args.samples, args.format)
    if not samples:
        raise InputError(f"no samples in {args.samples}")
    if args.test == "two-sample":
        if not args.samples2:
            raise InputError("two-sample test needs --samples2")
        other = read_samples(args.samples2, args.format)
        if not other:
            raise InputError(f"no samples in {args.samples2}")
        report = chisq_two_sample(
            Histogram.from_samples(samples), Histogram.from_samples(other),
            min_expected=args.min_expected, alpha=args.alpha,
        )
        print(report.to_json())
        return EXIT_OK if report.passed else EXIT_FAIL
    if args.test == "collision":
        if not args.input:
            raise InputError("collision audit needs --input matrix")
        audit = collision_audit(samples, load_matrix(args.input))
        print(json.dumps(audit.to_dict(), sort_keys=True))
        return EXIT_FAIL if audit.violation else EXIT_OK
    if args.exact:
        table = read_table_csv(args.exact)
    elif args.input:
        table = exact_table(load_matrix(args.input), args.cap)
    else:
        raise InputError("chisq test needs --exact table or --input matrix")
    report = chisq_exact(table, Histogram.from_samples(samples), args.min_expected, args.alpha)
    print(report.to_json())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_bench(args):
    rows = bench(range(args.n_min, args.n_max + 1), args.m_rule, args.reps, args.seed)
    with _open_out(args.output) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "m", "sample_B_s", "permanent_s", "minors_s",
                    "ratio_sample_permanent", "ratio_minors_permanent", "doubling"])
        prev = None
        for r in rows:
            doubling = r.sample_B / prev if prev else ""
            w.writerow([r.n, r.m, r.sample_B, r.permanent, r.minors,
                        r.ratio_sample_permanent, r.ratio_minors_permanent, doubling])
            prev = r.sample_B
    return EXIT_OK


def _positive_int(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def build_parser():
    p = argparse.ArgumentParser(prog="exactboson", description="Exact boson sampling toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen-unitary", help="write the first n columns of a Haar unitary")
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--n", type=int, default=None, help="columns to keep (default: m)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--output", default=None)
    g.set_defaults(func=cmd_gen_unitary)

    s = sub.add_parser("sample", help="draw exact samples")
    s.add_argument("--input", default=None, help="matrix JSON file")
    s.add_argument("--m", type=int, default=None, help="modes, when generating a Haar input")
    s.add_argument("--n", type=int, default=None, help="photons, when generating a Haar input")
    s.add_argument("--count", type=_positive_int, default=1)
    s.add_argument("--algorithm", choices=ALGORITHMS, default="B")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--format", choices=("json", "csv"), default=None)
    s.add_argument("--output", default=None)
    s.add_argument("--fixed-alpha", choices=("identity",), default=None,
                   help="identity column order; valid only for one sample of a Haar matrix")
    s.add_argument("--cap", type=int, default=DEFAULT_CAP)
    s.add_argument("--max-n-a", type=int, default=16)
    s.add_argument("--max-tries", type=int, default=10_000)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_sample)

    q = sub.add_parser("permanent", help="permanent or last-row minors of a square matrix")
    q.add_argument("--input", required=True)
    q.add_argument("--mode", choices=("glynn", "naive", "minors"), default="glynn")
    q.set_defaults(func=cmd_permanent)

    t = sub.add_parser("table", help="exact outcome table as CSV")
    t.add_argument("--input", required=True)
    t.add_argument("--cap", type=int, default=DEFAULT_CAP)
    t.add_argument("--output", default=None)
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", help="test samples against the exact distribution")
    v.add_argument("--samples", required=True)
    v.add_argument("--samples2", default=None)
    v.add_argument("--exact", default=None, help="outcome table CSV")
    v.add_argument("--input", default=None, help="matrix JSON (table built by enumeration)")
    v.add_argument("--test", choices=("chisq", "two-sample", "collision"), default="chisq")
    v.add_argument("--format", choices=("json", "csv"), default=None)
    v.add_argument("--alpha", type=float, default=1e-3)
    v.add_argument("--min-expected", type=float, default=5.0)
    v.add_argument("--cap", type=int, default=DEFAULT_CAP)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="time Algorithm B against single permanents")
    b.add_argument("--n-min", type=int, default=16)
    b.add_argument("--n-max", type=int, default=22)
    b.add_argument("--m-rule", default="2n^2")
    b.add_argument("--reps", type=int, default=10)
    b.add_argument("--seed", type=int, default=None)
    b.add_argument("--output", default=None)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "seed", "absent") is None:
        args.seed = secrets.randbits(63)
    _echo_config(args)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("default")
            return args.func(args)
    except GuardError as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except (InputError, SamplerError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
