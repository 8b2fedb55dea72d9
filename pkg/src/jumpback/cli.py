"""Command-line front end: mapping, scans, experiments, and verification.

Exit codes: 0 on success / check passed, 1 when a check failed, 2 for
usage or I/O errors. Every command is bit-reproducible for a fixed seed.
"""

from __future__ import annotations

import argparse
import sys

from . import _backend, bench, golden, hashers, stats


def _parse_key(text: str) -> int:
    try:
        key = int(text, 0)
    except ValueError:
        raise ValueError(f"invalid key {text!r}: use decimal or 0x-hex") from None
    if not 0 <= key <= (1 << 64) - 1:
        raise ValueError("key must be an unsigned 64-bit integer")
    return key


def _format_key(key: int) -> str:
    return f"0x{key:016X}"


def _parse_n_spec(text: str) -> list[int]:
    """n-spec: 'list:<comma separated ints>' or 'geom:<n0>:<factor>'."""
    kind, _, rest = text.partition(":")
    if kind == "list" and rest:
        return [int(item) for item in rest.split(",")]
    if kind == "geom" and rest:
        n0_text, _, factor_text = rest.partition(":")
        if factor_text:
            return stats.geometric_n_sequence(int(n0_text), float(factor_text))
    raise ValueError(
        f"invalid n-spec {text!r}: use list:<ints> or geom:<n0>:<factor>")


def _parse_n_range(text: str) -> list[int]:
    lo_text, _, hi_text = text.partition(":")
    if not hi_text:
        raise ValueError(f"invalid n-range {text!r}: use <lo>:<hi>")
    lo, hi = int(lo_text), int(hi_text)
    if lo < 1 or hi < lo:
        raise ValueError(f"invalid n-range {text!r}")
    return list(range(lo, hi + 1))


def _kernel(args):
    return _backend.get_kernel(getattr(args, "backend", "auto"))


def cmd_map(args) -> int:
    key = _parse_key(args.key)
    bucket, invocations = _kernel(args).eval_counted(
        hashers.algo_id(args.algo), key, args.n)
    line = f"bucket={bucket}"
    if args.count:
        line += f" invocations={invocations}"
    print(line)
    return 0


def cmd_scan(args) -> int:
    key = _parse_key(args.key)
    trajectory = _kernel(args).trajectory(hashers.algo_id(args.algo), key, args.n_max)
    previous = None
    reassignments = -1
    for n in range(1, args.n_max + 1):
        bucket = int(trajectory[n - 1])
        if bucket != previous:
            reassignments += 1
            line = f"n={n} bucket={bucket}"
            if n > 1 and bucket != n - 1:
                line += " violation"
            print(line)
            previous = bucket
    print(f"reassignments={reassignments}")
    return 0


def cmd_consumption(args) -> int:
    n_list = _parse_n_spec(args.n_spec)
    summaries = stats.run_consumption_experiment(
        args.algo, n_list, args.keys, args.seed, kernel=_kernel(args))
    if args.out:
        stats.write_consumption_csv(args.out, summaries)
    else:
        print("\n".join(stats.consumption_csv_lines(summaries)))
    mean_dev, var_dev = stats.max_theory_deviation(summaries)
    print(f"max_mean_deviation={mean_dev:.9g} max_variance_deviation={var_dev:.9g}",
          file=sys.stderr)
    return 0


def cmd_check_monotonicity(args) -> int:
    violations = stats.run_monotonicity_check(
        args.algo, args.runs, args.n_max, args.seed, kernel=_kernel(args))
    status = "pass" if violations == 0 else "fail"
    print(f"check=monotonicity algo={args.algo} runs={args.runs} "
          f"n_max={args.n_max} violations={violations} status={status}")
    return 0 if violations == 0 else 1


def cmd_check_uniformity(args) -> int:
    if args.n_list:
        n_list = [int(item) for item in args.n_list.split(",")]
    else:
        n_list = _parse_n_range(args.n_range)
    results, fraction = stats.run_uniformity_check(
        args.algo, args.keys, n_list, alpha=args.alpha, seed=args.seed,
        kernel=_kernel(args))
    if args.per_n:
        for n, result in results:
            kind = "skip" if n == 1 else ("g" if args.keys >= 100 * n else "ks")
            print(f"n={n} test={kind} statistic={result.statistic:.9g} "
                  f"p={result.p_value:.9g} rejected={int(result.rejected)}")
    status = "pass" if fraction <= args.threshold else "fail"
    print(f"check=uniformity algo={args.algo} keys={args.keys} "
          f"tests={len(results)} rejection_fraction={fraction:.9g} "
          f"alpha={args.alpha:g} threshold={args.threshold:g} status={status}")
    return 0 if status == "pass" else 1


def cmd_bench(args) -> int:
    algos = args.algos.split(",") if args.algos else list(hashers.ALGORITHMS)
    if args.n_list:
        n_list = [int(item) for item in args.n_list.split(",")]
    else:
        n_list = bench.default_n_list()
    rows = bench.run(algos, n_list, args.keys, kernel=_kernel(args), seed=args.seed)
    lines = bench.csv_lines(rows)
    if args.out:
        with open(args.out, "w", encoding="ascii") as handle:
            handle.write("\n".join(lines) + "\n")
    else:
        print("\n".join(lines))
    return 0


def cmd_golden(args) -> int:
    if args.write:
        count = golden.write_file(args.path, kernel=_kernel(args))
        print(f"wrote {count} records to {args.path}")
        return 0
    mismatches = golden.verify_file(args.path, kernel=_kernel(args))
    if mismatches:
        for mismatch in mismatches:
            print(mismatch)
        print(f"golden verification failed: {len(mismatches)} mismatch(es)")
        return 1
    print("golden verification passed")
    return 0


def _add_backend_flag(parser) -> None:
    parser.add_argument("--backend", choices=("auto", "compiled", "pure"),
                        default="auto",
                        help="kernel to run (default: compiled when built)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jumpback",
        description="Consistent key-to-bucket mapping and its verification suite.")
    sub = parser.add_subparsers(dest="command", required=True)
    algo_kwargs = dict(required=True, choices=hashers.ALGORITHMS,
                       help="algorithm name")

    p = sub.add_parser("map", help="map one key to a bucket")
    p.add_argument("--algo", **algo_kwargs)
    p.add_argument("--key", required=True, help="decimal or 0x-hex 64-bit key")
    p.add_argument("--n", required=True, type=int, help="number of buckets")
    p.add_argument("--count", action="store_true",
                   help="also print consumed generator outputs")
    _add_backend_flag(p)
    p.set_defaults(func=cmd_map)

    p = sub.add_parser("scan", help="print the assignment trajectory of a key")
    p.add_argument("--algo", **algo_kwargs)
    p.add_argument("--key", required=True)
    p.add_argument("--n-max", required=True, type=int)
    _add_backend_flag(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("consumption",
                       help="measure consumed outputs per call against theory")
    p.add_argument("--algo", **algo_kwargs)
    p.add_argument("--n-spec", required=True,
                   help="list:<ints> or geom:<n0>:<factor>")
    p.add_argument("--keys", type=int, default=100000)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--out", help="CSV path (default: stdout)")
    _add_backend_flag(p)
    p.set_defaults(func=cmd_consumption)

    p = sub.add_parser("check-monotonicity",
                       help="sweep n for random keys and count violations")
    p.add_argument("--algo", **algo_kwargs)
    p.add_argument("--runs", type=int, default=1000)
    p.add_argument("--n-max", type=int, default=2000)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    _add_backend_flag(p)
    p.set_defaults(func=cmd_check_monotonicity)

    p = sub.add_parser("check-uniformity",
                       help="goodness-of-fit of bucket distributions")
    p.add_argument("--algo", **algo_kwargs)
    p.add_argument("--keys", type=int, default=100000)
    p.add_argument("--n-range", default="2:100", help="<lo>:<hi> inclusive")
    p.add_argument("--n-list", help="comma separated n values (overrides range)")
    p.add_argument("--alpha", type=float, default=0.001)
    p.add_argument("--threshold", type=float, default=0.02,
                   help="max acceptable rejection fraction")
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--per-n", action="store_true", help="print one line per n")
    _add_backend_flag(p)
    p.set_defaults(func=cmd_check_uniformity)

    p = sub.add_parser("bench", help="ns/op and mean consumed outputs")
    p.add_argument("--algos", help="comma separated names (default: all)")
    p.add_argument("--n-list", help="comma separated n values "
                                    "(default: octave best/worst grid)")
    p.add_argument("--keys", type=int, default=100000)
    p.add_argument("--seed", type=lambda s: int(s, 0), default=0)
    p.add_argument("--out", help="CSV path (default: stdout)")
    _add_backend_flag(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("golden", help="write or verify golden vectors")
    p.add_argument("path")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--write", action="store_true")
    mode.add_argument("--verify", action="store_true")
    _add_backend_flag(p)
    p.set_defaults(func=cmd_golden)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
