"""Golden-vector records pinning bit-exact determinism of every algorithm.

A record is one line ``algo,key_hex,n,bucket,invocations`` with the key as
0x-prefixed 16-digit hex and everything else decimal. The built-in matrix
spans all algorithms over a fixed key/bucket-count grid; regenerating it
must reproduce the file byte for byte on any platform.
"""

from __future__ import annotations

from . import _backend, hashers

GOLDEN_KEYS = (
    0x1,
    42,
    0x0123456789ABCDEF,
    0xDEADBEEFCAFEBABE,
    0xFFFFFFFFFFFFFFFF,
)

GOLDEN_BUCKET_COUNTS = (1, 2, 5, 100, 1000, 1 << 20, (1 << 31) - 1)


def compute_records(kernel=None) -> list[tuple[str, int, int, int, int]]:
    """(algo, key, n, bucket, invocations) for the built-in matrix."""
    kernel = kernel if kernel is not None else _backend.kernel
    records = []
    for algo in hashers.ALGORITHMS:
        aid = hashers.algo_id(algo)
        for key in GOLDEN_KEYS:
            for n in GOLDEN_BUCKET_COUNTS:
                bucket, invocations = kernel.eval_counted(aid, key, n)
                records.append((algo, key, n, int(bucket), int(invocations)))
    return records


def format_record(algo: str, key: int, n: int, bucket: int, invocations: int) -> str:
    return f"{algo},0x{key:016X},{n},{bucket},{invocations}"


def render(records) -> str:
    return "\n".join(format_record(*record) for record in records) + "\n"


def write_file(path, kernel=None) -> int:
    """Write the built-in matrix; returns the number of records."""
    records = compute_records(kernel)
    with open(path, "w", encoding="ascii") as handle:
        handle.write(render(records))
    return len(records)


def parse_line(line: str) -> tuple[str, int, int, int, int]:
    algo, key_hex, n, bucket, invocations = line.strip().split(",")
    return algo, int(key_hex, 16), int(n), int(bucket), int(invocations)


def verify_file(path, kernel=None) -> list[str]:
    """Recompute every record in the file; returns mismatch descriptions."""
    kernel = kernel if kernel is not None else _backend.kernel
    mismatches = []
    with open(path, "r", encoding="ascii") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                algo, key, n, bucket, invocations = parse_line(line)
                aid = hashers.algo_id(algo)
            except ValueError as exc:
                mismatches.append(f"line {line_number}: unparseable record ({exc})")
                continue
            got_bucket, got_invocations = kernel.eval_counted(aid, key, n)
            if (got_bucket, got_invocations) != (bucket, invocations):
                mismatches.append(
                    f"line {line_number}: {algo} key=0x{key:016X} n={n}: "
                    f"recorded bucket={bucket} invocations={invocations}, "
                    f"recomputed bucket={got_bucket} invocations={got_invocations}")
    return mismatches
