"""Key-to-bucket mapping algorithms behind one uniform interface.

Every algorithm maps a 64-bit key to a bucket index in [0, n) by seeding
a fresh SplitMix64 generator with the key, so each call is a pure function
of (key, n) and safe for unlimited concurrent callers.

The consistent algorithms (everything except ``modulo`` and ``random``)
guarantee that growing n by one either keeps a key where it is or moves it
to the newly added bucket n. The jump-back family generates the chain of
candidate indices in descending order over power-of-two octaves, which is
what makes its expected work constant in n.

These are the readable reference implementations; the compiled kernel in
``jumpback._speedups`` reproduces them bit for bit for bulk experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import prg

MASK32 = (1 << 32) - 1

#: Largest supported bucket count (fits a positive signed 32-bit integer).
MAX_BUCKETS = (1 << 31) - 1

# Bucket indices live in [0, 2^32): 32 power-of-two octaves, and the
# descending generation of candidate indices starts at 2^32.
_NUM_INTERVALS = 32
_DESCENT_START = 1 << 32

ALGORITHMS = (
    "modulo",
    "random",
    "icws",
    "jumphash",
    "jumpingbackwards",
    "jumpingbackwards-opt1",
    "jumpingbackwards-opt2",
    "jumpbackhash",
    "jumpbackhash-packed",
)

#: Algorithms that are both uniform and monotone.
CONSISTENT_ALGORITHMS = ALGORITHMS[2:]


def algo_id(name: str) -> int:
    """Stable integer id of an algorithm name (kernel dispatch order)."""
    try:
        return ALGORITHMS.index(name)
    except ValueError:
        raise ValueError(f"unknown algorithm {name!r}") from None


def _check_key(key: int) -> None:
    if not 0 <= key <= prg.MASK64:
        raise ValueError("key must be an unsigned 64-bit integer")


def _check_n(n: int) -> None:
    if not 1 <= n <= MAX_BUCKETS:
        raise ValueError(f"bucket count must be in [1, {MAX_BUCKETS}]")


@dataclass
class EvaluationTrace:
    """Intermediate values recorded by ``evaluate_traced``.

    Which fields are populated depends on the algorithm: the jump-back
    family fills ``x0``/``x1``/``u_bits`` and the candidate bookkeeping,
    ``icws`` fills the two variates, the jump/descent algorithms record
    their visited indices in ``z_list``. ``m_list`` holds the processed
    octave indices in strictly decreasing order; ``y`` and ``c`` belong to
    the most recently processed octave.
    """

    x0: int | None = None
    x1: int | None = None
    u_bits: int | None = None
    m_list: list[int] = field(default_factory=list)
    c: int | None = None
    y: int | None = None
    z_list: list[int] = field(default_factory=list)
    unit_uniform: float | None = None
    gamma: float | None = None
    invocations: int = 0


# --- algorithm cores -----------------------------------------------------
#
# Uniform signature (key, n, gen, trace) -> bucket. Callers validate key
# and n; cores may assume 1 <= n <= MAX_BUCKETS.

def _modulo_core(key, n, gen, trace):
    return key % n


def _random_core(key, n, gen, trace):
    # One output scaled into [0, n) via the high word of a 128-bit product.
    return (gen.next_u64() * n) >> 64


def _icws_core(key, n, gen, trace):
    u = prg.next_unit(gen)
    g = prg.next_exponential(gen) + prg.next_exponential(gen)
    if trace is not None:
        trace.unit_uniform = u
        trace.gamma = g
    if g == 0.0:
        return n - 1
    try:
        t = math.exp(g * (math.floor(math.log(n) / g + u) - u))
    except OverflowError:
        return n - 1
    # Truncation guards against numerical error pushing past n - 1.
    if not math.isfinite(t) or t >= n:
        return n - 1
    return math.floor(t)


def _jump_hash_core(key, n, gen, trace):
    b = -1
    candidate = 0
    while candidate < n:
        b = candidate
        if trace is not None:
            trace.z_list.append(b)
        u = prg.next_unit(gen)
        if u == 0.0:
            # floor((b + 1) / 0) acts as +inf: no further index below n.
            break
        candidate = math.floor((b + 1) / u)
    return b


def _jumping_backwards_core(key, n, gen, trace):
    b = _DESCENT_START
    while True:
        b = prg.next_bounded(gen, b)
        if trace is not None:
            trace.z_list.append(b)
        if b < n:
            return b


def _jb_improved_core(key, n, gen, trace, option):
    u_bits = 0
    for m in range(_NUM_INTERVALS - 1, -1, -1):
        if prg.next_bounded(gen, 2) == 0:
            continue
        u_bits |= 1 << m
        width = 1 << m
        b = width + prg.next_bounded(gen, width)
        if trace is not None:
            trace.u_bits = u_bits
            trace.m_list.append(m)
            trace.y = b
        while True:
            if b < n:
                return b
            if option == 1:
                z = prg.next_bounded(gen, b)
            else:
                z = prg.next_bounded(gen, width << 1)
            b = z
            if trace is not None:
                trace.z_list.append(b)
            if b < width:
                break
    return 0


def _jump_back_hash_core(key, n, gen, trace):
    if n == 1:
        return 0
    x0 = gen.next_u64() & MASK32
    x1 = gen.next_u64() & MASK32
    m0 = (n - 1).bit_length()
    u = (x0 ^ x1) & ((1 << m0) - 1)
    if trace is not None:
        trace.x0, trace.x1, trace.u_bits = x0, x1, u
    while u != 0:
        m = u.bit_length() - 1
        c = u.bit_count() & 1
        width = 1 << m
        b = width + ((x1 if c else x0) & (width - 1))
        if trace is not None:
            trace.m_list.append(m)
            trace.c = c
            trace.y = b
            # A second processed octave lies fully below n, so its first
            # candidate is returned immediately: never more than two.
            assert len(trace.m_list) <= 2
        while True:
            if b < n:
                return b
            b = gen.next_u64() & MASK32 & (2 * width - 1)
            if trace is not None:
                trace.z_list.append(b)
            if b < width:
                break
        u ^= width
    return 0


def _jump_back_hash_packed_core(key, n, gen, trace):
    if n == 1:
        return 0
    v = gen.next_u64()
    x0 = v & MASK32
    x1 = v >> 32
    m0 = (n - 1).bit_length()
    u = (x0 ^ x1) & ((1 << m0) - 1)
    if trace is not None:
        trace.x0, trace.x1, trace.u_bits = x0, x1, u
    while u != 0:
        m = u.bit_length() - 1
        c = u.bit_count() & 1
        width = 1 << m
        mask2 = 2 * width - 1
        b = width + ((x1 if c else x0) & (width - 1))
        if trace is not None:
            trace.m_list.append(m)
            trace.c = c
            trace.y = b
            assert len(trace.m_list) <= 2
        while True:
            if b < n:
                return b
            w = gen.next_u64()
            b = (w & MASK32) & mask2
            if trace is not None:
                trace.z_list.append(b)
            if b < width:
                break
            if b < n:
                return b
            b = (w >> 32) & mask2
            if trace is not None:
                trace.z_list.append(b)
            if b < width:
                break
        u ^= width
    return 0


def _jb_improved_opt1(key, n, gen, trace):
    return _jb_improved_core(key, n, gen, trace, 1)


def _jb_improved_opt2(key, n, gen, trace):
    return _jb_improved_core(key, n, gen, trace, 2)


_CORES = {
    "modulo": _modulo_core,
    "random": _random_core,
    "icws": _icws_core,
    "jumphash": _jump_hash_core,
    "jumpingbackwards": _jumping_backwards_core,
    "jumpingbackwards-opt1": _jb_improved_opt1,
    "jumpingbackwards-opt2": _jb_improved_opt2,
    "jumpbackhash": _jump_back_hash_core,
    "jumpbackhash-packed": _jump_back_hash_packed_core,
}


# --- public per-algorithm functions --------------------------------------

def modulo_hash(key: int, n: int) -> int:
    """key mod n. Uniform for hash-quality keys but not monotone."""
    _check_key(key)
    _check_n(n)
    return key % n


def random_hash(key: int, n: int) -> int:
    """Pseudorandom assignment floor(v * n / 2^64). Uniform, not monotone."""
    _check_key(key)
    _check_n(n)
    return _random_core(key, n, prg.SplitMix64(key), None)


def icws_hash(key: int, n: int) -> int:
    """Consistent hash via sampling with one integer weight n.

    Draws u ~ U[0,1) and g ~ Gamma(2,1) and evaluates
    min(floor(exp(g * (floor(ln(n)/g + u) - u))), n - 1); always consumes
    exactly three generator outputs.
    """
    _check_key(key)
    _check_n(n)
    return _icws_core(key, n, prg.SplitMix64(key), None)


def jump_hash(key: int, n: int) -> int:
    """Jump consistent hash: walks candidate indices upward until >= n.

    Expected number of unit draws is the harmonic sum H(n), i.e. the
    runtime grows logarithmically with n.
    """
    _check_key(key)
    _check_n(n)
    return _jump_hash_core(key, n, prg.SplitMix64(key), None)


def jumping_backwards(key: int, n: int) -> int:
    """Descending candidate walk from 2^32 down to the first index < n.

    Structurally the simplest descending construction; needs about
    ln(2^32 / n) bounded draws, so it is slow when n is small.
    """
    _check_key(key)
    _check_n(n)
    return _jumping_backwards_core(key, n, prg.SplitMix64(key), None)


def jumping_backwards_improved(key: int, n: int, option: int) -> int:
    """Octave-based descending walk (the stepping stone to jump-back hash).

    Processes octaves [2^m, 2^(m+1)) from the top down; a random bit
    decides whether an octave holds a candidate. Inside an octave the next
    candidate is drawn from [0, current) when ``option`` is 1, or from the
    enclosing power-of-two interval when ``option`` is 2.
    """
    if option not in (1, 2):
        raise ValueError("option must be 1 or 2")
    _check_key(key)
    _check_n(n)
    return _jb_improved_core(key, n, prg.SplitMix64(key), None, option)


def jump_back_hash(key: int, n: int) -> int:
    """Jump-back hash: expected constant time, integer-only.

    Two 32-bit values (one generator output each, high halves discarded)
    seed the octave bit vector and the candidates; at most one octave ever
    needs extra draws. Expected outputs consumed: 1 + rho(n) < 3.
    """
    _check_key(key)
    _check_n(n)
    return _jump_back_hash_core(key, n, prg.SplitMix64(key), None)


def jump_back_hash_packed(key: int, n: int) -> int:
    """Jump-back hash, packed: splits each 64-bit output into two halves.

    Same construction as ``jump_back_hash`` but the first output provides
    both 32-bit values and every inner-loop output provides two candidate
    values, so at most 5/3 outputs are consumed on average.
    """
    _check_key(key)
    _check_n(n)
    return _jump_back_hash_packed_core(key, n, prg.SplitMix64(key), None)


# --- uniform entry points -------------------------------------------------

def evaluate(algo: str, key: int, n: int) -> int:
    """Map key -> bucket with the named algorithm."""
    core = _CORES.get(algo)
    if core is None:
        raise ValueError(f"unknown algorithm {algo!r}")
    _check_key(key)
    _check_n(n)
    return core(key, n, prg.SplitMix64(key), None)


def evaluate_counted(algo: str, key: int, n: int) -> tuple[int, int]:
    """Map key -> bucket and report consumed 64-bit generator outputs."""
    core = _CORES.get(algo)
    if core is None:
        raise ValueError(f"unknown algorithm {algo!r}")
    _check_key(key)
    _check_n(n)
    gen = prg.CountingGenerator.from_seed(key)
    bucket = core(key, n, gen, None)
    return bucket, gen.invocations


def evaluate_traced(algo: str, key: int, n: int) -> tuple[int, EvaluationTrace]:
    """Map key -> bucket and record the algorithm's intermediate values.

    The bucket is identical to the untraced call; the trace is a fresh
    per-call value and never shared.
    """
    core = _CORES.get(algo)
    if core is None:
        raise ValueError(f"unknown algorithm {algo!r}")
    _check_key(key)
    _check_n(n)
    gen = prg.CountingGenerator.from_seed(key)
    trace = EvaluationTrace()
    bucket = core(key, n, gen, trace)
    trace.invocations = gen.invocations
    return bucket, trace
