# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernel: per-call evaluation plus the batch experiment loops.

Mirrors ``jumpback._native`` bit for bit. The per-key loops run without
the GIL, which is what makes million-key experiments take seconds.
"""

from libc.stdint cimport int64_t, uint32_t, uint64_t
from libc.math cimport exp, floor, isfinite, log

import numpy as np

BACKEND = "compiled"
ALGO_NAMES = (
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

cdef extern from *:
    """
    #include <stdint.h>
    static inline uint64_t jb_mulhi64(uint64_t a, uint64_t b, uint64_t *lo) {
        __uint128_t p = (__uint128_t)a * (__uint128_t)b;
        *lo = (uint64_t)p;
        return (uint64_t)(p >> 64);
    }
    static inline int jb_log2_u32(uint32_t x) { return 31 - __builtin_clz(x); }
    static inline int jb_popcount_u32(uint32_t x) { return __builtin_popcount(x); }
    """
    uint64_t jb_mulhi64(uint64_t a, uint64_t b, uint64_t *lo) nogil
    int jb_log2_u32(uint32_t x) nogil
    int jb_popcount_u32(uint32_t x) nogil

cdef int64_t _MAX_BUCKETS = (<int64_t>1 << 31) - 1
cdef uint64_t _MASK64 = <uint64_t>0xFFFFFFFFFFFFFFFF


ctypedef struct Gen:
    uint64_t state
    int64_t count


cdef inline uint64_t _next_u64(Gen *g) nogil:
    cdef uint64_t z
    g.state = g.state + <uint64_t>0x9E3779B97F4A7C15
    z = g.state
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    g.count += 1
    return z ^ (z >> 31)


cdef inline double _unit(Gen *g) nogil:
    # 53 high bits scaled by 2^-53; exact in double precision.
    return <double>(_next_u64(g) >> 11) * (1.0 / 9007199254740992.0)


cdef inline double _exponential(Gen *g) nogil:
    return -log(1.0 - _unit(g))


cdef inline uint64_t _bounded(Gen *g, uint64_t bound) nogil:
    # Unbiased sample from [0, bound): mask for powers of two, otherwise
    # the high word of a 128-bit product with rejection of the biased
    # low fraction.
    cdef uint64_t lo, hi, threshold
    if bound == 1:
        return 0
    if (bound & (bound - 1)) == 0:
        return _next_u64(g) & (bound - 1)
    hi = jb_mulhi64(_next_u64(g), bound, &lo)
    if lo < bound:
        threshold = (<uint64_t>0 - bound) % bound
        while lo < threshold:
            hi = jb_mulhi64(_next_u64(g), bound, &lo)
    return hi


cdef int64_t _random_assign(Gen *g, int64_t n) nogil:
    cdef uint64_t lo
    return <int64_t>jb_mulhi64(_next_u64(g), <uint64_t>n, &lo)


cdef int64_t _icws(Gen *g, int64_t n) nogil:
    cdef double u = _unit(g)
    cdef double gam = _exponential(g) + _exponential(g)
    cdef double t
    if gam == 0.0:
        return n - 1
    t = exp(gam * (floor(log(<double>n) / gam + u) - u))
    if not isfinite(t) or t >= <double>n:
        return n - 1
    return <int64_t>floor(t)


cdef int64_t _jump_hash(Gen *g, int64_t n) nogil:
    cdef int64_t b = -1
    cdef double candidate = 0.0
    cdef double u
    while candidate < <double>n:
        b = <int64_t>candidate
        u = _unit(g)
        if u == 0.0:
            break
        candidate = floor((<double>(b + 1)) / u)
    return b


cdef int64_t _jumping_backwards(Gen *g, int64_t n) nogil:
    cdef uint64_t b = <uint64_t>1 << 32
    while True:
        b = _bounded(g, b)
        if b < <uint64_t>n:
            return <int64_t>b


cdef int64_t _jb_improved(Gen *g, int64_t n, int option) nogil:
    cdef int m
    cdef uint64_t width, b
    for m in range(31, -1, -1):
        if _bounded(g, 2) == 0:
            continue
        width = <uint64_t>1 << m
        b = width + _bounded(g, width)
        while True:
            if b < <uint64_t>n:
                return <int64_t>b
            if option == 1:
                b = _bounded(g, b)
            else:
                b = _bounded(g, width << 1)
            if b < width:
                break
    return 0


cdef int64_t _jump_back_hash(Gen *g, int64_t n) nogil:
    cdef uint32_t x0 = <uint32_t>_next_u64(g)
    cdef uint32_t x1 = <uint32_t>_next_u64(g)
    cdef int m0 = jb_log2_u32(<uint32_t>(n - 1)) + 1
    cdef uint32_t u = (x0 ^ x1) & <uint32_t>((<uint64_t>1 << m0) - 1)
    cdef uint32_t width, mask2, b
    while u != 0:
        width = <uint32_t>1 << jb_log2_u32(u)
        mask2 = (width << 1) - 1
        b = width + ((x1 if (jb_popcount_u32(u) & 1) else x0) & (width - 1))
        while True:
            if b < <uint32_t>n:
                return <int64_t>b
            b = <uint32_t>_next_u64(g) & mask2
            if b < width:
                break
        u ^= width
    return 0


cdef int64_t _jump_back_hash_packed(Gen *g, int64_t n) nogil:
    cdef uint64_t v = _next_u64(g)
    cdef uint32_t x0 = <uint32_t>v
    cdef uint32_t x1 = <uint32_t>(v >> 32)
    cdef int m0 = jb_log2_u32(<uint32_t>(n - 1)) + 1
    cdef uint32_t u = (x0 ^ x1) & <uint32_t>((<uint64_t>1 << m0) - 1)
    cdef uint32_t width, mask2, b
    cdef uint64_t w
    while u != 0:
        width = <uint32_t>1 << jb_log2_u32(u)
        mask2 = (width << 1) - 1
        b = width + ((x1 if (jb_popcount_u32(u) & 1) else x0) & (width - 1))
        while True:
            if b < <uint32_t>n:
                return <int64_t>b
            w = _next_u64(g)
            b = <uint32_t>w & mask2
            if b < width:
                break
            if b < <uint32_t>n:
                return <int64_t>b
            b = <uint32_t>(w >> 32) & mask2
            if b < width:
                break
        u ^= width
    return 0


cdef int64_t _eval(int algo, uint64_t key, int64_t n, int64_t *count) nogil:
    cdef Gen g
    cdef int64_t b
    g.state = key
    g.count = 0
    if algo == 0:
        b = <int64_t>(key % <uint64_t>n)
    elif algo == 1:
        b = _random_assign(&g, n)
    elif algo == 2:
        b = _icws(&g, n)
    elif algo == 3:
        b = _jump_hash(&g, n)
    elif algo == 4:
        b = _jumping_backwards(&g, n)
    elif algo == 5:
        b = _jb_improved(&g, n, 1)
    elif algo == 6:
        b = _jb_improved(&g, n, 2)
    elif algo == 7:
        b = 0 if n <= 1 else _jump_back_hash(&g, n)
    else:
        b = 0 if n <= 1 else _jump_back_hash_packed(&g, n)
    count[0] = g.count
    return b


def _check_algo(int algo):
    if algo < 0 or algo >= len(ALGO_NAMES):
        raise ValueError(f"algorithm id out of range: {algo}")


def _check_key(key):
    if not 0 <= key <= 0xFFFFFFFFFFFFFFFF:
        raise ValueError("key must be an unsigned 64-bit integer")


def _check_n(n):
    if not 1 <= n <= _MAX_BUCKETS:
        raise ValueError(f"bucket count must be in [1, {_MAX_BUCKETS}]")


def eval_bucket(int algo, key, n):
    _check_algo(algo)
    _check_key(key)
    _check_n(n)
    cdef int64_t cnt
    return _eval(algo, <uint64_t>key, <int64_t>n, &cnt)


def eval_counted(int algo, key, n):
    _check_algo(algo)
    _check_key(key)
    _check_n(n)
    cdef int64_t cnt
    cdef int64_t b = _eval(algo, <uint64_t>key, <int64_t>n, &cnt)
    return b, cnt


def trajectory(int algo, key, n_max):
    """f(key, n) for n = 1..n_max as an int64 array (index n - 1)."""
    _check_algo(algo)
    _check_key(key)
    _check_n(n_max)
    out = np.empty(n_max, dtype=np.int64)
    cdef int64_t[::1] view = out
    cdef uint64_t k = <uint64_t>key
    cdef int64_t limit = <int64_t>n_max
    cdef int64_t n, cnt
    with nogil:
        for n in range(1, limit + 1):
            view[n - 1] = _eval(algo, k, n, &cnt)
    return out


def consumption_stats(int algo, n, num_keys, seed):
    """Welford mean and sample variance of consumed outputs over keys."""
    _check_algo(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    cdef Gen key_stream
    key_stream.state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    key_stream.count = 0
    cdef int64_t nn = <int64_t>n
    cdef int64_t total = <int64_t>num_keys
    cdef double mean = 0.0, m2 = 0.0, delta
    cdef int64_t i, cnt
    cdef uint64_t key
    with nogil:
        for i in range(total):
            key = _next_u64(&key_stream)
            _eval(algo, key, nn, &cnt)
            delta = <double>cnt - mean
            mean += delta / <double>(i + 1)
            m2 += delta * (<double>cnt - mean)
    if total > 1:
        return mean, m2 / <double>(total - 1)
    return mean, 0.0


def bucket_counts(int algo, n, num_keys, seed):
    """Histogram of buckets over num_keys pseudorandom keys."""
    _check_algo(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    counts = np.zeros(n, dtype=np.int64)
    cdef int64_t[::1] view = counts
    cdef Gen key_stream
    key_stream.state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    key_stream.count = 0
    cdef int64_t nn = <int64_t>n
    cdef int64_t total = <int64_t>num_keys
    cdef int64_t i, cnt
    cdef uint64_t key
    with nogil:
        for i in range(total):
            key = _next_u64(&key_stream)
            view[_eval(algo, key, nn, &cnt)] += 1
    return counts


def bucket_samples(int algo, n, num_keys, seed):
    """Bucket of each of num_keys pseudorandom keys, in stream order."""
    _check_algo(algo)
    _check_n(n)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    out = np.empty(num_keys, dtype=np.int64)
    cdef int64_t[::1] view = out
    cdef Gen key_stream
    key_stream.state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    key_stream.count = 0
    cdef int64_t nn = <int64_t>n
    cdef int64_t total = <int64_t>num_keys
    cdef int64_t i, cnt
    cdef uint64_t key
    with nogil:
        for i in range(total):
            key = _next_u64(&key_stream)
            view[i] = _eval(algo, key, nn, &cnt)
    return out


def monotonicity_violations(int algo, num_keys, n_max, seed):
    """Count transitions f(k, n) -> f(k, n+1) that land on neither value."""
    _check_algo(algo)
    _check_n(n_max)
    if num_keys < 0:
        raise ValueError("num_keys must be >= 0")
    cdef Gen key_stream
    key_stream.state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    key_stream.count = 0
    cdef int64_t limit = <int64_t>n_max
    cdef int64_t total = <int64_t>num_keys
    cdef int64_t violations = 0
    cdef int64_t i, n, prev, cur, cnt
    cdef uint64_t key
    with nogil:
        for i in range(total):
            key = _next_u64(&key_stream)
            prev = _eval(algo, key, 1, &cnt)
            for n in range(2, limit + 1):
                cur = _eval(algo, key, n, &cnt)
                if cur != prev and cur != n - 1:
                    violations += 1
                prev = cur
    return violations


def reassignment_count(int algo, n, num_keys, seed):
    """Number of keys with f(k, n) != f(k, n + 1)."""
    _check_algo(algo)
    _check_n(n)
    _check_n(n + 1)
    if num_keys < 1:
        raise ValueError("num_keys must be >= 1")
    cdef Gen key_stream
    key_stream.state = <uint64_t>(seed & 0xFFFFFFFFFFFFFFFF)
    key_stream.count = 0
    cdef int64_t nn = <int64_t>n
    cdef int64_t total = <int64_t>num_keys
    cdef int64_t changed = 0
    cdef int64_t i, cnt
    cdef uint64_t key
    with nogil:
        for i in range(total):
            key = _next_u64(&key_stream)
            if _eval(algo, key, nn, &cnt) != _eval(algo, key, nn + 1, &cnt):
                changed += 1
    return changed
