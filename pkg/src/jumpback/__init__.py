"""Consistent key-to-bucket mapping with exact consumption accounting.

``assign`` is the drop-in mapping entry point; the ``hashers`` module
holds the readable reference implementations, ``stats`` the consumption
theory and statistical checks, ``oracle`` the brute-force ground truth,
and the ``jumpback`` CLI ties them together. A compiled kernel carries
the hot loops when built, with a bit-identical pure-Python fallback.
"""

from ._backend import available_backends, backend_name, get_kernel
from .hashers import (
    ALGORITHMS,
    CONSISTENT_ALGORITHMS,
    MAX_BUCKETS,
    EvaluationTrace,
    algo_id,
    evaluate,
    evaluate_counted,
    evaluate_traced,
    icws_hash,
    jump_back_hash,
    jump_back_hash_packed,
    jump_hash,
    jumping_backwards,
    jumping_backwards_improved,
    modulo_hash,
    random_hash,
)

__version__ = "0.1.0"

__all__ = [
    "ALGORITHMS",
    "CONSISTENT_ALGORITHMS",
    "MAX_BUCKETS",
    "EvaluationTrace",
    "algo_id",
    "assign",
    "available_backends",
    "backend_name",
    "evaluate",
    "evaluate_counted",
    "evaluate_traced",
    "get_kernel",
    "icws_hash",
    "jump_back_hash",
    "jump_back_hash_packed",
    "jump_hash",
    "jumping_backwards",
    "jumping_backwards_improved",
    "modulo_hash",
    "random_hash",
]


def assign(key: int, n: int, algo: str = "jumpbackhash-packed") -> int:
    """Map a 64-bit key to a bucket in [0, n) on the fast kernel path."""
    return get_kernel().eval_bucket(algo_id(algo), key, n)
