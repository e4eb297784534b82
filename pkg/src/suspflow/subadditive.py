"""Sub-additive sequences and the triangular-index averaging inequality.

For a sub-additive ``(b_n)`` and ``1 <= k <= n``::

    n (b_1 + ... + b_{n-1}) + k b_n  >=  n b_s,   s = n(n-1)/2 + k.

Sequences are 1-indexed in the mathematical sense and stored as Python
sequences with ``b_n = values[n-1]``.
"""

from __future__ import annotations

from numbers import Rational
from typing import Optional, Sequence

import numpy as np

REL_TOL = 1e-12


def _exact(values) -> bool:
    return all(isinstance(v, (int, Rational)) and not isinstance(v, bool) for v in values)


def check_subadditive(values: Sequence[float], rel_tol: float = REL_TOL) -> tuple[bool, Optional[tuple]]:
    """Exhaustive check of ``b_{i+j} <= b_i + b_j``.

    Returns ``(True, None)`` or ``(False, (i, j))`` for the first violation
    in lexicographic order. Integer and rational sequences are compared
    exactly.
    """
    b = list(values)
    exact = _exact(b)
    N = len(b)
    for i in range(1, N + 1):
        for j in range(i, N - i + 1):
            lhs, rhs = b[i + j - 1], b[i - 1] + b[j - 1]
            if exact:
                ok = lhs <= rhs
            else:
                ok = lhs <= rhs + rel_tol * max(1.0, abs(rhs))
            if not ok:
                return False, (i, j)
    return True, None


class SubadditiveSeq(tuple):
    """Tuple of values verified sub-additive on construction."""

    def __new__(cls, values):
        obj = super().__new__(cls, values)
        ok, witness = check_subadditive(obj)
        if not ok:
            raise ValueError(f"sequence is not sub-additive at (i, j) = {witness}")
        return obj

    def b(self, n: int):
        return self[n - 1]


def lemma_inequality(values: Sequence[float], n: int, k: int,
                     rel_tol: float = REL_TOL) -> tuple[float, float, bool]:
    """Both sides of the inequality and whether it holds.

    ``lhs = n (b_1 + ... + b_{n-1}) + k b_n`` and ``rhs = n b_s``.
    """
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    s = n * (n - 1) // 2 + k
    if s > len(values):
        raise IndexError(f"index s = {s} beyond sequence of length {len(values)}")
    b = values
    lhs = n * sum(b[: n - 1]) + k * b[n - 1]
    rhs = n * b[s - 1]
    if _exact(b):
        return lhs, rhs, lhs >= rhs
    return lhs, rhs, lhs >= rhs - rel_tol * max(1.0, abs(lhs))


def valid_pairs(length: int):
    """All ``(n, k)`` whose index ``s`` fits in a sequence of ``length`` terms."""
    n = 1
    while n * (n - 1) // 2 + 1 <= length:
        for k in range(1, n + 1):
            if n * (n - 1) // 2 + k <= length:
                yield n, k
        n += 1


def random_subadditive(N: int, seed: int, exact: bool = False) -> SubadditiveSeq:
    """Deterministic random sub-additive sequence of length ``N``.

    ``b_1 = c_1`` and ``b_n = min(c_n + n c_1, min_{i<n} (b_i + b_{n-i}))``
    for random positive ``c_n``. With ``exact`` the draws are small
    integers and the result is compared in exact arithmetic.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    rng = np.random.default_rng(seed)
    if exact:
        c = [int(x) for x in rng.integers(1, 20, size=N)]
    else:
        c = list(rng.exponential(1.0, size=N) + 1e-3)
    b = [c[0]]
    for n in range(2, N + 1):
        best = c[n - 1] + n * c[0]
        for i in range(1, n):
            best = min(best, b[i - 1] + b[n - i - 1])
        b.append(best)
    return SubadditiveSeq(b)
