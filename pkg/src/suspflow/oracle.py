"""Brute-force enumerations used to cross-check the recursions.

Everything here enumerates words explicitly and evaluates ``g`` pointwise
at every shift, so the cost is exponential in the word length.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .roof import RoofSpec
from .sft import Sft

#: Refuse enumerations larger than this many words.
MAX_WORDS = 2_000_000


def ambient_words(B, n: int) -> np.ndarray:
    """All words of length ``n`` admissible for the 0/1 matrix ``B``, one per row."""
    B = np.asarray(B)
    d = B.shape[0]
    words = np.arange(d, dtype=np.int64)[:, None]
    for _ in range(n - 1):
        last = words[:, -1]
        rows, succ = np.nonzero(B[last])
        words = np.concatenate([words[rows], succ[:, None]], axis=1)
        if len(words) > MAX_WORDS:
            raise ValueError(f"more than {MAX_WORDS} words; enumeration refused")
    return words


def point_birkhoff_sums(spec: RoofSpec, W: np.ndarray, n: int, last_violates: np.ndarray) -> np.ndarray:
    """``S_n g`` at the points ``W[k]`` followed by a tail inside ``Y``.

    Each of the first ``n`` terms is ``-a`` of the distance to the next
    violation in the row, or ``-h(Y)`` if there is none; ``last_violates``
    marks rows whose final symbol leaves ``Y`` whatever follows.
    """
    N, width = W.shape
    if n > width:
        raise ValueError("n exceeds the word width")
    return _terms(spec, W, last_violates)[:, :n].sum(axis=1)


def _terms(spec: RoofSpec, W: np.ndarray, last_violates: np.ndarray) -> np.ndarray:
    N, n = W.shape
    A = np.asarray(spec.target)
    viol = np.zeros((N, n), dtype=bool)
    if n > 1:
        viol[:, :-1] = A[W[:, :-1], W[:, 1:]] == 0
    viol[:, -1] = last_violates
    nxt = np.full((N, n), -1, dtype=np.int64)
    run = np.full(N, -1, dtype=np.int64)
    for i in range(n - 1, -1, -1):
        run = np.where(viol[:, i], i, run)
        nxt[:, i] = run
    a = np.concatenate(([np.nan], np.asarray(spec.aj.values)))
    pos = np.arange(n)[None, :]
    return np.where(nxt >= 0, -a[np.clip(nxt - pos + 1, 0, None)], -spec.h_y)


def _sup_values(spec: RoofSpec, W: np.ndarray, last_violates: np.ndarray) -> np.ndarray:
    """``S_n g`` at the maximising point of each cylinder."""
    return _terms(spec, W, last_violates).sum(axis=1)


def _lse(x: np.ndarray) -> float:
    if x.size == 0:
        return -np.inf
    m = x.max()
    return float(m + np.log(np.sum(np.exp(x - m))))


def brute_log_partition_sum(spec: RoofSpec, n: int, scale: float = 1.0) -> float:
    W = ambient_words(spec.ambient, n)
    dead = ~np.asarray(spec.target).any(axis=1)
    return _lse(scale * _sup_values(spec, W, dead[W[:, -1]]))


def brute_log_q(spec: RoofSpec, r: int, scale: float = 1.0, beta=None) -> float:
    """``log Q(r)`` summing over ambient words that end in ``A_0``, extended by ``beta``."""
    beta = spec.beta if beta is None else beta
    if not beta:
        return -np.inf
    W = ambient_words(spec.ambient, r)
    W = W[np.isin(W[:, -1], list(beta))]
    A = np.asarray(spec.target)
    nxt = np.array([beta[int(s)] for s in W[:, -1]], dtype=np.int64)
    last_violates = A[W[:, -1], nxt] == 0
    if not last_violates.all():
        raise ValueError("beta does not leave the target")
    return _lse(scale * _sup_values(spec, W, last_violates))


def brute_language_count(sft: Sft, n: int) -> int:
    """``|L_n|`` by enumerating words and searching for long admissible extensions.

    A word extends forever iff it extends by ``d**M`` more symbols (pigeonhole
    on the last ``M`` symbols).
    """
    d, M = sft.alphabet_size, sft.step
    depth = d ** M

    @lru_cache(maxsize=None)
    def extends(tail: tuple, k: int) -> bool:
        if k == 0:
            return True
        for s in range(d):
            if tail + (s,) not in sft.forbidden and extends((tail + (s,))[1:], k - 1):
                return True
        return False

    count = 0
    for w in itertools.product(range(d), repeat=n):
        if not sft.is_allowed(w):
            continue
        if len(w) >= M:
            ok = extends(w[len(w) - M:], depth)
        else:
            ok = any(sft.is_allowed(w + u) and extends((w + u)[-M:], depth)
                     for u in itertools.product(range(d), repeat=M - len(w)))
        count += ok
    return count
