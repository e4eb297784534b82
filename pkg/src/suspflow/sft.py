"""Subshifts of finite type over a finite alphabet.

Symbols are the integers ``0..d-1``. A transition matrix is a square 0/1
``numpy`` array of dtype ``int8``; ``A[i, j] == 1`` means symbol ``j`` may
follow symbol ``i``. Symbols that do not occur in the shift keep all-zero
rows and columns, so every matrix lives on the full alphabet.

Shifts are one-sided throughout: a symbol with no predecessor still occurs
in the language (as a first symbol) as long as it has a successor.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

import numpy as np
from scipy.sparse.csgraph import connected_components

Word = tuple[int, ...]

#: Default residual tolerance and iteration cap for Perron power iteration.
POWER_TOL = 1e-13
POWER_MAX_ITER = 10**6
#: Counts are exact big integers up to this length, log-domain beyond it.
EXACT_COUNT_LIMIT = 300


class SftError(ValueError):
    """Malformed shift description."""


class EmptyShiftError(SftError):
    """The shift space contains no infinite admissible sequence."""


class ZeroEntropyError(SftError):
    """The shift has zero topological entropy."""


def as_transition_matrix(A) -> np.ndarray:
    """Validate and copy ``A`` into a read-only int8 0/1 matrix."""
    M = np.array(A)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise SftError(f"transition matrix must be square and nonempty, got shape {M.shape}")
    if not np.isin(M, (0, 1)).all():
        raise SftError("transition matrix entries must be 0 or 1")
    M = M.astype(np.int8)
    M.flags.writeable = False
    return M


def _check_word(word: Iterable[int], d: int) -> Word:
    w = tuple(int(s) for s in word)
    for s in w:
        if not 0 <= s < d:
            raise SftError(f"symbol {s} out of range for alphabet of size {d}")
    return w


def _contains(word: Word, sub: Word) -> bool:
    m = len(sub)
    return any(word[i:i + m] == sub for i in range(len(word) - m + 1))


@dataclass(frozen=True)
class Sft:
    """An ``step``-step SFT described by forbidden words of length ``step + 1``.

    Build instances with :meth:`from_forbidden_words` or :meth:`from_matrix`;
    both normalise the forbidden set to a uniform length.
    """

    alphabet_size: int
    step: int
    forbidden: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if self.alphabet_size < 1:
            raise SftError("alphabet must contain at least one symbol")
        if self.step < 1:
            raise SftError("step must be at least 1")
        for w in self.forbidden:
            if len(w) != self.step + 1:
                raise SftError(f"forbidden word {w} does not have length {self.step + 1}")
            _check_word(w, self.alphabet_size)

    @classmethod
    def from_forbidden_words(cls, alphabet_size: int, forbidden: Iterable[Sequence[int]]) -> "Sft":
        """Normalise a list of forbidden words to length ``M + 1``.

        ``M`` is the maximal forbidden length minus one (at least 1). A word of
        length ``M + 1`` is forbidden iff it contains one of the given words.
        """
        if alphabet_size < 1:
            raise SftError("alphabet must contain at least one symbol")
        words = [_check_word(w, alphabet_size) for w in forbidden]
        if any(len(w) == 0 for w in words):
            raise SftError("forbidden words must be nonempty")
        step = max([1] + [len(w) - 1 for w in words])
        if all(len(w) == step + 1 for w in words):
            return cls(alphabet_size, step, frozenset(words))
        padded = frozenset(
            u for u in itertools.product(range(alphabet_size), repeat=step + 1)
            if any(_contains(u, w) for w in words)
        )
        return cls(alphabet_size, step, padded)

    @classmethod
    def from_matrix(cls, A) -> "Sft":
        A = as_transition_matrix(A)
        zeros = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(A == 0)))
        return cls(A.shape[0], 1, zeros)

    def is_allowed(self, word: Sequence[int]) -> bool:
        """True when ``word`` contains no forbidden block (extendability not checked)."""
        m = self.step + 1
        w = tuple(word)
        return all(w[i:i + m] not in self.forbidden for i in range(len(w) - m + 1))


def to_matrix(sft: Sft) -> np.ndarray:
    """Transition matrix of a 1-step SFT (not essentialised)."""
    if sft.step != 1:
        raise SftError(f"to_matrix needs a 1-step SFT, got step {sft.step}; recode first")
    d = sft.alphabet_size
    A = np.ones((d, d), dtype=np.int8)
    for i, j in sft.forbidden:
        A[i, j] = 0
    A.flags.writeable = False
    return A


def essentialize(A) -> np.ndarray:
    """Iteratively delete edges into symbols without successors.

    The result describes the same one-sided shift and satisfies
    ``A[i, j] == 1  =>  A[j].any()``. An all-zero result means the shift is
    empty.
    """
    M = np.array(as_transition_matrix(A))
    while True:
        live = M.any(axis=1)
        pruned = M * live[None, :].astype(np.int8)
        if np.array_equal(pruned, M):
            break
        M = pruned
    M.flags.writeable = False
    return M


def live_symbols(A) -> np.ndarray:
    """Boolean mask of symbols occurring in the shift of an essential matrix."""
    return np.asarray(A).any(axis=1)


# ---------------------------------------------------------------------------
# word counting
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LanguageTable:
    """Sizes of the languages ``L_n`` for ``n = 1..n_max``.

    ``counts`` holds exact integers for ``n <= exact_limit``; ``log_counts[n-1]``
    is ``log |L_n|`` for every ``n``.
    """

    counts: dict
    log_counts: np.ndarray
    exact_limit: int

    @property
    def n_max(self) -> int:
        return len(self.log_counts)

    @property
    def entropy_estimate(self) -> float:
        """``min_n (1/n) log |L_n|`` over the computed range."""
        n = np.arange(1, self.n_max + 1)
        return float(np.min(self.log_counts / n))

    def count(self, n: int) -> int:
        return self.counts[n]

    def log_count(self, n: int) -> float:
        if n == 0:
            return 0.0
        return float(self.log_counts[n - 1])

    def ratios(self, lam: float) -> np.ndarray:
        """``|L_n| / lam**n`` for ``n = 1..n_max``, computed in log domain."""
        n = np.arange(1, self.n_max + 1)
        return np.exp(self.log_counts - n * math.log(lam))

    def perron_constants(self, lam: float, n_max: int | None = None) -> tuple[float, float]:
        """Empirical ``(C1, C2)`` with ``C1 lam^n <= |L_n| <= C2 lam^n`` for ``n <= n_max``."""
        r = self.ratios(lam)[: (n_max or self.n_max)]
        return float(r.min()), float(r.max())


def _path_counts(A: np.ndarray, start: np.ndarray, n_paths: int, exact_limit: int):
    """Number of paths with ``k`` edges from ``start`` symbols, ``k = 0..n_paths-1``.

    Yields ``(exact_or_None, log_count)`` pairs.
    """
    At = [[j for j in range(A.shape[0]) if A[i, j]] for i in range(A.shape[0])]
    v = [int(x) for x in start]
    out = []
    k = 0
    while k < n_paths and k < exact_limit:
        total = sum(v)
        out.append((total, math.log(total) if total > 0 else -math.inf))
        nv = [0] * len(v)
        for i, x in enumerate(v):
            if x:
                for j in At[i]:
                    nv[j] += x
        v = nv
        k += 1
    if k < n_paths:
        total = sum(v)
        if total == 0:
            out.extend((None, -math.inf) for _ in range(n_paths - k))
            return out
        u = np.array([x / total for x in v], dtype=float)
        logscale = math.log(total)
        Af = A.astype(float)
        while k < n_paths:
            out.append((None, logscale))
            u = u @ Af
            t = u.sum()
            logscale += math.log(t)
            u /= t
            k += 1
    return out


def language_table(obj: Union[Sft, np.ndarray], n_max: int,
                   exact_limit: int = EXACT_COUNT_LIMIT) -> LanguageTable:
    """Count admissible words of lengths ``1..n_max``.

    ``obj`` is a transition matrix or an :class:`Sft`. Matrices are
    essentialised first; ``M``-step shifts are counted through their block
    graph on length-``M`` words.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if isinstance(obj, Sft) and obj.step > 1:
        rec = higher_block_recode(obj)
        A = essentialize(rec.target)
        M = obj.step
        live = live_symbols(A)
        rows = []
        for n in range(1, min(M, n_max + 1)):
            prefixes = {rec.blocks[b][:n] for b in np.nonzero(live)[0]}
            rows.append((len(prefixes), math.log(len(prefixes)) if prefixes else -math.inf))
        rest = n_max - len(rows)
        if rest > 0:
            rows.extend(_path_counts(A, live, rest, max(exact_limit - M + 1, 0)))
        exact_rows = {n: c for n, (c, _) in enumerate(rows, start=1) if c is not None and n <= exact_limit}
        return LanguageTable(exact_rows, np.array([lc for _, lc in rows]), exact_limit)
    A = essentialize(to_matrix(obj) if isinstance(obj, Sft) else obj)
    rows = _path_counts(A, live_symbols(A), n_max, exact_limit)
    counts = {n: c for n, (c, _) in enumerate(rows, start=1) if c is not None}
    return LanguageTable(counts, np.array([lc for _, lc in rows]), exact_limit)


def language_count(obj: Union[Sft, np.ndarray], n: int) -> int:
    """Exact ``|L_n|`` as a Python integer."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return language_table(obj, n, exact_limit=n).counts[n]


# ---------------------------------------------------------------------------
# spectral data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralData:
    lam: float
    left: np.ndarray
    right: np.ndarray
    residual: float
    converged: bool = True

    @property
    def entropy(self) -> float:
        return math.log(self.lam) if self.lam > 0 else -math.inf


def _power_iteration(A: np.ndarray, tol: float, max_iter: int) -> tuple[float, np.ndarray, float, bool]:
    # Iterate with A + I: same Perron vector, and primitive whenever A is
    # irreducible, so periodic matrices do not oscillate.
    d = A.shape[0]
    S = A.astype(float) + np.eye(d)
    Af = A.astype(float)
    r = np.full(d, 1.0 / d)
    lam, res = 0.0, math.inf
    for _ in range(max_iter):
        r = S @ r
        r /= r.sum()
        Ar = Af @ r
        lam = float(Ar.sum())
        res = float(np.max(np.abs(Ar - lam * r)))
        if res <= tol:
            return lam, r, res, True
    return lam, r, res, False


def is_irreducible(A) -> bool:
    """True if the graph on live symbols is strongly connected and has an edge."""
    A = np.asarray(A)
    live = live_symbols(A)
    if not live.any():
        return False
    sub = A[np.ix_(live, live)]
    n_comp, _ = connected_components(sub, directed=True, connection="strong")
    return n_comp == 1


def perron(A, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> SpectralData:
    """Perron data of an irreducible nonnegative matrix by power iteration."""
    A = np.asarray(A)
    lam, r, res_r, ok_r = _power_iteration(A, tol, max_iter)
    _, l, res_l, ok_l = _power_iteration(A.T, tol, max_iter)
    # two-sided Rayleigh quotient: error quadratic in the vector errors
    lam = float(l @ (A.astype(float) @ r)) / float(l @ r)
    return SpectralData(lam, l, r, max(res_r, res_l), ok_r and ok_l)


def entropy_spectral(A, tol: float = POWER_TOL, max_iter: int = POWER_MAX_ITER) -> SpectralData:
    """Spectral radius and Perron vectors of an essential matrix.

    Irreducible matrices (on their live symbols) go through shifted power
    iteration. Otherwise the spectral radius is the maximum over irreducible
    components, and the returned vectors are the best power-iteration
    estimate after a bounded number of steps (``converged`` reports whether
    they meet ``tol``).
    """
    A = essentialize(A)
    d = A.shape[0]
    live = live_symbols(A)
    if not live.any():
        raise EmptyShiftError("empty shift has no spectral data")
    if is_irreducible(A):
        idx = np.nonzero(live)[0]
        sd = perron(A[np.ix_(idx, idx)], tol, max_iter)
        left, right = np.zeros(d), np.zeros(d)
        left[idx], right[idx] = sd.left, sd.right
        if not sd.converged:
            # fall through to the component maximum
            lam = max(c.lam for c in irreducible_components(A))
            return SpectralData(lam, left, right, sd.residual, False)
        return SpectralData(sd.lam, left, right, sd.residual, True)
    comps = irreducible_components(A)
    lam = max(c.lam for c in comps) if comps else 0.0
    budget = min(max_iter, 10_000)
    _, r, res_r, ok_r = _power_iteration(A, tol, budget)
    _, l, res_l, ok_l = _power_iteration(A.T, tol, budget)
    return SpectralData(lam, l, r, max(res_r, res_l), ok_r and ok_l)


@dataclass(frozen=True)
class Component:
    """An irreducible component: its symbols, sub-matrix and entropy."""

    symbols: tuple
    matrix: np.ndarray
    lam: float

    @property
    def entropy(self) -> float:
        return math.log(self.lam)


def irreducible_components(A, tol: float = POWER_TOL) -> list[Component]:
    """Strongly connected components carrying at least one internal edge.

    Sorted by entropy (descending), ties broken by smallest symbol.
    """
    A = np.asarray(A)
    n_comp, labels = connected_components(A, directed=True, connection="strong")
    comps = []
    for k in range(n_comp):
        idx = np.nonzero(labels == k)[0]
        sub = A[np.ix_(idx, idx)]
        if not sub.any():
            continue
        sub = sub.astype(np.int8)
        sub.flags.writeable = False
        lam = perron(sub, tol).lam if len(idx) > 1 else float(sub[0, 0])
        comps.append(Component(tuple(int(i) for i in idx), sub, lam))
    comps.sort(key=lambda c: (-round(c.entropy, 12), c.symbols[0]))
    return comps


# ---------------------------------------------------------------------------
# Parry measure
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ParryMeasure:
    """Markov measure ``(stationary, kernel)`` of maximal entropy."""

    stationary: np.ndarray
    kernel: np.ndarray
    lam: float

    @property
    def entropy(self) -> float:
        return markov_entropy(self.stationary, self.kernel)

    @property
    def stationarity_residual(self) -> float:
        return float(np.max(np.abs(self.stationary @ self.kernel - self.stationary)))


def markov_entropy(pi, P) -> float:
    """``-sum_i pi_i sum_j P_ij log P_ij`` with ``0 log 0 = 0``."""
    P = np.asarray(P, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(P > 0, P * np.log(P), 0.0)
    return float(-np.asarray(pi) @ terms.sum(axis=1))


def parry_measure(A, tol: float = POWER_TOL) -> ParryMeasure:
    """Parry measure of an irreducible transition matrix.

    ``P_ij = A_ij r_j / (lam r_i)`` and ``pi_i ~ l_i r_i`` with ``l``, ``r``
    the left and right Perron vectors.
    """
    A = as_transition_matrix(A)
    if not live_symbols(A).all() or not is_irreducible(A):
        raise SftError("parry_measure needs an irreducible matrix")
    sd = perron(A, tol)
    l, r, lam = sd.left, sd.right, sd.lam
    P = A * r[None, :] / (lam * r[:, None])
    P /= P.sum(axis=1, keepdims=True)
    pi = l * r
    pi /= pi.sum()
    # one refinement step against the kernel actually returned
    pi = pi @ P
    pi /= pi.sum()
    return ParryMeasure(pi, P, lam)


# ---------------------------------------------------------------------------
# higher block recoding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Recoding:
    """Result of the ``M``-th higher block map.

    ``blocks[k]`` is the length-``M`` word coded by symbol ``k`` (blocks are in
    lexicographic order). ``ambient`` is the overlap matrix of the full shift,
    ``target`` the recoded (not essentialised) shift, entrywise ``<= ambient``.
    """

    ambient: np.ndarray
    target: np.ndarray
    blocks: tuple
    step: int

    def encode(self, word: Sequence[int]) -> Word:
        """Recode a word of the original alphabet into overlapping blocks."""
        M = self.step
        index = {b: k for k, b in enumerate(self.blocks)}
        return tuple(index[tuple(word[i:i + M])] for i in range(len(word) - M + 1))

    def decode(self, word: Sequence[int]) -> Word:
        if not word:
            return ()
        first = self.blocks[word[0]]
        return tuple(first) + tuple(self.blocks[k][-1] for k in word[1:])


def higher_block_recode(sft: Sft) -> Recoding:
    """Recode an ``M``-step SFT as a 1-step SFT on length-``M`` blocks.

    Raises :class:`EmptyShiftError` if the recoded target has no
    infinite admissible path.
    """
    d, M = sft.alphabet_size, sft.step
    if M == 1:
        return Recoding(as_transition_matrix(np.ones((d, d))), to_matrix(sft),
                        tuple((i,) for i in range(d)), 1)
    blocks = tuple(itertools.product(range(d), repeat=M))
    D = len(blocks)
    B = np.zeros((D, D), dtype=np.int8)
    T = np.zeros((D, D), dtype=np.int8)
    for u, bu in enumerate(blocks):
        # successors of bu are bu[1:] + (s,), indexed base d
        base = sum(x * d ** (M - 2 - k) for k, x in enumerate(bu[1:])) * d
        for s in range(d):
            v = base + s
            B[u, v] = 1
            if bu + (s,) not in sft.forbidden:
                T[u, v] = 1
    if not essentialize(T).any():
        raise EmptyShiftError("recoded target shift is empty")
    B.flags.writeable = False
    T.flags.writeable = False
    return Recoding(B, T, blocks, M)
