"""The potential ``g`` and roof ``rho = -g`` built from a target SFT ``Y``.

``g(xi) = -a_t`` when ``t`` is the first position at which ``xi`` leaves ``Y``
(``A[xi_t, xi_{t+1}] == 0``, or ``xi_t`` does not occur in ``Y`` at all), and
``g(xi) = -h(Y)`` on ``Y`` itself. The sequence ``a_j`` decreases blockwise to
``h(Y)``; block ``n`` holds ``n`` consecutive indices and contributes
``(1/n) log |L_n(Y)|`` plus the correction ``c / sqrt(j)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .sft import (
    EmptyShiftError,
    LanguageTable,
    Recoding,
    Sft,
    SftError,
    ZeroEntropyError,
    entropy_spectral,
    essentialize,
    higher_block_recode,
    language_table,
    live_symbols,
)

#: Block ``n`` is ``{j : n(n-1)/2 < j <= n(n+1)/2}``.
BLOCK_CONVENTION = "n(n-1)/2 < j <= n(n+1)/2"
DEFAULT_ALPHA = 0.5
DEFAULT_BLOCKS = 100
ENTROPY_FLOOR = 1e-12


def block_of(j: int) -> int:
    """Index ``n`` of the block containing ``j``."""
    if j < 1:
        raise ValueError("j must be >= 1")
    n = (math.isqrt(8 * j + 1) - 1) // 2
    if n * (n + 1) // 2 < j:
        n += 1
    return n


def triangular(n: int) -> int:
    return n * (n + 1) // 2


def c_floor(ambient_size: int) -> float:
    """Lower bound that the constant ``c`` must strictly exceed."""
    return max(2.0, math.log(ambient_size))


def default_c(ambient_size: int) -> float:
    """``max{2, log d} + 1/2``."""
    if ambient_size < 2:
        raise ValueError("ambient alphabet needs at least two symbols")
    return c_floor(ambient_size) + 0.5


@dataclass(frozen=True)
class AjTable:
    """Values ``a_1..a_{j_max}`` for ``n_blocks`` complete blocks.

    ``tail_bound`` dominates every ``a_j`` with ``j > j_max``: for ``n > N``
    sub-multiplicativity gives ``(1/n) log|L_n| <= x_N + D/(N+1)`` with
    ``x_N = (1/N) log|L_N|`` and ``D = max_{0<=r<N} (log|L_r| - r x_N)``.
    """

    c: float
    h_y: float
    n_blocks: int
    values: np.ndarray          # values[j-1] = a_j
    blocks: np.ndarray          # blocks[j-1] = n
    cumsum: np.ndarray          # cumsum[l] = a_1 + ... + a_l, cumsum[0] = 0
    suffix_max: np.ndarray      # suffix_max[m] = max_{j > m} a_j, certified
    tail_bound: float

    @classmethod
    def build(cls, table: LanguageTable, c: float, h_y: float, n_blocks: int = DEFAULT_BLOCKS) -> "AjTable":
        if table.n_max < n_blocks:
            raise ValueError("language table too short for the requested blocks")
        j_max = triangular(n_blocks)
        j = np.arange(1, j_max + 1)
        blocks = np.repeat(np.arange(1, n_blocks + 1), np.arange(1, n_blocks + 1))
        logs = table.log_counts[:n_blocks]
        values = logs[blocks - 1] / blocks + c / np.sqrt(j)
        cumsum = np.concatenate(([0.0], np.cumsum(values)))

        N = n_blocks
        x_N = logs[N - 1] / N
        D = max(table.log_count(r) - r * x_N for r in range(N))
        tail = x_N + max(D, 0.0) / (N + 1) + c / math.sqrt(j_max + 1)

        suffix = np.empty(j_max + 1)
        running = tail
        for m in range(j_max, -1, -1):
            suffix[m] = running
            if m > 0:
                running = max(running, values[m - 1])
        for arr in (values, blocks, cumsum, suffix):
            arr.flags.writeable = False
        return cls(c, h_y, n_blocks, values, blocks, cumsum, suffix, tail)

    @property
    def j_max(self) -> int:
        return len(self.values)

    def value(self, j: int) -> float:
        if not 1 <= j <= self.j_max:
            raise IndexError(f"a_{j} outside the tabulated range 1..{self.j_max}")
        return float(self.values[j - 1])

    def block(self, j: int) -> int:
        return block_of(j)

    def partial_sum(self, length: int) -> float:
        """``a_1 + ... + a_length``."""
        if not 0 <= length <= self.j_max:
            raise IndexError(f"partial sum of length {length} outside the table")
        return float(self.cumsum[length])

    def sup_beyond(self, m: int) -> float:
        """Certified ``sup_{j > m} a_j``."""
        if m >= self.j_max:
            return self.tail_bound
        return float(self.suffix_max[max(m, 0)])


@dataclass(frozen=True)
class RoofSpec:
    """Everything needed to evaluate ``g`` and ``rho`` over an ambient shift.

    ``ambient`` is the full shift's matrix (all ones) or, after recoding,
    the overlap matrix of the block presentation; ``target`` is the
    essentialised matrix of ``Y`` with ``target <= ambient``.
    """

    ambient: np.ndarray
    target: np.ndarray
    alpha: float
    aj: AjTable
    h_y: float
    lam: float
    beta: dict
    language: LanguageTable
    sft: Optional[Sft] = None
    recoding: Optional[Recoding] = None

    @property
    def c(self) -> float:
        return self.aj.c

    @property
    def size(self) -> int:
        return self.ambient.shape[0]

    @property
    def live(self) -> np.ndarray:
        return live_symbols(self.target)

    @property
    def a0(self) -> tuple:
        """Symbols with an ambient successor that leaves ``Y``."""
        return tuple(sorted(self.beta))


@dataclass(frozen=True)
class PotentialEval:
    """Value of ``g`` on a cylinder.

    ``kind`` is ``"violation"`` (exact value, ``position`` is the first
    violation) or ``"admissible"`` (``position`` is the depth ``m``; the value
    lies in ``[lo, hi]``). ``distance`` is ``d(xi, Y)`` in the ``alpha``
    metric, an upper bound for admissible prefixes.
    """

    kind: str
    position: int
    lo: float
    hi: float
    distance: float

    @property
    def exact(self) -> bool:
        return self.kind == "violation"

    @property
    def value(self) -> float:
        if not self.exact:
            raise ValueError("value is only known up to an interval")
        return self.lo

    def negated(self) -> "PotentialEval":
        return PotentialEval(self.kind, self.position, -self.hi, -self.lo, self.distance)


def first_violation(spec: RoofSpec, word: Sequence[int]) -> Optional[int]:
    """1-based position of the first exit from ``Y``, or None.

    A last symbol that does not occur in ``Y`` counts as a violation at
    ``len(word)``.
    """
    A = spec.target
    w = tuple(word)
    if not w:
        raise ValueError("word must be nonempty")
    for t in range(len(w) - 1):
        if not A[w[t], w[t + 1]]:
            return t + 1
    if not A[w[-1]].any():
        return len(w)
    return None


def g_eval(spec: RoofSpec, word: Sequence[int]) -> PotentialEval:
    w = tuple(word)
    t = first_violation(spec, w)
    alpha = spec.alpha
    if t is not None:
        val = -spec.aj.value(t)
        if t == 1 and not spec.target[w[0]].any():
            dist = alpha
        else:
            dist = alpha ** (t + 1)
        return PotentialEval("violation", t, val, val, dist)
    m = len(w) - 1
    return PotentialEval("admissible", m, -spec.aj.sup_beyond(m), -spec.h_y, alpha ** (len(w) + 1))


def roof_eval(spec: RoofSpec, word: Sequence[int]) -> PotentialEval:
    """``rho = -g`` on the forward coordinates ``word`` of a two-sided point."""
    return g_eval(spec, word).negated()


def beta_options(ambient, target) -> dict:
    """For each symbol, the ambient successors that leave the target."""
    B, A = np.asarray(ambient), np.asarray(target)
    opts = {}
    for i in range(B.shape[0]):
        js = tuple(int(j) for j in np.nonzero((B[i] == 1) & (A[i] == 0))[0])
        if js:
            opts[i] = js
    return opts


def beta_choice(spec_or_pair) -> dict:
    """Least exit successor for every symbol of ``A_0``."""
    if isinstance(spec_or_pair, RoofSpec):
        B, A = spec_or_pair.ambient, spec_or_pair.target
    else:
        B, A = spec_or_pair
    return {i: js[0] for i, js in beta_options(B, A).items()}


def all_beta_choices(spec: RoofSpec):
    """Iterate over every valid successor map on ``A_0``."""
    opts = beta_options(spec.ambient, spec.target)
    keys = sorted(opts)
    for combo in itertools.product(*(opts[k] for k in keys)):
        yield dict(zip(keys, combo))


def build_roof(sft: Sft, c: Optional[float] = None, alpha: float = DEFAULT_ALPHA,
               n_blocks: int = DEFAULT_BLOCKS, n_table: Optional[int] = None) -> RoofSpec:
    """Assemble the roof for ``Y = sft`` inside the full shift on its alphabet.

    ``M``-step shifts are recoded to blocks of length ``M``; the ambient
    space is then the overlap shift on those blocks.
    """
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie in (0, 1)")
    rec = higher_block_recode(sft)
    B = rec.ambient
    A = essentialize(rec.target)
    if not A.any():
        raise EmptyShiftError("target shift is empty")
    spectral = entropy_spectral(A)
    h_y = spectral.entropy
    if h_y <= ENTROPY_FLOOR:
        raise ZeroEntropyError(
            "target shift has zero entropy; the construction needs a positive entropy subshift")
    size = B.shape[0]
    if c is None:
        c = default_c(size)
    elif c <= c_floor(size):
        raise SftError(f"c = {c} must exceed max(2, log {size}) = {c_floor(size):.6g}")
    table = language_table(A, max(n_table or 0, n_blocks, 300))
    aj = AjTable.build(table, c, h_y, n_blocks)
    return RoofSpec(
        ambient=B,
        target=A,
        alpha=alpha,
        aj=aj,
        h_y=h_y,
        lam=spectral.lam,
        beta=beta_choice((B, A)),
        language=table,
        sft=sft,
        recoding=rec if sft.step > 1 else None,
    )


def with_beta(spec: RoofSpec, beta: dict) -> RoofSpec:
    """Copy of ``spec`` using another successor map on ``A_0``."""
    opts = beta_options(spec.ambient, spec.target)
    if set(beta) != set(opts) or any(beta[i] not in opts[i] for i in opts):
        raise SftError("beta must pick an exit successor for every symbol of A_0")
    return RoofSpec(spec.ambient, spec.target, spec.alpha, spec.aj, spec.h_y, spec.lam,
                    dict(beta), spec.language, spec.sft, spec.recoding)
