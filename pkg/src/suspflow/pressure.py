"""Partition sums, the quantity ``Q(r)``, finite-n pressure and its root.

The supremum of ``S_n g`` over a cylinder ``[w]`` is exact: every position
``i`` of ``w`` contributes ``-a_{t-i+1}`` where ``t >= i`` is the next
violation inside ``w`` (a dead last symbol counts as a violation at ``n``),
or ``-h(Y)`` when the word stays in ``Y`` from ``i`` on, in which case the
supremum is attained by continuing inside ``Y``.

Summing ``exp(scale * sup)`` over all ambient words is a dynamic programme
over states (last symbol, length of the current violation-free run).
All arithmetic is in the log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .roof import RoofSpec, g_eval
from .sft import irreducible_components, language_table, live_symbols

NEG_INF = -np.inf
ROOT_MAX_ITER = 60


def _lse(x: np.ndarray, axis: int) -> np.ndarray:
    """log-sum-exp along ``axis`` that maps all ``-inf`` slices to ``-inf``."""
    m = np.max(x, axis=axis, keepdims=True)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    with np.errstate(divide="ignore"):
        out = np.log(np.sum(np.exp(x - shift), axis=axis, keepdims=True)) + shift
    out = np.where(finite, out, NEG_INF)
    return np.squeeze(out, axis=axis)


def _log01(M: np.ndarray) -> np.ndarray:
    return np.where(np.asarray(M) > 0, 0.0, NEG_INF)


# ---------------------------------------------------------------------------
# cylinder suprema
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BirkhoffSupResult:
    """``sup`` of ``scale * S_n g`` over a cylinder.

    ``runs`` lists ``(violation position, run length)`` for every closed run;
    ``witness`` is a finite word starting with the cylinder's word, to be
    read as continuing inside ``Y`` forever when ``tail_in_target`` is set.
    """

    value: float
    last_violation: int
    runs: tuple
    witness: tuple
    tail_in_target: bool


def _violations(spec: RoofSpec, w: Sequence[int]) -> list[int]:
    A = spec.target
    v = [t + 1 for t in range(len(w) - 1) if not A[w[t], w[t + 1]]]
    if not A[w[-1]].any():
        v.append(len(w))
    return v


def birkhoff_sup(spec: RoofSpec, word: Sequence[int], scale: float = 1.0) -> BirkhoffSupResult:
    """Exact cylinder supremum of ``scale * S_n g`` via the run decomposition."""
    w = tuple(int(s) for s in word)
    if not w:
        raise ValueError("word must be nonempty")
    n = len(w)
    viol = _violations(spec, w)
    runs = []
    prev = 0
    total = 0.0
    for t in viol:
        length = t - prev
        runs.append((t, length))
        total -= spec.aj.partial_sum(length)
        prev = t
    total -= (n - prev) * spec.h_y
    if prev < n:
        witness, tail = w, True
    else:
        # every continuation gives the same value
        succ = int(np.nonzero(spec.ambient[w[-1]])[0][0])
        witness, tail = w + (succ,), False
    return BirkhoffSupResult(scale * total, prev, tuple(runs), witness, tail)


def birkhoff_sum(spec: RoofSpec, prefix: Sequence[int], n: int, scale: float = 1.0,
                 tail_in_target: bool = True) -> float:
    """``scale * S_n g`` at the point ``prefix`` followed by a tail.

    Each term is evaluated pointwise through :func:`g_eval` on the shifted
    prefix. With ``tail_in_target`` the point continues inside ``Y`` after
    the prefix; otherwise every term must already be decided by the prefix.
    """
    p = tuple(prefix)
    if len(p) < n:
        raise ValueError("prefix shorter than n")
    total = 0.0
    for i in range(n):
        ev = g_eval(spec, p[i:])
        if ev.exact:
            total += ev.value
        elif tail_in_target:
            total -= spec.h_y
        else:
            raise ValueError(f"g at shift {i} is not determined by the prefix")
    return scale * total


# ---------------------------------------------------------------------------
# dynamic programme
# ---------------------------------------------------------------------------

def _run_states(spec: RoofSpec, n_max: int, scale: float):
    """Yield ``(n, L)`` with ``L[s, l]`` = log weight of length-``n`` words.

    A word is in state ``(s, l)`` when it ends in ``s`` and its last ``l``
    positions have no violation yet; ``L`` already includes the factors of
    all closed runs.
    """
    if spec.aj.j_max < n_max:
        raise ValueError(f"a_j table covers runs up to {spec.aj.j_max}, need {n_max}")
    d = spec.size
    logA = _log01(spec.target)
    logV = _log01(np.asarray(spec.ambient) * (1 - np.asarray(spec.target)))
    S = np.asarray(spec.aj.cumsum[: n_max + 1])
    L = np.full((d, n_max + 1), NEG_INF)
    L[spec.ambient.any(axis=1), 1] = 0.0
    for n in range(1, n_max + 1):
        yield n, L
        if n == n_max:
            break
        new = np.full_like(L, NEG_INF)
        # admissible step: run grows by one
        new[:, 2:] = _lse(L[:, None, 1:-1] + logA[:, :, None], axis=0)
        # violation: close the run at the current position
        closed = _lse(L[:, 1:] - scale * S[None, 1:], axis=1)
        new[:, 1] = _lse(closed[:, None] + logV, axis=0)
        if np.isnan(new).any():
            raise FloatingPointError("NaN in partition-sum recursion")
        L = new


def _terminal_z(spec: RoofSpec, L: np.ndarray, scale: float) -> float:
    n_cols = L.shape[1]
    ell = np.arange(n_cols)
    S = np.asarray(spec.aj.cumsum[:n_cols])
    live = live_symbols(spec.target)
    close = np.where(live[:, None], -scale * spec.h_y * ell[None, :], -scale * S[None, :])
    return float(_lse((L + close).ravel(), axis=0))


def _terminal_q(spec: RoofSpec, L: np.ndarray, scale: float, beta: dict) -> float:
    n_cols = L.shape[1]
    S = np.asarray(spec.aj.cumsum[:n_cols])
    syms = sorted(beta)
    if not syms:
        return NEG_INF
    for s in syms:
        if spec.target[s, beta[s]] or not spec.ambient[s, beta[s]]:
            raise ValueError(f"beta({s}) = {beta[s]} is not an exit successor")
    return float(_lse((L[syms] - scale * S[None, :]).ravel(), axis=0))


def log_partition_sums(spec: RoofSpec, n_max: int, scale: float = 1.0) -> np.ndarray:
    """``log Z_n(scale * g)`` for ``n = 1..n_max``."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if scale < 0:
        raise ValueError("scale must be nonnegative")
    return np.array([_terminal_z(spec, L, scale) for _, L in _run_states(spec, n_max, scale)])


def partition_sum(spec: RoofSpec, n: int, scale: float = 1.0) -> float:
    """``log Z_n(scale * g)``, summing over ambient-admissible words."""
    return float(log_partition_sums(spec, n, scale)[-1])


def log_q_values(spec: RoofSpec, r_max: int, scale: float = 1.0,
                 beta: Optional[dict] = None) -> np.ndarray:
    """``log Q(r)`` for ``r = 1..r_max`` (``-inf`` when ``A_0`` is empty)."""
    beta = spec.beta if beta is None else beta
    return np.array([_terminal_q(spec, L, scale, beta) for _, L in _run_states(spec, r_max, scale)])


def q_value(spec: RoofSpec, r: int, scale: float = 1.0, beta: Optional[dict] = None) -> float:
    """``Q(r)`` itself (not its logarithm)."""
    return math.exp(log_q_values(spec, r, scale, beta)[-1])


# ---------------------------------------------------------------------------
# tables and bounds
# ---------------------------------------------------------------------------

def exp_sqrt_series(c: float, r: Optional[int] = None, k: int = 10_000) -> float:
    """``sum_{s=2}^{r} exp(-c sqrt(s))``; for ``r=None`` an upper bound of the full series.

    The tail beyond ``k`` is bounded by ``int_k^inf exp(-c sqrt x) dx``.
    """
    if r is not None:
        s = np.arange(2, r + 1)
        return float(np.sum(np.exp(-c * np.sqrt(s))))
    s = np.arange(2, k + 1)
    head = float(np.sum(np.exp(-c * np.sqrt(s))))
    rk = math.sqrt(k)
    return head + 2.0 * math.exp(-c * rk) * (rk / c + 1.0 / c ** 2)


@dataclass(frozen=True)
class QTable:
    log_q: np.ndarray           # log_q[r-1] = log Q(r)
    c: float
    scale: float
    beta: dict
    recursion_rhs: np.ndarray   # upper bound from the recursion, per r

    @property
    def q(self) -> np.ndarray:
        return np.exp(self.log_q)


def q_table(spec: RoofSpec, r_max: int, scale: float = 1.0, beta: Optional[dict] = None) -> QTable:
    """``Q(1..r_max)`` with the recursion bound.

    ``rhs(1) = |A_0| exp(-a_1)`` and, for ``r >= 2``,
    ``rhs(r) = sum_{s=2}^r exp(-c sqrt s) + max_{s<r} Q(s) / 2``.
    """
    beta = spec.beta if beta is None else beta
    log_q = log_q_values(spec, r_max, scale, beta)
    q = np.exp(log_q)
    c = spec.c
    terms = np.exp(-c * np.sqrt(np.arange(2, r_max + 1)))
    rhs = np.empty(r_max)
    rhs[0] = len(beta) * math.exp(-spec.aj.value(1))
    running_max = q[0]
    for r in range(2, r_max + 1):
        rhs[r - 1] = terms[: r - 1].sum() + 0.5 * running_max
        running_max = max(running_max, q[r - 1])
    return QTable(log_q, c, scale, dict(beta), rhs)


@dataclass(frozen=True)
class PartitionTable:
    """``log Z_n`` and ``P_n = (1/n) log Z_n`` at one scale, with bounds."""

    scale: float
    log_z: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    c2: float

    @property
    def n(self) -> np.ndarray:
        return np.arange(1, len(self.log_z) + 1)

    @property
    def pressure(self) -> np.ndarray:
        return self.log_z / self.n


def perron_c2(spec: RoofSpec, n_max: int) -> float:
    """``C2 = max_{m <= n_max} |L_m(Y)| / lam^m``."""
    table = spec.language if spec.language.n_max >= n_max else language_table(spec.target, n_max)
    return table.perron_constants(spec.lam, n_max)[1]


def ambient_log_counts(spec: RoofSpec, n_max: int) -> np.ndarray:
    return language_table(spec.ambient, n_max).log_counts


def pressure_estimate(spec: RoofSpec, n_max: int, scale: float = 1.0) -> PartitionTable:
    """Finite-n pressures with a-priori bounds.

    Lower: only words of ``L_n(Y)``, ``(1/n) log|L_n| - scale h``
    (nonnegative at scale 1). Upper at scale 1: ``log(n C2)/n``. Beyond
    scale 1 each unit of scale lowers the pressure by at least ``h``; below
    it, convexity of ``log Z_n`` in the scale interpolates with scale 0.
    """
    log_z = log_partition_sums(spec, n_max, scale)
    n = np.arange(1, n_max + 1)
    c2 = perron_c2(spec, n_max)
    lang = spec.language if spec.language.n_max >= n_max else language_table(spec.target, n_max)
    lower = lang.log_counts[:n_max] / n - scale * spec.h_y
    up1 = np.log(n * c2) / n
    if scale >= 1:
        upper = up1 - (scale - 1) * spec.h_y
    else:
        p0 = ambient_log_counts(spec, n_max) / n
        upper = (1 - scale) * p0 + scale * up1
    for arr in (log_z, lower, upper):
        arr.flags.writeable = False
    return PartitionTable(scale, log_z, lower, upper, c2)


def z_decomposition_bound(spec: RoofSpec, n: int) -> float:
    """``log sum_{r=0}^{n-1} |L_{n-r}| exp(-(n-r) h)``, bounding ``log Z_n`` at scale 1."""
    lang = spec.language if spec.language.n_max >= n else language_table(spec.target, n)
    m = np.arange(1, n + 1)
    return float(_lse(lang.log_counts[:n] - m * spec.h_y, axis=0))


# ---------------------------------------------------------------------------
# root finding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootResult:
    root: float
    residual: float
    iterations: int
    history: tuple = field(default_factory=tuple)   # (iteration, lo, hi)
    enclosure: Optional[tuple] = None


def bisect_decreasing(f: Callable[[float], float], lo: float, hi: float, tol: float,
                      max_iter: int = ROOT_MAX_ITER) -> RootResult:
    """Bisection for a continuous strictly decreasing ``f`` with ``f(lo) >= 0 >= f(hi)``.

    Stops once ``|f(mid)| <= tol`` or after ``max_iter`` halvings.
    """
    if not lo < hi or tol <= 0:
        raise ValueError("need lo < hi and tol > 0")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo < 0 or f_hi > 0:
        raise ValueError(f"invalid bracket: f({lo}) = {f_lo}, f({hi}) = {f_hi}")
    history = [(0, lo, hi)]
    if f_lo == 0:
        return RootResult(lo, 0.0, 0, tuple(history))
    if f_hi == 0:
        return RootResult(hi, 0.0, 0, tuple(history))
    best, best_res = lo, abs(f_lo)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if abs(fm) < best_res:
            best, best_res = mid, abs(fm)
        if fm > 0:
            lo = mid
        elif fm < 0:
            hi = mid
        else:
            lo = hi = mid
        history.append((it, lo, hi))
        if abs(fm) <= tol or lo == hi:
            return RootResult(mid, abs(fm), it, tuple(history))
    return RootResult(best, best_res, max_iter, tuple(history))


def pressure_root(spec: RoofSpec, n: int, bracket: Optional[tuple] = None,
                  tol: float = 1e-10) -> RootResult:
    """Root of ``scale -> P_n(scale)`` with residual at most ``tol * h(Y)``.

    The default bracket is the a-priori enclosure ``[1, 1 + P_n(1)/h]``,
    which follows from ``P_n(1) >= 0`` and ``P_n(1 + d) <= P_n(1) - d h``.
    """
    p1 = partition_sum(spec, n, 1.0) / n
    enclosure = (1.0, 1.0 + max(p1, 0.0) / spec.h_y)
    if bracket is None:
        bracket = enclosure
        if bracket[1] == bracket[0]:
            return RootResult(1.0, abs(p1), 0, ((0, 1.0, 1.0),), enclosure)
    res = bisect_decreasing(lambda c: partition_sum(spec, n, c) / n,
                            bracket[0], bracket[1], tol * spec.h_y)
    return RootResult(res.root, res.residual, res.iterations, res.history, enclosure)


def constant_roof_pressure(d: int, n: int, c: float, height: float = 1.0) -> float:
    """``P_n(-c * height)`` over the full ``d``-shift: ``log d - c * height``."""
    return (n * math.log(d) - n * c * height) / n


# ---------------------------------------------------------------------------
# variational principle
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VariationalRow:
    symbols: tuple
    entropy: float
    slack: float            # entropy - h(Y); zero for maximal components
    maximal: bool


def variational_check(spec: RoofSpec, tol: float = 1e-10) -> list[VariationalRow]:
    """``h_mu + int g dmu = log lam_C - h(Y)`` for each component's Parry measure."""
    rows = []
    for comp in irreducible_components(spec.target):
        slack = comp.entropy - spec.h_y
        rows.append(VariationalRow(comp.symbols, comp.entropy, slack, abs(slack) <= tol))
    return rows
