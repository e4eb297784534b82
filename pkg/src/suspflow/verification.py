"""The finite-n verification suite run by ``suspflow verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .pressure import (
    PartitionTable,
    QTable,
    RootResult,
    exp_sqrt_series,
    pressure_estimate,
    pressure_root,
    q_table,
    variational_check,
    z_decomposition_bound,
)
from .roof import RoofSpec

SLACK = 1e-12
ORACLE_MAX_WORDS = 100_000


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


@dataclass(frozen=True)
class VerifyResult:
    checks: tuple
    partition: PartitionTable
    q: QTable
    root: RootResult

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


def block_sum_identity(spec: RoofSpec, s: int) -> tuple[float, float]:
    """Both sides of ``sum_{j<=s} a_j = sum_{m<n} log|L_m| + (k/n) log|L_n| + c sum j^{-1/2}``."""
    n = 1
    while n * (n + 1) // 2 < s:
        n += 1
    k = s - n * (n - 1) // 2
    lang = spec.language
    rhs = sum(lang.log_count(m) for m in range(1, n)) + k / n * lang.log_count(n)
    rhs += spec.c * math.fsum(1 / math.sqrt(j) for j in range(1, s + 1))
    return math.fsum(spec.aj.values[:s]), rhs


def run_checks(spec: RoofSpec, n_max: int = 60, r_max: int = 200, tol: float = 1e-10,
               use_oracle: bool = False, oracle_max_words: int = ORACLE_MAX_WORDS) -> VerifyResult:
    checks = []
    h = spec.h_y

    qt = q_table(spec, r_max)
    q = qt.q
    checks.append(Check("Q(r) < 1", bool((q < 1).all()),
                        f"max Q(r) = {q.max():.6g} over r <= {r_max}"))
    ok = bool((q <= qt.recursion_rhs * (1 + SLACK)).all())
    series = exp_sqrt_series(spec.c)
    checks.append(Check("Q recursion bound", ok and series < 0.5,
                        f"sum_s>=2 exp(-c sqrt s) <= {series:.6g}"))

    pt = pressure_estimate(spec, n_max, 1.0)
    p = pt.pressure
    ok = bool((p >= -SLACK).all() and (p <= pt.upper + SLACK).all())
    checks.append(Check("pressure sandwich at scale 1", ok,
                        f"P_{n_max}(1) = {p[-1]:.6g} in [0, {pt.upper[-1]:.6g}], C2 = {pt.c2:.6g}"))

    zb = np.array([z_decomposition_bound(spec, n) for n in range(1, n_max + 1)])
    checks.append(Check("Z_n decomposition bound", bool((pt.log_z <= zb + SLACK).all()),
                        f"log Z_{n_max} = {pt.log_z[-1]:.6g} <= {zb[-1]:.6g}"))

    p15 = pressure_estimate(spec, n_max, 1.5).pressure
    gap = p - p15
    checks.append(Check("strict monotonicity in scale", bool((gap >= 0.5 * h - SLACK).all()),
                        f"min gap P_n(1) - P_n(1.5) = {gap.min():.6g} >= {0.5 * h:.6g}"))

    s_max = min(200, spec.aj.j_max, spec.language.n_max)
    worst = 0.0
    chain = True
    for s in range(1, s_max + 1):
        lhs, rhs = block_sum_identity(spec, s)
        worst = max(worst, abs(lhs - rhs) / max(1.0, abs(rhs)))
        chain &= lhs >= spec.language.log_count(s) + spec.c * math.sqrt(s) - SLACK * max(1.0, abs(lhs))
    checks.append(Check("block-sum identity", worst <= SLACK, f"max rel. error {worst:.3g} for s <= {s_max}"))
    checks.append(Check("sum a_j >= log|L_s| + c sqrt(s)", bool(chain), f"s <= {s_max}"))

    root = pressure_root(spec, n_max, tol=tol)
    lo, hi = root.enclosure
    ok = lo <= root.root <= hi and root.residual <= tol * h
    checks.append(Check("pressure root enclosure", ok,
                        f"c_{n_max} = {root.root:.12g} in [{lo:.6g}, {hi:.6g}], residual {root.residual:.3g}"))

    rows = variational_check(spec)
    ok = all(r.slack < 0 or r.maximal for r in rows) and any(r.maximal for r in rows)
    checks.append(Check("variational principle on Y", ok,
                        "; ".join(f"{list(r.symbols)}: slack {r.slack:.3g}" for r in rows)))

    if use_oracle:
        worst, cases = 0.0, 0
        d = spec.size
        n = 1
        while n <= n_max and d ** n <= oracle_max_words:
            for scale in (0.0, 0.5, 1.0, 2.0):
                dp = pressure_estimate(spec, n, scale).log_z[-1]
                worst = max(worst, abs(dp - oracle.brute_log_partition_sum(spec, n, scale)))
                cases += 1
            if spec.beta and n <= r_max:
                worst = max(worst, abs(qt.log_q[n - 1] - oracle.brute_log_q(spec, n)))
                cases += 1
            n += 1
        checks.append(Check("DP equals brute-force enumeration", worst <= SLACK,
                            f"{cases} cases, max |log difference| {worst:.3g}"))

    return VerifyResult(tuple(checks), pt, qt, root)
