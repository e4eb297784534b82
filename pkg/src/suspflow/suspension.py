"""Suspension flow under the roof ``rho``: Abramov entropies and MME multiplicity.

Flow-invariant measures are handled through their base measures; the
entropy of the lift of ``mu`` is ``h_mu / int rho dmu``.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from typing import Optional

import numpy as np

from .pressure import RootResult, pressure_root
from .roof import RoofSpec
from .sft import irreducible_components, markov_entropy, parry_measure

STATIONARITY_TOL = 1e-10
MAXIMALITY_TOL = 1e-10


def abramov(h_mu: float, roof_integral: float) -> float:
    """Entropy of the lifted measure."""
    if roof_integral <= 0:
        raise ValueError("roof integral must be positive")
    return h_mu / roof_integral


@dataclass(frozen=True)
class RoofIntegral:
    """``int rho dmu`` for a Markov measure, up to a one-sided remainder.

    The true integral lies in ``[value, value + remainder]``.
    ``violation_probs[m-1]`` is ``mu(first violation at m)``; ``never`` is
    the mass that stays in ``Y`` forever.
    """

    value: float
    remainder: float
    never: float
    violation_probs: np.ndarray


def _never_violating(P: np.ndarray, A: np.ndarray) -> np.ndarray:
    """Largest set of states whose every ``P``-successor is an ``A``-edge into the set."""
    keep = np.ones(P.shape[0], dtype=bool)
    while True:
        bad = ((P > 0) & ((A == 0) | ~keep[None, :])).any(axis=1)
        new = keep & ~bad
        if np.array_equal(new, keep):
            return keep
        keep = new


def roof_integral_markov(spec: RoofSpec, pi, P, m_max: int = 200) -> RoofIntegral:
    """Integrate ``rho`` against the stationary Markov measure ``(pi, P)``.

    The first-violation time is tracked by the substochastic recursion
    ``v_{k+1} = v_k (P * A)``, split off whatever mass enters states from
    which no violation is possible.
    """
    pi = np.asarray(pi, dtype=float)
    P = np.asarray(P, dtype=float)
    A = np.asarray(spec.target)
    if not 1 <= m_max <= spec.aj.j_max:
        raise ValueError(f"m_max must lie in 1..{spec.aj.j_max}")
    if np.max(np.abs(pi @ P - pi)) > STATIONARITY_TOL or abs(pi.sum() - 1) > STATIONARITY_TOL:
        raise ValueError("(pi, P) is not a stationary Markov measure")
    if ((P > 0) & (np.asarray(spec.ambient) == 0)).any():
        raise ValueError("kernel uses transitions outside the ambient shift")
    safe = _never_violating(P, A)
    stay = P * A
    leave = (P * (1 - A)).sum(axis=1)
    v = np.where(safe, 0.0, pi)
    probs = np.empty(m_max)
    for m in range(m_max):
        probs[m] = v @ leave
        v = v @ stay
        v[safe] = 0.0
    tau = float(v.sum())
    never = max(0.0, 1.0 - float(probs.sum()) - tau) if probs.any() or tau else 1.0
    aj = spec.aj
    trunc = float(probs @ aj.values[:m_max])
    value = trunc + spec.h_y * (never + tau)
    remainder = (aj.sup_beyond(m_max) - spec.h_y) * tau
    return RoofIntegral(value, remainder, never, probs)


def embed_markov(spec: RoofSpec, symbols, stationary, kernel) -> tuple[np.ndarray, np.ndarray]:
    """Lift a Markov measure on ``symbols`` to the ambient alphabet.

    Rows outside the support get the uniform kernel over ambient successors;
    they carry no stationary mass.
    """
    B = np.asarray(spec.ambient, dtype=float)
    P = B / B.sum(axis=1, keepdims=True)
    pi = np.zeros(spec.size)
    idx = np.asarray(symbols)
    pi[idx] = stationary
    P[idx] = 0.0
    P[np.ix_(idx, idx)] = kernel
    return pi, P


def ambient_parry(spec: RoofSpec) -> tuple[np.ndarray, np.ndarray]:
    """Maximal-entropy Markov measure of the ambient shift (full support)."""
    pm = parry_measure(spec.ambient)
    return pm.stationary, pm.kernel


@dataclass(frozen=True)
class LiftedMeasure:
    symbols: tuple
    base_entropy: float
    measure_entropy: float      # -sum pi P log P, a numerical check of base_entropy
    roof_integral: float
    remainder: float
    lifted_entropy: float
    maximal: bool
    full_support: bool


def lift_markov(spec: RoofSpec, pi, P, m_max: int = 200, symbols=None,
                base_entropy: Optional[float] = None, maximal: bool = False) -> LiftedMeasure:
    """Abramov entropy of the lift of ``(pi, P)``, an upper estimate when truncated."""
    ri = roof_integral_markov(spec, pi, P, m_max)
    h = markov_entropy(pi, P)
    base = h if base_entropy is None else base_entropy
    syms = tuple(int(s) for s in np.nonzero(np.asarray(pi) > 0)[0]) if symbols is None else tuple(symbols)
    full = bool((np.asarray(pi) > 0).all() and np.array_equal(np.asarray(P) > 0, np.asarray(spec.ambient) > 0))
    return LiftedMeasure(syms, base, h, ri.value, ri.remainder, abramov(base, ri.value), maximal, full)


@dataclass(frozen=True)
class MMEReport:
    h_y: float
    components: tuple           # LiftedMeasure per irreducible component of Y
    flow_entropy: RootResult
    n: int
    blocks: Optional[tuple] = None

    @property
    def multiplicity(self) -> int:
        return sum(1 for c in self.components if c.maximal)

    @property
    def enclosure(self) -> tuple:
        return self.flow_entropy.enclosure

    @property
    def fully_supported(self) -> bool:
        """Whether some maximal lift charges every ambient cylinder."""
        return any(c.full_support for c in self.components if c.maximal)

    def to_dict(self) -> dict:
        comps = []
        for c in self.components:
            row = asdict(c)
            row["symbols"] = list(c.symbols)
            if self.blocks is not None:
                row["blocks"] = [list(self.blocks[s]) for s in c.symbols]
            comps.append(row)
        return {
            "h_y": self.h_y,
            "multiplicity": self.multiplicity,
            "flow_entropy": {
                "n": self.n,
                "root": self.flow_entropy.root,
                "residual": self.flow_entropy.residual,
                "enclosure": list(self.enclosure),
            },
            "components": comps,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def mme_report(spec: RoofSpec, n: int = 60, tol: float = 1e-10, m_max: int = 200) -> MMEReport:
    """Lift the Parry measure of every irreducible component of ``Y``.

    Components of entropy ``h(Y)`` give flow MMEs: ``rho = h(Y)`` on ``Y``,
    so their lifts have entropy exactly ``h(Y)/h(Y) = 1``, the flow entropy.
    """
    lifted = []
    for comp in irreducible_components(spec.target):
        maximal = abs(comp.entropy - spec.h_y) <= MAXIMALITY_TOL
        if len(comp.symbols) == 1:
            stationary, kernel = np.array([1.0]), np.array([[1.0]])
        else:
            pm = parry_measure(comp.matrix)
            stationary, kernel = pm.stationary, pm.kernel
        pi, P = embed_markov(spec, comp.symbols, stationary, kernel)
        # the Parry measure has entropy log lam of its component
        lifted.append(lift_markov(spec, pi, P, m_max, comp.symbols, comp.entropy, maximal))
    root = pressure_root(spec, n, tol=tol)
    blocks = spec.recoding.blocks if spec.recoding is not None else None
    return MMEReport(spec.h_y, tuple(lifted), root, n, blocks)
