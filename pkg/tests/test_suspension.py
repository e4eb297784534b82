import json
import math

import numpy as np
import pytest

from suspflow.sft import parry_measure
from suspflow.suspension import (
    abramov,
    ambient_parry,
    embed_markov,
    lift_markov,
    mme_report,
    roof_integral_markov,
)


def test_abramov():
    assert abramov(0.4, 0.4) == 1
    assert abramov(math.log(2), 2 * math.log(2)) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        abramov(1.0, 0.0)


def test_parry_of_y_has_integral_h(golden):
    pm = parry_measure(golden.target)
    ri = roof_integral_markov(golden, pm.stationary, pm.kernel)
    assert ri.value == golden.h_y
    assert ri.remainder == 0
    assert ri.never == 1.0


def _monte_carlo_roof(spec, n_samples, seed):
    """Sample rho = a_t for i.i.d. fair bits, t = first index with x_t = x_{t+1} = 1."""
    rng = np.random.default_rng(seed)
    a = np.asarray(spec.aj.values)
    prev = rng.integers(0, 2, n_samples)
    out = np.full(n_samples, np.nan)
    active = np.arange(n_samples)
    t = 1
    while active.size:
        nxt = rng.integers(0, 2, active.size)
        hit = (prev[active] == 1) & (nxt == 1)
        out[active[hit]] = a[t - 1]
        prev[active] = nxt
        active = active[~hit]
        t += 1
    return out


def test_bernoulli_against_monte_carlo(golden):
    pi = np.array([0.5, 0.5])
    P = np.full((2, 2), 0.5)
    ri = roof_integral_markov(golden, pi, P, m_max=200)
    assert ri.never == pytest.approx(0, abs=1e-12)
    # first violation at 1 needs x1 = x2 = 1
    assert ri.violation_probs[0] == pytest.approx(0.25, abs=1e-15)
    samples = _monte_carlo_roof(golden, 10**6, seed=11)
    mean, se = samples.mean(), samples.std(ddof=1) / math.sqrt(samples.size)
    assert abs(mean - ri.value) <= 3 * se + ri.remainder


def test_truncation_consistency(golden):
    pi, P = ambient_parry(golden)
    r100 = roof_integral_markov(golden, pi, P, m_max=100)
    r200 = roof_integral_markov(golden, pi, P, m_max=200)
    assert r100.value <= r200.value + 1e-15
    assert r200.value - r100.value <= r100.remainder


def test_rejects_non_stationary(golden):
    with pytest.raises(ValueError):
        roof_integral_markov(golden, [0.9, 0.1], np.full((2, 2), 0.5))


def test_rejects_bad_m_max(golden):
    pi, P = ambient_parry(golden)
    with pytest.raises(ValueError):
        roof_integral_markov(golden, pi, P, m_max=golden.aj.j_max + 1)


def test_full_support_gap(golden):
    pi, P = ambient_parry(golden)
    lm = lift_markov(golden, pi, P)
    rep = mme_report(golden, n=30)
    assert lm.full_support
    assert lm.roof_integral > golden.h_y
    assert lm.lifted_entropy < rep.enclosure[1]
    assert lm.lifted_entropy < 1


def test_embed_markov(two_components):
    pm = parry_measure(np.ones((2, 2)))
    pi, P = embed_markov(two_components, (2, 3), pm.stationary, pm.kernel)
    np.testing.assert_allclose(pi, [0, 0, 0.5, 0.5])
    np.testing.assert_allclose(P.sum(axis=1), 1)
    np.testing.assert_allclose(pi @ P, pi, atol=1e-15)


class TestReport:
    def test_golden(self, golden):
        rep = mme_report(golden, n=60)
        assert rep.multiplicity == 1
        assert not rep.fully_supported
        (comp,) = rep.components
        assert comp.lifted_entropy == 1.0
        assert comp.measure_entropy == pytest.approx(golden.h_y, abs=1e-10)
        lo, hi = rep.enclosure
        assert lo == 1 and hi - lo <= math.log(60 * 1.2360679774997896) / (60 * golden.h_y)

    def test_two_components(self, two_components):
        rep = mme_report(two_components, n=30)
        assert rep.multiplicity == 2
        assert [c.lifted_entropy for c in rep.components] == [1.0, 1.0]

    def test_mixed(self, mixed):
        rep = mme_report(mixed, n=30)
        assert rep.multiplicity == 1
        assert [c.maximal for c in rep.components] == [True, False]
        assert rep.components[1].symbols == (2,)

    def test_json_deterministic(self, two_components):
        a = mme_report(two_components, n=20).to_json()
        b = mme_report(two_components, n=20).to_json()
        assert a == b
        assert json.loads(a)["multiplicity"] == 2
