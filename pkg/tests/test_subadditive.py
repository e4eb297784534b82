import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from suspflow.sft import language_table
from suspflow.subadditive import (
    SubadditiveSeq,
    check_subadditive,
    lemma_inequality,
    random_subadditive,
    valid_pairs,
)


def test_additive():
    assert check_subadditive(list(range(1, 20))) == (True, None)


def test_golden_log_counts():
    t = language_table([[1, 1], [1, 0]], 24)
    assert check_subadditive([t.log_count(n) for n in range(1, 25)])[0]


def test_violation_witness():
    assert check_subadditive((1, 3)) == (False, (1, 1))
    with pytest.raises(ValueError):
        SubadditiveSeq((1, 3))


def test_exact_mode_has_no_slack():
    b = [Fraction(1), Fraction(2) + Fraction(1, 10**15)]
    assert check_subadditive(b) == (False, (1, 1))


def test_lemma_examples():
    assert lemma_inequality([2.5], 1, 1) == (2.5, 2.5, True)
    lhs, rhs, holds = lemma_inequality(list(range(1, 7)), 3, 2)
    assert (lhs, rhs, holds) == (15, 15, True)


def test_lemma_errors():
    with pytest.raises(ValueError):
        lemma_inequality([1, 2, 3], 2, 3)
    with pytest.raises(IndexError):
        lemma_inequality([1, 2, 3], 3, 1)


def test_lemma_fails_without_subadditivity():
    b = [1, 10, 10, 10]
    assert not lemma_inequality(b, 2, 1)[2]


def test_valid_pairs():
    assert list(valid_pairs(4)) == [(1, 1), (2, 1), (2, 2), (3, 1)]


def test_generator_deterministic():
    assert random_subadditive(20, 5) == random_subadditive(20, 5)
    assert random_subadditive(20, 5) != random_subadditive(20, 6)


def test_single_term():
    (b1,) = random_subadditive(1, 0)
    assert b1 > 0


@given(st.integers(1, 30), st.integers(0, 2**32 - 1), st.booleans())
def test_lemma_on_generated(N, seed, exact):
    seq = random_subadditive(N, seed, exact=exact)
    assert check_subadditive(seq)[0]
    for n, k in valid_pairs(N):
        assert lemma_inequality(seq, n, k)[2]


def test_lemma_on_log_counts_gives_sum_bound(golden):
    c = golden.c
    s_max = 200
    for s in range(1, s_max + 1):
        lhs = math.fsum(golden.aj.values[:s])
        assert lhs >= golden.language.log_count(s) + c * math.sqrt(s) - 1e-12 * lhs
