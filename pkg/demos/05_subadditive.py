"""
The triangular averaging inequality
===================================
"""

# %%
from suspflow.sft import language_table
from suspflow.subadditive import lemma_inequality, random_subadditive, valid_pairs

seq = random_subadditive(12, seed=1)
print([round(x, 3) for x in seq])
for n, k in valid_pairs(len(seq)):
    lhs, rhs, holds = lemma_inequality(seq, n, k)
    print(n, k, round(lhs - rhs, 6), holds)

# %%
# The log word counts of a shift are sub-additive.
t = language_table([[1, 1], [1, 0]], 30)
logs = [t.log_count(n) for n in range(1, 31)]
gaps = [lhs - rhs for lhs, rhs, _ in (lemma_inequality(logs, n, k) for n, k in valid_pairs(30))]
print("all hold:", min(gaps) >= 0, " smallest gap:", min(gaps))
