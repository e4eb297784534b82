"""
Recoding a 2-step shift
=======================

Forbidding ``111`` needs memory two; on blocks of length 2 it becomes a
1-step shift inside the overlap shift.
"""

# %%
from suspflow.oracle import brute_language_count
from suspflow.roof import build_roof
from suspflow.sft import Sft, higher_block_recode, language_count

sft = Sft.from_forbidden_words(2, [(1, 1, 1)])
rec = higher_block_recode(sft)
print(rec.blocks)
print("ambient\n", rec.ambient)
print("target\n", rec.target)

# %%
for n in range(1, 9):
    print(n, language_count(rec.target, n), brute_language_count(sft, n + 1))

# %%
spec = build_roof(sft)
print("h =", spec.h_y, " beta =", spec.beta)
