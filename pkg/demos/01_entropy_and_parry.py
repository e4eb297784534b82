"""
Entropy, components and the Parry measure
=========================================

Word counts of the golden mean shift are Fibonacci numbers, and the
entropy is the log of the golden ratio.
"""

# %%
import numpy as np

from suspflow.sft import (Sft, entropy_spectral, irreducible_components, language_table,
                          parry_measure, to_matrix)

golden = Sft.from_forbidden_words(2, [(1, 1)])
A = to_matrix(golden)
print(A)

# %%
# Exact counts, and how far (1/n) log |L_n| is from log lambda.
table = language_table(A, 40)
sd = entropy_spectral(A)
for n in (1, 2, 3, 4, 10, 40):
    print(n, table.count(n), table.log_count(n) / n - sd.entropy)

# %%
# The Parry measure: pi is proportional to (phi^2, 1).
pm = parry_measure(A)
print("pi =", pm.stationary)
print("kernel =\n", pm.kernel)
print("entropy - log lambda =", pm.entropy - sd.entropy)

# %%
# Two disjoint full 2-shifts: a reducible matrix with two maximal components.
two = np.kron(np.eye(2, dtype=int), np.ones((2, 2), dtype=int))
for comp in irreducible_components(two):
    print(comp.symbols, comp.entropy)
