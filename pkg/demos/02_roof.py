"""
The roof function
=================

``a_j`` decreases to ``h(Y)`` along triangular blocks, and ``g`` is ``-a_t``
where ``t`` is the first exit from ``Y``.
"""

# %%
import numpy as np

from suspflow.roof import build_roof, first_violation, g_eval, roof_eval
from suspflow.sft import Sft

spec = build_roof(Sft.from_matrix([[1, 1], [1, 0]]), c=2.5)
print("h(Y) =", spec.h_y, " c =", spec.c, " beta =", spec.beta)

# %%
aj = spec.aj
for j in (1, 2, 3, 4, 10, 100, 1000, aj.j_max):
    print(j, aj.block(j), aj.value(j), aj.value(j) - spec.h_y)
print("bound past the table:", aj.sup_beyond(aj.j_max))

# %%
for w in [(0, 1, 0), (0, 1, 1), (1, 1), (0, 0, 1, 1)]:
    ev = g_eval(spec, w)
    print(w, first_violation(spec, w), ev.kind, ev.lo, ev.hi)

# %%
# On a point of Y the roof is pinned between h(Y) and the tail sup of a_j.
for m in (1, 5, 20, 80):
    ev = roof_eval(spec, np.zeros(m + 1, dtype=int))
    print(m, ev.lo, ev.hi)
