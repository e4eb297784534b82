"""
Partition sums, Q(r) and the pressure root
==========================================

The dynamic programme gives ``log Z_n`` exactly; the sandwich
``0 <= P_n(1) <= log(n C2)/n`` pins the pressure near zero, and the root
of ``c -> P_n(c)`` tends to 1.
"""

# %%
import time

from suspflow import oracle
from suspflow.pressure import pressure_estimate, pressure_root, q_table
from suspflow.roof import build_roof
from suspflow.sft import Sft

spec = build_roof(Sft.from_matrix([[1, 1], [1, 0]]), c=2.5)

# %%
qt = q_table(spec, 200)
print("Q(1) =", qt.q[0], " max Q =", qt.q.max())

# %%
pt = pressure_estimate(spec, 60)
for n in (1, 2, 5, 10, 20, 40, 60):
    print(n, pt.lower[n - 1], pt.pressure[n - 1], pt.upper[n - 1])

# %%
t0 = time.perf_counter()
root = pressure_root(spec, 60)
print("c_60 =", root.root, " enclosure", root.enclosure, f"({time.perf_counter() - t0:.2f} s)")

# %%
# Cross-check against explicit enumeration of all 2^12 words.
print(pt.log_z[11], oracle.brute_log_partition_sum(spec, 12))
