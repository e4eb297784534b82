"""
Measures of maximal entropy for the flow
========================================

Every maximal-entropy component of ``Y`` lifts to a flow measure of
entropy exactly 1; fully supported measures fall short.
"""

# %%
from suspflow.roof import build_roof
from suspflow.sft import Sft
from suspflow.suspension import ambient_parry, lift_markov, mme_report

examples = {
    "golden mean": [[1, 1], [1, 0]],
    "two full 2-shifts": [[1, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, 1], [0, 0, 1, 1]],
    "full 2-shift plus fixed point": [[1, 1, 0], [1, 1, 0], [0, 0, 1]],
}
for name, A in examples.items():
    rep = mme_report(build_roof(Sft.from_matrix(A)), n=40)
    print(f"{name}: multiplicity {rep.multiplicity}, enclosure {rep.enclosure}")
    for c in rep.components:
        print("   ", c.symbols, c.base_entropy, c.roof_integral, c.lifted_entropy)

# %%
# The Parry measure of the ambient full shift charges the region off Y.
spec = build_roof(Sft.from_matrix(examples["golden mean"]))
pi, P = ambient_parry(spec)
lm = lift_markov(spec, pi, P)
print("int rho =", lm.roof_integral, "+ at most", lm.remainder)
print("lifted entropy =", lm.lifted_entropy)
