"""Ripple-carry adders under the induced L1 metric.

Run: python3 demos/adder_lipschitz.py
"""

# %% the n-bit adder reads (a, b, carry-in) and writes (carry-out, s)
from boolnet_forge.graph import Func
from boolnet_forge.lipschitz import CARRY_PASS, adder_metrics, min_lipschitz, replace_leaves, ripple_adder

for n in range(1, 5):
    d, e = adder_metrics(n)
    report = min_lipschitz(ripple_adder(n), d, e)
    print(f"n={n}  min constant {report.min_constant}  over {report.pair_count} input pairs")

# %% swap every full adder for a leaf that forwards the carry and drops the sum bit
for n in range(1, 5):
    d, e = adder_metrics(n)
    broken = replace_leaves(ripple_adder(n), {Func.full_adder(): CARRY_PASS})
    report = min_lipschitz(broken, d, e)
    i, j = report.witness
    print(f"n={n}  carry-pass leaf: {report.min_constant} (witness inputs {i} and {j})")

# %% the domain metric, spelled out
d, e = adder_metrics(2)
print("d =", d)
print("e =", e)
