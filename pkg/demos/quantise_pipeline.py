"""A dot-product and ReLU network taken from reals to a gate-level netlist.

Run: python3 demos/quantise_pipeline.py
"""

# %% real network, 4-bit fixed point (2 fractional bits), then bit-level cores
import numpy as np

from boolnet_forge.fixedpoint import FixedPointFormat
from boolnet_forge.quant import (
    DEMO_WEIGHTS,
    LossSpec,
    NetFunction,
    SampleSpec,
    check_commute,
    demo_pipeline,
    error_bound,
    estimate_metric,
    simplify,
)

g1, g2, qparams, g3 = demo_pipeline()
print("weights", DEMO_WEIGHTS, "->", {k: str(v.value) for k, v in qparams.items()})
print(f"netlist: {len(g3.vertices)} gates over {len(g3.inputs)} input bits")

# %% the netlist agrees with fixed-point arithmetic on every input
res = check_commute(g2, g3, qparams)
small = simplify(g3)
print(f"commutes on {res.assignments} assignments: {res.commutes}")
print(f"after simplify: {len(small.vertices)} gates, commutes {check_commute(g2, small, qparams).commutes}")

# %% quantisation error: sampled mean against the worst-case bound
for frac in range(2, 7):
    fmt = FixedPointFormat(frac + 3, frac)
    g1, g2, q, _ = demo_pipeline(fmt)
    bound = error_bound(g1, fmt, DEMO_WEIGHTS, (-1.0, 1.0))["d"]
    mean = estimate_metric(NetFunction(g1, DEMO_WEIGHTS), NetFunction(g2, q), LossSpec("absdiff"), SampleSpec(2000, seed=0))
    print(f"{fmt}: mean |error| {mean:.4f}  bound {bound:.4f}")

# %% a few concrete outputs
real, quant = NetFunction(g1, DEMO_WEIGHTS), NetFunction(g2, q)
for x, y in np.array([[0.3, -0.7], [0.9, 0.2], [-0.4, -0.4]]):
    print(f"x={x:+.1f} y={y:+.1f}  real {real((x, y))[0]:.4f}  fixed {quant((x, y))[0]:.4f}")
