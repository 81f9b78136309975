"""Binarised neurons as a complete gate basis, and their XNOR/popcount lowering.

Run: python3 demos/bnn_compile.py
"""

# %% one neuron per gate: +1 when the weighted sum reaches the threshold
from boolnet_forge.bnn import GADGETS, BnnNode, bnn_to_netlist, node_table, tt_to_bnn
from boolnet_forge.boolfunc import TruthTable, tabulate

for kind in ("AND", "OR", "NOT"):
    node = GADGETS[kind]
    print(f"{kind:<4} w={node.w} c={node.c:+d}  table {node_table(node).bits}")

# %% any table compiles through sum-of-products into such neurons
carry = TruthTable.from_bits("00010111")
net = tt_to_bnn(carry)
print(f"majority: {len(net.vertices)} neurons, round trip {tabulate(net) == [carry]}")

# %% a single neuron lowered to XNOR gates, a popcount tree and a comparator
node = BnnNode((1, -1, 1), 1)
low = bnn_to_netlist(node)
print(f"w={node.w} c={node.c}: {len(low.vertices)} gates, table {tabulate(low)[0].bits} vs {node_table(node).bits}")
