"""Binarised neuron nodes, the {AND, OR, NOT} gadgets, and compilers around them.

A node with weights ``w`` in {-1, +1}^n and integer threshold ``c`` in
[-n, n] outputs +1 when ``w . x >= c`` and -1 otherwise.  Booleans map to
+-1 through false -> -1, true -> +1.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .boolfunc import AND, NOT, OR, XNOR, TruthTable, index_to_bits
from .errors import ArityMismatch, NotBoolean, TooWide, UnsupportedLeaf
from .graph import BOOL, PM1, EdgeDecl, Func, Network, Vertex, validate
from .netlist import NetlistBuilder

TT_TO_BNN_MAX_ARITY = 8


@dataclass(frozen=True)
class BnnNode:
    w: tuple[int, ...]
    c: int

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(int(x) for x in self.w))
        if any(x not in (-1, 1) for x in self.w):
            raise ValueError(f"weights must be +-1, got {self.w}")
        if not -self.n <= self.c <= self.n:
            raise ValueError(f"threshold {self.c} outside [-{self.n}, {self.n}]")

    @property
    def n(self) -> int:
        return len(self.w)

    def func(self) -> Func:
        return Func.bnn(self.w, self.c)


def bnn_eval(node: BnnNode, x: Sequence[int]) -> int:
    if len(x) != node.n:
        raise ArityMismatch(f"node of fan-in {node.n} applied to {len(x)} inputs")
    return 1 if sum(w * xi for w, xi in zip(node.w, x)) >= node.c else -1


def phi_hat(b: bool) -> int:
    return 1 if b else -1


def node_table(node: BnnNode) -> TruthTable:
    """Boolean table of ``node`` read through the +-1 bijection."""
    return TruthTable.from_function(node.n, lambda *x: bnn_eval(node, [phi_hat(b) for b in x]) == 1)


GADGETS = {
    "AND": BnnNode((1, 1), 2),
    "OR": BnnNode((1, 1), 0),
    "NOT": BnnNode((-1,), 1),
    "CONST_TRUE": BnnNode((), 0),
}
GADGET_TABLES = {"AND": AND, "OR": OR, "NOT": NOT, "CONST_TRUE": TruthTable.constant(True)}


def gadget(kind: str) -> BnnNode:
    try:
        return GADGETS[kind.upper()]
    except KeyError:
        raise ValueError(f"unknown gadget {kind!r}; choose from {sorted(GADGETS)}") from None


# -- circuits over {AND, OR, NOT, constants} -------------------------------

def _basis_kind(f: Func) -> str:
    if f.kind == "const" and len(f.values) == 1 and isinstance(f.values[0], bool):
        return "CONST_TRUE" if f.values[0] else "CONST_FALSE"
    if f.kind == "truth_table" and len(f.tables) == 1:
        t = f.tables[0]
        for name in ("AND", "OR", "NOT"):
            if t == GADGET_TABLES[name]:
                return name
    raise UnsupportedLeaf(f"{f} is not in the basis {{AND, OR, NOT, constants}}")


def circuit_to_bnn(net: Network) -> Network:
    """Replace every basis gate by its binarised-neuron gadget.

    Edges keep their names but become +-1 typed.  A false constant becomes a
    NOT gadget fed by a zero-input true gadget.
    """
    for e in net.edges:
        if e.dtype != BOOL:
            raise NotBoolean(f"edge {e.id} is {e.dtype}; circuits must be Boolean")
    if net.param_edges:
        raise UnsupportedLeaf("circuits with parameter edges are not supported")
    edges = [EdgeDecl(e.id, PM1) for e in net.edges]
    taken = {e.id for e in net.edges}
    vertices = []
    for v in net.vertices:
        kind = _basis_kind(v.func)
        if kind == "CONST_FALSE":
            top = _fresh(f"{v.outs[0]}__top", taken)
            edges.append(EdgeDecl(top, PM1))
            vertices.append(Vertex(f"{v.name}__top", GADGETS["CONST_TRUE"].func(), ins=(), outs=(top,)))
            vertices.append(Vertex(v.name, GADGETS["NOT"].func(), ins=(top,), outs=v.outs))
        else:
            vertices.append(Vertex(v.name, GADGETS[kind].func(), ins=v.ins, outs=v.outs))
    return Network(edges, vertices, net.priout)


def _fresh(name: str, taken: set[str]) -> str:
    base, i = name, 0
    while name in taken:
        i += 1
        name = f"{base}{i}"
    taken.add(name)
    return name


class _CircuitBuilder:
    def __init__(self, inputs: Sequence[str]):
        self.edges = [EdgeDecl(x, BOOL) for x in inputs]
        self.vertices: list[Vertex] = []
        self.count = 0

    def gate(self, func: Func, ins: Sequence[str], out: str | None = None) -> str:
        self.count += 1
        out = out or f"n{self.count}"
        self.edges.append(EdgeDecl(out, BOOL))
        self.vertices.append(Vertex(f"g{self.count}", func, ins=tuple(ins), outs=(out,)))
        return out

    def tree(self, table: TruthTable, xs: list[str], out: str | None = None) -> str:
        """Balanced 2-input tree of ``table`` over ``xs``."""
        while len(xs) > 1:
            nxt = []
            for i in range(0, len(xs) - 1, 2):
                last = len(xs) == 2
                nxt.append(self.gate(Func.table(table), xs[i : i + 2], out if last else None))
            if len(xs) % 2:
                nxt.append(xs[-1])
            xs = nxt
        return xs[0]


def tt_to_circuit(t: TruthTable, inputs: Sequence[str] | None = None, output: str = "y") -> Network:
    """Sum of products over {AND, OR, NOT, constants}, no minimisation."""
    inputs = list(inputs or [f"x{j}" for j in range(t.arity)])
    if len(inputs) != t.arity:
        raise ArityMismatch(f"{len(inputs)} input names for a table of arity {t.arity}")
    b = _CircuitBuilder(inputs)
    minterms = [idx for idx in range(t.size) if (t.mask >> idx) & 1]
    if not minterms or t.arity == 0:
        b.gate(Func.const(bool(minterms)), (), output)
        return Network(b.edges, b.vertices, (output,))
    negated: dict[str, str] = {}

    def literal(j: int, positive: bool) -> str:
        x = inputs[j]
        if positive:
            return x
        if x not in negated:
            negated[x] = b.gate(Func.table(NOT), (x,))
        return negated[x]

    products = []
    for idx in minterms:
        lits = [literal(j, v) for j, v in enumerate(index_to_bits(idx, t.arity))]
        products.append(b.tree(AND, lits))
    result = b.tree(OR, products, output)
    if result != output:
        # a single positive literal: route it through (x AND x)
        b.gate(Func.table(AND), (result, result), output)
    return Network(b.edges, b.vertices, (output,))


def tt_to_bnn(t: TruthTable) -> Network:
    """A network of binarised neurons computing ``t`` under the +-1 bijection."""
    if t.arity > TT_TO_BNN_MAX_ARITY:
        raise TooWide(f"arity {t.arity} exceeds the compilation guard {TT_TO_BNN_MAX_ARITY}")
    return circuit_to_bnn(tt_to_circuit(t))


# -- lowering a node to XNOR / popcount / compare --------------------------

def bnn_to_netlist(node: BnnNode) -> Network:
    """Boolean netlist for ``node``: per-input XNOR with the weight sign bit,
    popcount, and an unsigned compare against ``ceil((n + c) / 2)``.

    Inputs are ``x0 .. x{n-1}`` and the single output is ``y``.
    """
    n = node.n
    if n < 1:
        raise ArityMismatch("lowering needs at least one input")
    inputs = [f"x{i}" for i in range(n)]
    nl = NetlistBuilder(inputs)
    threshold = -((-(n + node.c)) // 2)  # ceil((n + c) / 2): w.x = 2*pop - n
    if threshold <= 0:
        out = nl.const(True)
    elif threshold > n:
        out = nl.const(False)
    else:
        agree = [nl.gate(XNOR, x, nl.const(w > 0)) for x, w in zip(inputs, node.w)]
        out = nl.at_least(nl.popcount(agree), threshold)
    net = nl.finish({"y": out}, ("y",))
    report = validate(net)
    assert report.ok, report.violations
    return net
