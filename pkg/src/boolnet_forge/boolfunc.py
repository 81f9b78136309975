"""Truth tables over B^K and exhaustive tabulation of Boolean networks.

Assignment ``x = (x_0, ..., x_{K-1})`` has index ``sum(x_j << j)``; a table
stores one output bit per index.  As text a table is the string of its
outputs in index order, so ``"0110"`` is XOR and ``"0001"`` is AND.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ArityMismatch, NotBoolean, TooWide

TABULATE_MAX_INPUTS = 24


@dataclass(frozen=True)
class TruthTable:
    arity: int
    mask: int  # bit i holds the output for assignment index i

    def __post_init__(self):
        if self.arity < 0:
            raise ValueError("arity must be non-negative")
        if not 0 <= self.mask < (1 << self.size):
            raise ValueError(f"mask does not fit 2**{self.arity} entries")

    @property
    def size(self) -> int:
        return 1 << self.arity

    @classmethod
    def from_bits(cls, bits: str) -> "TruthTable":
        n = len(bits)
        if n == 0 or n & (n - 1) or set(bits) - {"0", "1"}:
            raise ValueError(f"bad truth-table string {bits!r}: need 2**K chars of 0/1")
        mask = sum(1 << i for i, ch in enumerate(bits) if ch == "1")
        return cls(n.bit_length() - 1, mask)

    @classmethod
    def from_function(cls, arity: int, fn: Callable[..., bool]) -> "TruthTable":
        mask = 0
        for idx in range(1 << arity):
            if fn(*index_to_bits(idx, arity)):
                mask |= 1 << idx
        return cls(arity, mask)

    @classmethod
    def constant(cls, value: bool, arity: int = 0) -> "TruthTable":
        return cls(arity, (1 << (1 << arity)) - 1 if value else 0)

    @classmethod
    def projection(cls, j: int, arity: int) -> "TruthTable":
        return cls.from_function(arity, lambda *x: x[j])

    @property
    def bits(self) -> str:
        return "".join("1" if (self.mask >> i) & 1 else "0" for i in range(self.size))

    def __str__(self):
        return self.bits

    def __call__(self, *x: bool) -> bool:
        return tt_eval(self, x)

    def is_constant(self) -> bool:
        return self.mask in (0, (1 << self.size) - 1)

    def cofactor(self, j: int, value: bool) -> "TruthTable":
        """Fix input ``j`` to ``value``; the result has arity ``K - 1``."""
        if not 0 <= j < self.arity:
            raise ArityMismatch(f"input {j} out of range for arity {self.arity}")
        mask = 0
        out = 0
        for idx in range(self.size):
            if bool((idx >> j) & 1) != value:
                continue
            if (self.mask >> idx) & 1:
                mask |= 1 << out
            out += 1
        return TruthTable(self.arity - 1, mask)

    def permute(self, order: Sequence[int]) -> "TruthTable":
        """Table of ``x -> self(x[order[0]], ..., x[order[K-1]])``."""
        return TruthTable.from_function(self.arity, lambda *x: self(*(x[i] for i in order)))


def index_to_bits(idx: int, k: int) -> tuple[bool, ...]:
    return tuple(bool((idx >> j) & 1) for j in range(k))


def bits_to_index(x: Iterable[bool]) -> int:
    return sum(1 << j for j, b in enumerate(x) if b)


def tt_eval(t: TruthTable, x: Sequence[bool]) -> bool:
    if len(x) != t.arity:
        raise ArityMismatch(f"table of arity {t.arity} applied to {len(x)} inputs")
    return bool((t.mask >> bits_to_index(x)) & 1)


def essential_inputs(t: TruthTable) -> frozenset[int]:
    """Inputs whose flip changes the output for at least one assignment."""
    found = set()
    for j in range(t.arity):
        step = 1 << j
        for idx in range(t.size):
            if not idx & step and ((t.mask >> idx) ^ (t.mask >> (idx | step))) & 1:
                found.add(j)
                break
    return frozenset(found)


def nondegenerate_tables(k: int) -> list[TruthTable]:
    """All arity-``k`` tables that depend on every input, sorted by bit string."""
    if k < 1:
        raise ValueError("k must be at least 1")
    tables = [TruthTable(k, m) for m in range(1 << (1 << k))]
    keep = [t for t in tables if len(essential_inputs(t)) == k]
    return sorted(keep, key=lambda t: t.bits)


AND = TruthTable.from_bits("0001")
OR = TruthTable.from_bits("0111")
XOR = TruthTable.from_bits("0110")
XNOR = TruthTable.from_bits("1001")
NAND = TruthTable.from_bits("1110")
NOR = TruthTable.from_bits("1000")
NOT = TruthTable.from_bits("10")
BUF = TruthTable.from_bits("01")
# select ? b : a with inputs (a, b, select)
MUX = TruthTable.from_function(3, lambda a, b, s: b if s else a)
FA_SUM = TruthTable.from_function(3, lambda a, b, c: a ^ b ^ c)
FA_CARRY = TruthTable.from_function(3, lambda a, b, c: (a and b) or (c and (a or b)))


# -- tabulation -------------------------------------------------------------

def _boolean_kinds(net) -> dict[str, str]:
    kinds = {}
    for e in net.edges:
        if e.dtype.kind not in ("bool", "pm1"):
            raise NotBoolean(f"edge {e.id} has type {e.dtype}; tabulation needs bool or pm1 edges")
        kinds[e.id] = e.dtype.kind
    return kinds


def tabulate(net, params=None, *, method: str = "auto") -> list[TruthTable]:
    """One truth table per primary output, over the network's inputs.

    Input ``j`` of the tables is the ``j``-th entry of ``net.inputs``.  Edges
    typed ``pm1`` are read through the bijection false -> -1, true -> +1.
    ``method`` selects the bit-parallel simulator (``"parallel"``), the
    per-assignment interpreter (``"interpret"``), or the first one that
    applies (``"auto"``).
    """
    from . import graph

    kinds = _boolean_kinds(net)
    inputs = net.inputs
    if len(inputs) > TABULATE_MAX_INPUTS:
        raise TooWide(f"{len(inputs)} input bits exceed the tabulation guard of {TABULATE_MAX_INPUTS}")
    params = dict(params or {})
    if method == "auto":
        method = "parallel" if graph.supports_bit_parallel(net) else "interpret"
    if method == "parallel":
        masks = graph.simulate_bit_parallel(net, params)
        return [TruthTable(len(inputs), masks[e]) for e in net.priout]
    if method != "interpret":
        raise ValueError(f"unknown tabulation method {method!r}")

    k = len(inputs)
    out_masks = [0] * len(net.priout)
    for idx in range(1 << k):
        x = index_to_bits(idx, k)
        binding = {e: _to_kind(b, kinds[e]) for e, b in zip(inputs, x)}
        result = graph.evaluate(net, params, binding)
        for o, e in enumerate(net.priout):
            if _from_kind(result[e]):
                out_masks[o] |= 1 << idx
    return [TruthTable(k, m) for m in out_masks]


def _to_kind(b: bool, kind: str):
    return (1 if b else -1) if kind == "pm1" else b


def _from_kind(v) -> bool:
    if isinstance(v, bool):
        return v
    return v == 1
