"""Reversed-carry two-node experiment: k-Lipschitz node pairs and decouplings.

Topology (carry flowing from the most significant node)::

    (c, a1) -> f1 -> (s1, t)
    (t, a0) -> f0 -> (s0, q)

Each node is a pair of arity-2 tables ``(g_s, g_t)`` applied to
``(carry_in, a_i)``.  The domain metric is ``|w3(c, a1, a0) - w3(c', a1', a0')|``
and the output metric ``|w3(s1, s0, q) - w3(s1', s0', q')|``.
"""

from __future__ import annotations

import itertools
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .boolfunc import TruthTable, nondegenerate_tables
from .coding import InducedMetric, StdBinary
from .errors import IndexOutOfRange, SignatureMismatch, TooLarge
from .graph import BOOL, EdgeDecl, Func, Network, Vertex
from .lipschitz import PairSpace, is_k_lipschitz

BICLIQUE_GUARD = 10**6


@dataclass(frozen=True)
class NodePair:
    g_s: TruthTable
    g_t: TruthTable

    def __post_init__(self):
        if self.g_s.arity != 2 or self.g_t.arity != 2:
            raise SignatureMismatch("node functions are arity-2 tables")

    def __str__(self):
        return f"({self.g_s.bits},{self.g_t.bits})"


@lru_cache(maxsize=None)
def candidates() -> tuple[NodePair, ...]:
    """The 100 node choices: every (sum, carry) pair of nondegenerate tables."""
    tabs = nondegenerate_tables(2)
    return tuple(NodePair(s, t) for s in tabs for t in tabs)


@dataclass(frozen=True)
class Convention:
    """Bit-significance and carry-direction choices for the experiment.

    The primary convention reads ``(c, a1, a0)`` and ``(s1, s0, q)`` with the
    leftmost bit most significant and lets the carry run from ``f1`` to ``f0``.
    """

    reverse_inputs: bool = False
    reverse_outputs: bool = False
    carry_from_low: bool = False

    @property
    def name(self) -> str:
        return (
            f"in={'lsb' if self.reverse_inputs else 'msb'}-first,"
            f"out={'lsb' if self.reverse_outputs else 'msb'}-first,"
            f"carry={'f0->f1' if self.carry_from_low else 'f1->f0'}"
        )

    def metrics(self) -> tuple[InducedMetric, InducedMetric]:
        d = InducedMetric.concat([StdBinary(3)])
        e = InducedMetric.concat([StdBinary(3)])
        return (d.reversed() if self.reverse_inputs else d, e.reversed() if self.reverse_outputs else e)


PRIMARY = Convention()
CONVENTIONS = tuple(Convention(*flags) for flags in itertools.product((False, True), repeat=3))


def two_node_network(f1: NodePair, f0: NodePair, carry_from_low: bool = False) -> Network:
    """Two-node network with inputs ``(c, a1, a0)`` and outputs ``(s1, s0, q)``.

    By default ``f1`` consumes the external carry and feeds ``f0``; with
    ``carry_from_low`` the chain runs ``f0 -> f1`` as in a ripple adder.
    """
    for f in (f1, f0):
        if not isinstance(f, NodePair):
            raise SignatureMismatch(f"expected a NodePair, got {f!r}")
    edges = [EdgeDecl(e, BOOL) for e in ("c", "a1", "a0", "t", "s1", "s0", "q")]
    if carry_from_low:
        vertices = [
            Vertex("f0", Func.table(f0.g_s, f0.g_t), ins=("c", "a0"), outs=("s0", "t")),
            Vertex("f1", Func.table(f1.g_s, f1.g_t), ins=("t", "a1"), outs=("s1", "q")),
        ]
    else:
        vertices = [
            Vertex("f1", Func.table(f1.g_s, f1.g_t), ins=("c", "a1"), outs=("s1", "t")),
            Vertex("f0", Func.table(f0.g_s, f0.g_t), ins=("t", "a0"), outs=("s0", "q")),
        ]
    return Network(edges, vertices, ("s1", "s0", "q"))



def _node_tables(f1: NodePair, f0: NodePair, carry_from_low: bool) -> list[TruthTable]:
    """Output tables of :func:`two_node_network` computed directly from the node tables."""
    masks = [0, 0, 0]
    for idx in range(8):
        c, a1, a0 = bool(idx & 1), bool(idx & 2), bool(idx & 4)
        if carry_from_low:
            s0, t = f0.g_s(c, a0), f0.g_t(c, a0)
            s1, q = f1.g_s(t, a1), f1.g_t(t, a1)
        else:
            s1, t = f1.g_s(c, a1), f1.g_t(c, a1)
            s0, q = f0.g_s(t, a0), f0.g_t(t, a0)
        for o, bit in enumerate((s1, s0, q)):
            if bit:
                masks[o] |= 1 << idx
    return [TruthTable(3, m) for m in masks]


def pair_is_k_lipschitz(f1: NodePair, f0: NodePair, k, convention: Convention = PRIMARY, space=None) -> bool:
    d, e = convention.metrics()
    tables = _node_tables(f1, f0, convention.carry_from_low)
    ok, _ = is_k_lipschitz(tables, d, e, k, space=space)
    return ok


def _scan(args) -> list[tuple[int, int]]:
    lo, hi, k, convention = args
    cands = candidates()
    n = len(cands)
    space = PairSpace(convention.metrics()[0])
    return [
        divmod(flat, n)
        for flat in range(lo, hi)
        if pair_is_k_lipschitz(cands[flat // n], cands[flat % n], k, convention, space)
    ]


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("BOOLNET_JOBS", "1")))
    except ValueError:
        return 1


def enumerate_klipschitz_pairs(k=2, *, convention: Convention = PRIMARY, jobs: int | None = None) -> list[tuple[int, int]]:
    """Sorted ``(f1 index, f0 index)`` pairs over the 100 x 100 grid whose network is k-Lipschitz.

    The grid is split into contiguous index ranges when ``jobs > 1``;
    results are identical for every worker count.
    """
    k = Fraction(k)
    total = len(candidates()) ** 2
    jobs = default_jobs() if jobs is None else max(1, jobs)
    if jobs == 1:
        return _scan((0, total, k, convention))
    bounds = [total * i // jobs for i in range(jobs + 1)]
    chunks = [(bounds[i], bounds[i + 1], k, convention) for i in range(jobs)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        parts = list(pool.map(_scan, chunks))
    return sorted(p for part in parts for p in part)


def calibrate(k=2, jobs: int | None = None) -> list[tuple[Convention, int]]:
    """Pair counts for each of the eight bit-order / carry-direction conventions."""
    return [(c, len(enumerate_klipschitz_pairs(k, convention=c, jobs=jobs))) for c in CONVENTIONS]


# -- bipartite graph and bicliques -----------------------------------------

@dataclass(frozen=True)
class BipartiteGraph:
    left: tuple[NodePair, ...]
    right: tuple[NodePair, ...]
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "left", tuple(self.left))
        object.__setattr__(self, "right", tuple(self.right))
        object.__setattr__(self, "edges", frozenset(self.edges))
        for u, v in self.edges:
            if not (0 <= u < len(self.left) and 0 <= v < len(self.right)):
                raise IndexOutOfRange(f"edge ({u}, {v}) outside {len(self.left)} x {len(self.right)}")

    def neighbours(self) -> list[int]:
        """Right-neighbourhood of each left vertex as a bitset."""
        nb = [0] * len(self.left)
        for u, v in self.edges:
            nb[u] |= 1 << v
        return nb


def build_bipartite(pairs: Iterable[tuple[int, int]]) -> BipartiteGraph:
    cands = candidates()
    return BipartiteGraph(cands, cands, frozenset((int(u), int(v)) for u, v in pairs))


@dataclass(frozen=True)
class Biclique:
    S1: tuple[int, ...]
    S0: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "S1", tuple(sorted(self.S1)))
        object.__setattr__(self, "S0", tuple(sorted(self.S0)))

    @property
    def size(self) -> tuple[int, int]:
        return (len(self.S1), len(self.S0))

    @property
    def edge_count(self) -> int:
        return len(self.S1) * len(self.S0)

    def is_biclique_of(self, g: BipartiteGraph) -> bool:
        return all((u, v) in g.edges for u in self.S1 for v in self.S0)

    def to_json(self) -> dict:
        return {"S1": list(self.S1), "S0": list(self.S0), "size": list(self.size)}


def _members(bits: int) -> tuple[int, ...]:
    out, i = [], 0
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def maximal_bicliques(g: BipartiteGraph, *, min_edges: int = 1) -> Iterator[Biclique]:
    """Every closed biclique (maximal on both sides) with at least ``min_edges`` edges.

    Close-by-one enumeration over left vertices: each closed pair is reached
    exactly once via its canonical generator.
    """
    yield from _closed_pairs(g, lambda a, b: a * b < min_edges, record=lambda a, b: a * b >= min_edges)


def _closed_pairs(g: BipartiteGraph, prune, record) -> Iterator[Biclique]:
    nb = g.neighbours()
    n_left = len(g.left)
    all_right = (1 << len(g.right)) - 1

    def closure(right: int) -> int:
        return sum(1 << u for u in range(n_left) if nb[u] & right == right)

    def grow(left: int, right: int, start: int):
        if record(bin(left).count("1"), bin(right).count("1")):
            yield Biclique(_members(left), _members(right))
        for i in range(start, n_left):
            if (left >> i) & 1:
                continue
            r2 = right & nb[i]
            if not r2:
                continue
            l2 = closure(r2)
            # canonical: the closure adds nothing below i that was not already in left
            if (l2 & ~left) & ((1 << i) - 1):
                continue
            reach = bin(l2 | sum(1 << u for u in range(i + 1, n_left) if nb[u] & r2)).count("1")
            if prune(reach, bin(r2).count("1")):
                continue
            yield from grow(l2, r2, i + 1)

    yield from grow(closure(all_right), all_right, 0)


def max_edge_biclique(g: BipartiteGraph) -> Biclique:
    """Exact maximum-edge biclique by branch and bound.

    Ties prefer the larger ``S1`` and then the lexicographically smallest
    index lists.
    """
    if len(g.left) * len(g.right) > BICLIQUE_GUARD:
        raise TooLarge(f"{len(g.left)} x {len(g.right)} exceeds the exact-search guard {BICLIQUE_GUARD}")
    best = Biclique((), ())
    best_key = (0, 0, (), ())

    def key(b: Biclique):
        return (-b.edge_count, -len(b.S1), b.S1, b.S0)

    incumbent = [0]

    def prune(left_reach: int, right: int) -> bool:
        return left_reach * right < incumbent[0]

    def record(a: int, b: int) -> bool:
        return a * b >= incumbent[0] and a * b > 0

    for b in _closed_pairs(g, prune, record):
        if best.edge_count == 0 or key(b) < best_key:
            best, best_key = b, key(b)
            incumbent[0] = b.edge_count
    return best


def find_biclique(g: BipartiteGraph, s1: int, s0: int) -> Biclique | None:
    """A biclique with exactly ``s1`` left and ``s0`` right vertices, if one exists."""
    for b in maximal_bicliques(g, min_edges=max(1, s1 * s0)):
        if len(b.S1) >= s1 and len(b.S0) >= s0:
            return Biclique(b.S1[:s1], b.S0[:s0])
    return None


def verify_decoupling(g: BipartiteGraph, b: Biclique, k=2, convention: Convention = PRIMARY) -> bool:
    """Recompute every combination in ``S1 x S0`` from the node functions themselves."""
    for u in b.S1:
        if not 0 <= u < len(g.left):
            raise IndexOutOfRange(f"left index {u}")
    for v in b.S0:
        if not 0 <= v < len(g.right):
            raise IndexOutOfRange(f"right index {v}")
    d, e = convention.metrics()
    for u in b.S1:
        for v in b.S0:
            net = two_node_network(g.left[u], g.right[v], convention.carry_from_low)
            ok, _ = is_k_lipschitz(net, d, e, k)
            if not ok:
                return False
    return True


def pair_rows(pairs: Sequence[tuple[int, int]]) -> list[tuple[str, str, str, str]]:
    cands = candidates()
    return [(cands[u].g_s.bits, cands[u].g_t.bits, cands[v].g_s.bits, cands[v].g_t.bits) for u, v in pairs]
