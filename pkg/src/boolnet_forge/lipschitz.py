"""Exact Lipschitz constants of Boolean functions under induced metrics.

Every unordered pair of distinct admissible inputs is examined.  Distances
are integer norms times a rational scale, so the minimal constant is an
exact :class:`~fractions.Fraction` (or ``math.inf`` when two inputs at
distance zero map to different outputs).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .boolfunc import TruthTable, tabulate
from .coding import BIT, InducedMetric, StdBinary
from .errors import InvalidPattern, SignatureMismatch, TooWide, WidthMismatch
from .graph import BOOL, EdgeDecl, Func, Network, Vertex, validate

MAX_DOMAIN_BITS = 16
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class LipschitzReport:
    min_constant: Fraction | float  # math.inf when no finite constant exists
    witness: tuple[int, int] | None  # assignment indices (i < j)
    pair_count: int
    width: int = 0

    @property
    def infinite(self) -> bool:
        return self.min_constant == math.inf

    def witness_bits(self) -> tuple[str, str] | None:
        """The witness as bit strings in input-vector order."""
        if self.witness is None:
            return None
        return tuple("".join("1" if (i >> j) & 1 else "0" for j in range(self.width)) for i in self.witness)

    def to_json(self) -> dict:
        k = self.min_constant
        return {
            "min_constant": "inf" if self.infinite else f"{k.numerator}/{k.denominator}",
            "witness": list(self.witness_bits()) if self.witness else None,
            "pairs": self.pair_count,
        }


def _assignment_bits(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    return ((idx[:, None] >> np.arange(n, dtype=np.int64)) & 1).astype(np.int64)


def _output_bits(tables: Sequence[TruthTable], n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    cols = []
    for t in tables:
        # masks can exceed 64 bits; unpack through Python ints
        bits = np.frombuffer(t.mask.to_bytes(((1 << n) + 7) // 8, "little"), dtype=np.uint8)
        cols.append(np.unpackbits(bits, bitorder="little")[: 1 << n].astype(np.int64))
    if not cols:
        return np.zeros((len(idx), 0), dtype=np.int64)
    return np.stack(cols, axis=1)


class PairSpace:
    """Decoded inputs of a domain metric, reusable across many functions."""

    def __init__(self, d: InducedMetric, n_inputs: int | None = None):
        n = d.width if n_inputs is None else n_inputs
        if n != d.width:
            raise WidthMismatch(f"domain metric covers {d.width} bits but the function has {n} inputs")
        if n > MAX_DOMAIN_BITS:
            raise TooWide(f"{n} input bits exceed the exhaustive guard of {MAX_DOMAIN_BITS}")
        self.d = d
        self.width = n
        values, valid = d.decode_matrix(_assignment_bits(n))
        self.index = np.flatnonzero(valid)  # admissible assignment indices
        self.values = values[self.index]

    @property
    def pair_count(self) -> int:
        m = len(self.index)
        return m * (m - 1) // 2

    def _norm(self, diff: np.ndarray, norm: str) -> np.ndarray:
        a = np.abs(diff)
        if norm == "Linf":
            return a.max(axis=-1, initial=0)
        if norm == "Hamming":
            return (a != 0).sum(axis=-1)
        return a.sum(axis=-1)

    def blocks(self, out_values: np.ndarray, e: InducedMetric):
        """Yield ``(rows, cols, d_raw, e_raw)`` over all pairs row < col."""
        m = len(self.index)
        dims = max(self.values.shape[1] + out_values.shape[1], 1)
        step = max(1, _BLOCK_ELEMS // max(m * dims, 1))
        cols = np.arange(m)
        for r0 in range(0, m, step):
            rows = np.arange(r0, min(m, r0 + step))
            d_raw = self._norm(self.values[rows, None, :] - self.values[None, :, :], self.d.norm)
            e_raw = self._norm(out_values[rows, None, :] - out_values[None, :, :], e.norm)
            upper = cols[None, :] > rows[:, None]
            yield rows, cols, d_raw, e_raw, upper

    def decode_outputs(self, tables: Sequence[TruthTable], e: InducedMetric) -> np.ndarray:
        if len(tables) != e.width:
            raise WidthMismatch(f"output metric covers {e.width} bits but the function has {len(tables)} outputs")
        values, valid = e.decode_matrix(_output_bits(tables, self.width)[self.index])
        if not valid.all():
            bad = int(self.index[np.flatnonzero(~valid)[0]])
            raise InvalidPattern(f"output for assignment {bad} is not a codeword of {e}")
        return values


def _as_tables(f, params=None) -> list[TruthTable]:
    if isinstance(f, Network):
        return tabulate(f, params)
    return list(f)


def _width(tables: Sequence[TruthTable], fallback: int) -> int:
    arities = {t.arity for t in tables}
    if len(arities) > 1:
        raise WidthMismatch("all output tables must share one arity")
    return arities.pop() if arities else fallback


def min_lipschitz(f, d: InducedMetric, e: InducedMetric, *, params=None, space: PairSpace | None = None) -> LipschitzReport:
    """Smallest ``k`` with ``e(f(a), f(b)) <= k * d(a, b)`` over all input pairs.

    ``f`` is a Boolean :class:`Network` or a list of output tables.  Pairs
    with ``d = 0`` and ``e = 0`` are ignored; ``d = 0 < e`` makes the
    constant infinite.  The witness is the maximising pair with the smallest
    ``(i, j)`` assignment indices.
    """
    tables = _as_tables(f, params)
    space = space or PairSpace(d, _width(tables, d.width))
    out = space.decode_outputs(tables, e)
    factor = e.scale / d.scale

    best: tuple[int, int] | None = None  # (e_raw, d_raw) of the running maximum
    best_pair: tuple[int, int] | None = None
    inf_pair: tuple[int, int] | None = None
    first_pair: tuple[int, int] | None = None
    for rows, cols, d_raw, e_raw, upper in space.blocks(out, e):
        if first_pair is None and upper.any():
            r, c = np.argwhere(upper)[0]
            first_pair = (int(rows[r]), int(c))
        zero = upper & (d_raw == 0) & (e_raw > 0)
        if zero.any():
            r, c = np.argwhere(zero)[0]
            inf_pair = (int(rows[r]), int(c))
            break
        pos = upper & (d_raw > 0)
        if not pos.any():
            continue
        ratio = np.where(pos, e_raw / np.where(pos, d_raw, 1), -1.0)
        near = pos & (ratio >= ratio.max() * (1 - 1e-12))
        # exact maximum among the float near-ties, then its first position
        uniq = np.unique(np.stack([e_raw[near], d_raw[near]]), axis=1)
        er, dr = max(((int(x), int(y)) for x, y in uniq.T), key=lambda t: Fraction(*t))
        if best is None or er * best[1] > best[0] * dr:
            r, c = np.argwhere(pos & (e_raw * dr == er * d_raw))[0]
            best, best_pair = (er, dr), (int(rows[r]), int(c))
    to_index = lambda p: (int(space.index[p[0]]), int(space.index[p[1]]))  # noqa: E731
    if inf_pair is not None:
        return LipschitzReport(math.inf, to_index(inf_pair), space.pair_count, space.width)
    if best is None:
        witness = to_index(first_pair) if first_pair else None
        return LipschitzReport(Fraction(0), witness, space.pair_count, space.width)
    k = factor * Fraction(best[0], best[1])
    return LipschitzReport(k, to_index(best_pair), space.pair_count, space.width)


def is_k_lipschitz(f, d: InducedMetric, e: InducedMetric, k, *, params=None, space: PairSpace | None = None):
    """Direct pairwise check of ``e <= k * d``.

    Returns ``(True, None)`` or ``(False, (i, j))`` with the first violating
    pair in assignment-index order.
    """
    k = Fraction(k)
    if k < 0:
        raise ValueError("k must be non-negative")
    tables = _as_tables(f, params)
    space = space or PairSpace(d, _width(tables, d.width))
    out = space.decode_outputs(tables, e)
    # e.scale * e_raw <= k * d.scale * d_raw  <=>  e_raw * q <= p * d_raw
    bound = k * d.scale / e.scale
    p, q = bound.numerator, bound.denominator
    exact = p < (1 << 30) and q < (1 << 30)
    for rows, cols, d_raw, e_raw, upper in space.blocks(out, e):
        if exact:
            viol = upper & (e_raw * q > p * d_raw)
        else:
            viol = upper & (e_raw.astype(object) * q > d_raw.astype(object) * p)
        if viol.any():
            r, c = np.argwhere(viol)[0]
            return False, (int(space.index[rows[r]]), int(space.index[c]))
    return True, None


# -- reference topologies --------------------------------------------------

def ripple_adder(n: int) -> Network:
    """n full adders chained by carries.

    Inputs are declared ``a_{n-1} .. a_0, b_{n-1} .. b_0, c0`` and outputs are
    ``(c_n, s_{n-1}, .., s_0)``, so :func:`adder_metrics` reads both vectors
    most significant bit first.
    """
    if n < 1:
        raise ValueError("adder width must be at least 1")
    a = [f"a{i}" for i in range(n)]
    b = [f"b{i}" for i in range(n)]
    c = [f"c{i}" for i in range(n + 1)]
    s = [f"s{i}" for i in range(n)]
    order = a[::-1] + b[::-1] + [c[0]] + c[1:] + s
    edges = [EdgeDecl(e, BOOL) for e in order]
    vertices = [
        Vertex(f"fa{i}", Func.full_adder(), ins=(a[i], b[i], c[i]), outs=(s[i], c[i + 1]))
        for i in range(n)
    ]
    return Network(edges, vertices, [c[n]] + s[::-1])


def adder_metrics(n: int) -> tuple[InducedMetric, InducedMetric]:
    """L1 distances on ``(a, b, c0)`` words and on the ``n+1``-bit sum word."""
    d = InducedMetric.concat([StdBinary(n), StdBinary(n), BIT], "L1")
    e = InducedMetric.concat([StdBinary(n + 1)], "L1")
    return d, e


def decode_adder_output(result: Mapping[str, bool], n: int) -> int:
    return sum(1 << i for i in range(n) if result[f"s{i}"]) + (result[f"c{n}"] << n)


def adder_inputs(n: int, a: int, b: int, carry: bool = False) -> dict[str, bool]:
    out = {f"a{i}": bool((a >> i) & 1) for i in range(n)}
    out.update({f"b{i}": bool((b >> i) & 1) for i in range(n)})
    out["c0"] = bool(carry)
    return out


# (a, b, c) -> (false, c): the leaf that ruins the adder's constant
CARRY_PASS = Func.table(TruthTable.constant(False, 3), TruthTable.projection(2, 3))


def replace_leaves(net: Network, mapping: Mapping[Func, Func]) -> Network:
    """Same topology with every function found in ``mapping`` substituted."""
    vertices = []
    for v in net.vertices:
        new = mapping.get(v.func, v.func)
        if new.signature != v.func.signature:
            raise SignatureMismatch(
                f"cannot replace {v.func} {v.func.signature} by {new} {new.signature} at {v.name}"
            )
        vertices.append(Vertex(v.name, new, v.ins, v.outs, v.params))
    out = Network(net.edges, vertices, net.priout)
    report = validate(out)
    if not report.ok:
        raise SignatureMismatch("; ".join(report.violations))
    return out
