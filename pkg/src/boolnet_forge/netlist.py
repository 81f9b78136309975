"""Incremental construction of Boolean netlists and word-level arithmetic cores.

Words are lists of edge ids, least significant bit first, always read as
two's complement.  Unsigned operands are widened with a zero sign bit
before they enter a core.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .boolfunc import AND, MUX, NOT, OR, XOR, TruthTable
from .graph import BOOL, EdgeDecl, Func, Network, Vertex

Word = list  # list[str], LSB first


class NetlistBuilder:
    def __init__(self, inputs: Sequence[str] = ()):
        self.edges: list[EdgeDecl] = [EdgeDecl(x, BOOL) for x in inputs]
        self.vertices: list[Vertex] = []
        self._names: set[str] = set(inputs)
        self._count = 0
        self._consts: dict[bool, str] = {}

    # -- primitives --
    def add_input(self, name: str) -> str:
        self.edges.append(EdgeDecl(name, BOOL))
        self._names.add(name)
        return name

    def fresh(self, hint: str = "w") -> str:
        while True:
            self._count += 1
            name = f"{hint}{self._count}"
            if name not in self._names:
                break
        self._names.add(name)
        self.edges.append(EdgeDecl(name, BOOL))
        return name

    def vertex(self, func: Func, ins: Sequence[str], n_out: int = 1, hint: str = "u") -> list[str]:
        outs = [self.fresh("w") for _ in range(n_out)]
        self.vertices.append(Vertex(f"{hint}{len(self.vertices)}", func, tuple(ins), tuple(outs)))
        return outs

    def const(self, value: bool) -> str:
        value = bool(value)
        if value not in self._consts:
            out = self.fresh("k")
            self.vertices.append(Vertex(f"const{int(value)}", Func.const(value), (), (out,)))
            self._consts[value] = out
        return self._consts[value]

    def gate(self, table: TruthTable, *ins: str) -> str:
        return self.vertex(Func.table(table), ins, hint="g")[0]

    def not_(self, a: str) -> str:
        return self.gate(NOT, a)

    def and_(self, a: str, b: str) -> str:
        return self.gate(AND, a, b)

    def or_(self, a: str, b: str) -> str:
        return self.gate(OR, a, b)

    def xor(self, a: str, b: str) -> str:
        return self.gate(XOR, a, b)

    def mux(self, a: str, b: str, sel: str) -> str:
        """``sel ? b : a``."""
        return self.gate(MUX, a, b, sel)

    def any_(self, bits: Sequence[str]) -> str:
        bits = list(bits)
        if not bits:
            return self.const(False)
        while len(bits) > 1:
            bits = [self.or_(bits[i], bits[i + 1]) for i in range(0, len(bits) - 1, 2)] + (
                [bits[-1]] if len(bits) % 2 else []
            )
        return bits[0]

    def full_adder(self, a: str, b: str, c: str) -> tuple[str, str]:
        s, carry = self.vertex(Func.full_adder(), (a, b, c), 2, hint="fa")
        return s, carry

    # -- unsigned helpers --
    def ripple_add(self, xs: Word, ys: Word, carry: str | None = None) -> Word:
        """Unsigned sum, one bit wider than the wider operand."""
        width = max(len(xs), len(ys))
        carry = carry or self.const(False)
        out = []
        for i in range(width):
            a = xs[i] if i < len(xs) else self.const(False)
            b = ys[i] if i < len(ys) else self.const(False)
            s, carry = self.full_adder(a, b, carry)
            out.append(s)
        return out + [carry]

    def popcount(self, bits: Word) -> Word:
        """Unsigned count of set bits by a balanced full-adder tree."""
        if len(bits) == 1:
            return list(bits)
        if len(bits) == 2:
            return self.ripple_add([bits[0]], [bits[1]])
        if len(bits) == 3:
            return list(self.full_adder(*bits))
        half = len(bits) // 2
        return self.ripple_add(self.popcount(bits[:half]), self.popcount(bits[half:]))

    def at_least(self, word: Word, k: int) -> str:
        """Unsigned ``word >= k``: carry out of ``word + ~k + 1``."""
        carry = self.const(True)
        for i, bit in enumerate(word):
            _, carry = self.full_adder(bit, self.const(not (k >> i) & 1), carry)
        return carry

    # -- two's complement words --
    def const_word(self, value: int, width: int) -> Word:
        return [self.const((value >> i) & 1) for i in range(width)]

    def extend(self, x: Word, width: int) -> Word:
        if width <= len(x):
            return list(x[:width])
        return list(x) + [x[-1]] * (width - len(x))

    def shift_left(self, x: Word, s: int) -> Word:
        return [self.const(False)] * s + list(x)

    def add(self, x: Word, y: Word) -> Word:
        """Exact signed sum, one bit wider than the wider operand."""
        width = max(len(x), len(y)) + 1
        return self.ripple_add(self.extend(x, width), self.extend(y, width))[:width]

    def sum_words(self, words: Sequence[Word]) -> Word:
        words = list(words)
        if not words:
            return [self.const(False)]
        while len(words) > 1:
            words = [self.add(words[i], words[i + 1]) for i in range(0, len(words) - 1, 2)] + (
                [words[-1]] if len(words) % 2 else []
            )
        return words[0]

    def multiply(self, x: Word, y: Word) -> Word:
        """Exact signed product by shift-and-add over sign-extended operands."""
        width = len(x) + len(y)
        xe, ye = self.extend(x, width), self.extend(y, width)
        acc: Word | None = None
        for i in range(width):
            row = [self.const(False)] * i + [self.and_(xe[j], ye[i]) for j in range(width - i)]
            acc = row if acc is None else self.ripple_add(acc, row)[:width]
        return acc

    def relu(self, x: Word) -> Word:
        keep = self.not_(x[-1])
        return [self.and_(b, keep) for b in x[:-1]] + [self.const(False)]

    def round_shift(self, x: Word, shift: int) -> Word:
        """Signed division by ``2**shift``, round to nearest, ties to even."""
        if shift <= 0:
            return self.shift_left(x, -shift)
        x = self.extend(x, max(len(x), shift + 1))
        q = x[shift:]
        guard = x[shift - 1]
        sticky = self.any_(x[: shift - 1])
        up = self.and_(guard, self.or_(sticky, q[0]))
        q = self.extend(q, len(q) + 1)
        return self.ripple_add(q, [self.const(False)] * len(q), up)[: len(q)]

    def saturate(self, x: Word, total: int, signed: bool) -> Word:
        """Clamp a signed word into ``total`` bits (two's complement or unsigned)."""
        sign = x[-1]
        if signed:
            if len(x) <= total:
                return self.extend(x, total)
            flips = [self.xor(b, sign) for b in x[total - 1 : -1]]
            over = self.any_(flips)
            nsign = self.not_(sign)
            return [self.mux(b, nsign, over) for b in x[: total - 1]] + [self.mux(x[total - 1], sign, over)]
        keep = self.not_(sign)
        high = x[total:-1]
        body = self.extend(x, total + 1)[:total] if len(x) - 1 < total else x[:total]
        if high:
            over = self.any_(high)
            body = [self.or_(b, over) for b in body]
        return [self.and_(b, keep) for b in body]

    # -- output --
    def finish(self, outputs: Mapping[str, str], priout: Sequence[str]) -> Network:
        """Bind output names to edges, renaming driven internal edges in place."""
        rename: dict[str, str] = {}
        drivers = {e for v in self.vertices for e in v.outs}
        used = set()
        buffers = []
        for name, edge in outputs.items():
            if edge in drivers and edge not in used and edge not in self._consts.values():
                rename[edge] = name
                used.add(edge)
            else:
                buffers.append((name, edge))
        r = lambda e: rename.get(e, e)  # noqa: E731
        edges = [EdgeDecl(r(e.id), e.dtype) for e in self.edges]
        vertices = [Vertex(v.name, v.func, tuple(map(r, v.ins)), tuple(map(r, v.outs)), v.params) for v in self.vertices]
        for name, edge in buffers:
            edges.append(EdgeDecl(name, BOOL))
            vertices.append(Vertex(f"buf_{name}", Func.identity(), (r(edge),), (name,)))
        return Network(edges, vertices, tuple(priout))
