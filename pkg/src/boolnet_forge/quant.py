"""Real -> fixed-point -> Boolean design pipeline.

``quantize_network`` turns a real network into a fixed-point one (the only
approximating step), ``core_generate`` expands each fixed-point vertex into
Boolean arithmetic cores, ``check_commute`` proves the two agree on every
input, and ``simplify`` performs constant propagation and dead-vertex
elimination on the netlist.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import numpy as np

from .boolfunc import BUF, FA_CARRY, FA_SUM, TruthTable, essential_inputs, tabulate
from .errors import MissingBinding, MissingFormat, SignatureMismatch, TooWide, TypeMismatch, UnsupportedLeaf
from .fixedpoint import FixedPointFormat, FixedValue, quantize_value
from .graph import (
    REAL,
    DataType,
    EdgeDecl,
    Func,
    Network,
    Vertex,
    evaluate,
    topo_sort,
)
from .netlist import NetlistBuilder

COMMUTE_MAX_INPUTS = 20
QUANTISABLE = ("dot", "relu", "identity", "const")


# -- quantisation ----------------------------------------------------------

def _format_lookup(formats) -> Callable[[str], FixedPointFormat]:
    if isinstance(formats, FixedPointFormat):
        return lambda _e: formats

    def lookup(e: str) -> FixedPointFormat:
        try:
            return formats[e]
        except KeyError:
            raise MissingFormat(f"no fixed-point format given for edge {e}") from None

    return lookup


def quantize_network(g1: Network, formats, params: Mapping[str, float] | None = None):
    """Fixed-point version of a real network and its quantised parameters.

    ``formats`` is one :class:`FixedPointFormat` for every edge or a mapping
    from edge id to format.  Each parameter is rounded independently; each
    vertex computes exactly and rounds once into its output edge's format.
    """
    fmt = _format_lookup(formats)
    params = dict(params or {})
    for e in g1.edges:
        if e.dtype.kind != "real":
            raise TypeMismatch(f"edge {e.id} is {e.dtype}; quantisation expects a real network")
    edges = [EdgeDecl(e.id, DataType.fixed(fmt(e.id))) for e in g1.edges]
    vertices = []
    for v in g1.vertices:
        f = v.func
        if f.kind not in QUANTISABLE:
            raise UnsupportedLeaf(f"vertex {v.name}: {f} is outside the quantisable basis {QUANTISABLE}")
        out_fmt = fmt(v.outs[0])
        if f.kind == "dot":
            g = Func.dot(f.arity, f.bias, out_fmt)
        elif f.kind == "relu":
            g = Func.relu(out_fmt)
        elif f.kind == "identity":
            g = Func.identity(out_fmt)
        else:
            g = Func.const(*(quantize_value(fmt(e), val) for e, val in zip(v.outs, f.values)))
        vertices.append(Vertex(v.name, g, v.ins, v.outs, v.params))
    missing = [p for p in g1.param_edges if p not in params]
    if missing:
        raise MissingBinding(f"parameters not bound: {', '.join(missing)}")
    qparams = {p: quantize_value(fmt(p), params[p]) for p in g1.param_edges}
    return Network(edges, vertices, g1.priout), qparams


# -- core generation -------------------------------------------------------

def bit_names(edge: str, width: int) -> list[str]:
    """Boolean edge ids for a fixed-point edge, most significant bit first."""
    return [f"{edge}[{i}]" for i in reversed(range(width))]


def _fixed_format(net: Network, e: str) -> FixedPointFormat:
    d = net.edge_types[e]
    if d.kind != "fixed":
        raise TypeMismatch(f"edge {e} is {d}; core generation needs fixed-point edges")
    return d.format


def core_generate(g2: Network, params: Mapping[str, FixedValue] | None = None) -> Network:
    """Bit-level netlist of a fixed-point network.

    Every fixed-point edge ``e`` of format ``(T, F)`` becomes Boolean edges
    ``e[T-1] .. e[0]`` in two's complement.  Parameters are folded in as
    constants.
    """
    params = dict(params or {})
    missing = [p for p in g2.param_edges if p not in params]
    if missing:
        raise MissingBinding(f"parameters not bound: {', '.join(missing)}")
    inputs = [b for e in g2.inputs for b in bit_names(e, _fixed_format(g2, e).total_bits)]
    nb = NetlistBuilder(inputs)
    words: dict[str, tuple[list[str], int]] = {}  # edge -> (signed word LSB first, frac bits)

    def load(e: str, value: FixedValue | None = None):
        fmt = _fixed_format(g2, e)
        if value is not None:
            bits = [nb.const(b) for b in value.bits()]
        else:
            bits = list(reversed(bit_names(e, fmt.total_bits)))
        if not fmt.signed:
            bits = bits + [nb.const(False)]
        return bits, fmt.frac_bits

    for e in g2.inputs:
        words[e] = load(e)
    for p in g2.param_edges:
        words[p] = load(p, params[p])

    def store(e: str, word: list[str], frac: int):
        fmt = _fixed_format(g2, e)
        word = nb.round_shift(word, frac - fmt.frac_bits)
        words[e] = (nb.saturate(word, fmt.total_bits, fmt.signed), fmt.frac_bits)
        if not fmt.signed:
            words[e] = (words[e][0] + [nb.const(False)], fmt.frac_bits)

    for v in topo_sort(g2):
        f = v.func
        if f.kind == "dot":
            terms = [
                (nb.multiply(words[w][0], words[x][0]), words[w][1] + words[x][1])
                for w, x in zip(v.params, v.ins)
            ]
            if f.bias:
                terms.append(words[v.params[-1]])
            frac = max((fr for _, fr in terms), default=0)
            aligned = [nb.shift_left(word, frac - fr) for word, fr in terms]
            store(v.outs[0], nb.sum_words(aligned), frac)
        elif f.kind in ("relu", "identity"):
            word, frac = words[v.ins[0]]
            store(v.outs[0], nb.relu(word) if f.kind == "relu" else word, frac)
        elif f.kind == "const":
            for e, val in zip(v.outs, f.values):
                words[e] = load(e, val)
        else:
            raise UnsupportedLeaf(f"vertex {v.name}: no core for {f}")

    outputs, priout = {}, []
    for e in g2.priout:
        fmt = _fixed_format(g2, e)
        word = words[e][0][: fmt.total_bits]
        names = bit_names(e, fmt.total_bits)
        outputs.update(zip(reversed(names), word))
        priout.extend(names)
    return nb.finish(outputs, priout)


# -- commutation -----------------------------------------------------------

@dataclass(frozen=True)
class CommuteResult:
    commutes: bool
    assignments: int
    counterexample: dict | None = None

    def __bool__(self):
        return self.commutes

    def to_json(self) -> dict:
        return {"commutes": self.commutes, "assignments": self.assignments, "counterexample": self.counterexample}


def default_encodings(g2: Network) -> tuple[dict[str, list[str]], dict[str, list[str]]]:
    """Two's complement bit-blasting of every input and primary output, MSB first."""
    phi_i = {e: bit_names(e, _fixed_format(g2, e).total_bits) for e in g2.inputs}
    phi_o = {e: bit_names(e, _fixed_format(g2, e).total_bits) for e in g2.priout}
    return phi_i, phi_o


def check_commute(g2: Network, g3: Network, params=None, phi_i=None, phi_o=None) -> CommuteResult:
    """Exhaustively compare the netlist with the fixed-point network.

    ``phi_i`` / ``phi_o`` map each fixed-point input / output edge to its
    Boolean edges (MSB first); by default they are the names produced by
    :func:`core_generate`.  The first disagreeing assignment (lowest netlist
    input index) is returned as a counterexample.
    """
    d_i, d_o = default_encodings(g2)
    phi_i = phi_i or d_i
    phi_o = phi_o or d_o
    width = len(g3.inputs)
    if width > COMMUTE_MAX_INPUTS:
        raise TooWide(f"{width} netlist inputs exceed the exhaustive guard {COMMUTE_MAX_INPUTS}")
    encoded = [b for e in g2.inputs for b in phi_i[e]]
    if sorted(encoded) != sorted(g3.inputs):
        raise SignatureMismatch("netlist inputs do not match the encoded fixed-point inputs")
    tables = dict(zip(g3.priout, tabulate(g3)))
    position = {b: j for j, b in enumerate(g3.inputs)}
    for idx in range(1 << width):
        inputs = {}
        for e in g2.inputs:
            fmt = _fixed_format(g2, e)
            lsb_first = [bool((idx >> position[b]) & 1) for b in reversed(phi_i[e])]
            inputs[e] = FixedValue.from_bits(fmt, lsb_first)
        want = evaluate(g2, params or {}, inputs)
        for e in g2.priout:
            fmt = _fixed_format(g2, e)
            got_bits = [bool((tables[b].mask >> idx) & 1) for b in reversed(phi_o[e])]
            got = FixedValue.from_bits(fmt, got_bits)
            if got != want[e]:
                return CommuteResult(
                    False,
                    1 << width,
                    {
                        "index": idx,
                        "inputs": {k: str(v.value) for k, v in inputs.items()},
                        "edge": e,
                        "expected": str(want[e].value),
                        "netlist": str(got.value),
                    },
                )
    return CommuteResult(True, 1 << width)


# -- simplification --------------------------------------------------------

def _leaf_tables(f: Func) -> list[TruthTable] | None:
    if f.kind == "truth_table":
        return list(f.tables)
    if f.kind == "full_adder":
        return [FA_SUM, FA_CARRY]
    if f.kind == "identity":
        return [BUF]
    return None


def simplify(g3: Network) -> Network:
    """Constant propagation and dead-vertex elimination.

    Each vertex is rewritten to read only the non-constant, essential inputs
    it still depends on; a vertex whose outputs are all constant becomes one
    constant vertex; buffers that are not primary outputs are bypassed.  A
    vertex is never split, so the vertex count cannot grow.
    """
    consts: dict[str, bool] = {}
    alias: dict[str, str] = {}
    prio = set(g3.priout)
    rewritten: list[Vertex] = []
    for v in topo_sort(g3):
        ins = [alias.get(e, e) for e in v.ins]
        f = v.func
        tables = _leaf_tables(f)
        if f.kind == "const":
            consts.update((e, val) for e, val in zip(v.outs, f.values) if isinstance(val, bool))
            rewritten.append(v)
            continue
        if tables is None or v.params:
            rewritten.append(Vertex(v.name, f, tuple(ins), v.outs, v.params))
            continue
        free = list(dict.fromkeys(e for e in ins if e not in consts))
        reduced = _restrict(tables, ins, free, consts)
        ess = sorted(set().union(*(essential_inputs(t) for t in reduced)))
        if len(ess) < len(free):
            keep = [free[j] for j in ess]
            reduced = _restrict(reduced, free, keep, {e: False for e in free if e not in keep})
            free = keep
        for e, t in zip(v.outs, reduced):
            if t.is_constant():
                consts[e] = bool(t.mask)
            elif t == BUF and e not in prio:
                alias[e] = free[0]
        if all(t.is_constant() for t in reduced):
            rewritten.append(Vertex(v.name, Func.const(*(bool(t.mask) for t in reduced)), (), v.outs))
        elif free == list(v.ins):
            rewritten.append(v)
        else:
            rewritten.append(Vertex(v.name, Func.table(*reduced), tuple(free), v.outs))

    live = set(g3.priout)
    kept: list[Vertex] = []
    for v in reversed(rewritten):
        if any(e in live and alias.get(e) is None for e in v.outs) or any(e in prio for e in v.outs):
            kept.append(v)
            live.update(v.ins)
            live.update(v.params)
    kept.reverse()
    order = {v.name: i for i, v in enumerate(g3.vertices)}
    kept.sort(key=lambda v: order[v.name])
    referenced = set(g3.inputs) | set(g3.param_edges) | prio
    for v in kept:
        referenced.update(v.ins, v.outs, v.params)
    edges = [e for e in g3.edges if e.id in referenced]
    return Network(edges, kept, g3.priout)


def _restrict(tables: Sequence[TruthTable], ins: Sequence[str], free: Sequence[str], fixed: Mapping[str, bool]):
    pos = {e: j for j, e in enumerate(free)}

    def row(ys, t):
        return t(*(ys[pos[e]] if e in pos else fixed[e] for e in ins))

    return [TruthTable.from_function(len(free), lambda *ys, t=t: row(ys, t)) for t in tables]


# -- empirical metric ------------------------------------------------------

LOSSES = ("absdiff", "zero_one")


@dataclass(frozen=True)
class LossSpec:
    kind: str = "absdiff"

    def __post_init__(self):
        if self.kind not in LOSSES:
            raise ValueError(f"unknown loss {self.kind!r}; choose from {LOSSES}")

    def __call__(self, y: Sequence, y2: Sequence) -> float:
        if self.kind == "zero_one":
            return float(any(a != b for a, b in zip(y, y2)))
        return float(sum(abs(float(a) - float(b)) for a, b in zip(y, y2)))


@dataclass(frozen=True)
class SampleSpec:
    """``count`` seeded draws, uniform on ``[low, high]^dim`` or over bit patterns.

    With ``distribution="bits"`` and ``count=None`` every pattern is used once.
    """

    count: int | None = 1000
    seed: int = 0
    distribution: str = "uniform"
    low: float = -1.0
    high: float = 1.0

    def draw(self, dim: int) -> list[tuple]:
        rng = np.random.default_rng(self.seed)
        if self.distribution == "bits":
            if self.count is None:
                return [tuple(bool((i >> j) & 1) for j in range(dim)) for i in range(1 << dim)]
            return [tuple(map(bool, row)) for row in rng.integers(0, 2, size=(self.count, dim))]
        if self.distribution != "uniform":
            raise ValueError(f"unknown distribution {self.distribution!r}")
        if self.count is None:
            raise ValueError("uniform sampling needs a count")
        return [tuple(map(float, row)) for row in rng.uniform(self.low, self.high, size=(self.count, dim))]


class NetFunction:
    """A network viewed as a function of plain numbers.

    Real inputs are quantised into fixed-point input edges; fixed-point
    outputs are returned as floats.
    """

    def __init__(self, net: Network, params=None):
        self.net = net
        self.params = dict(params or {})
        self.n_inputs = len(net.inputs)
        self.n_outputs = len(net.priout)

    def __call__(self, x: Sequence) -> tuple:
        if len(x) != self.n_inputs:
            raise SignatureMismatch(f"expected {self.n_inputs} inputs, got {len(x)}")
        binding = {}
        for e, val in zip(self.net.inputs, x):
            d = self.net.edge_types[e]
            binding[e] = quantize_value(d.format, val) if d.kind == "fixed" else val
        out = evaluate(self.net, self.params, binding)
        return tuple(float(v) if isinstance(v, FixedValue) else v for v in (out[e] for e in self.net.priout))


def estimate_metric(fa, fb, loss: LossSpec, samples: SampleSpec, dim: int | None = None) -> float:
    """Mean loss between two functions over a seeded sample of inputs."""
    for attr in ("n_inputs", "n_outputs"):
        a, b = getattr(fa, attr, None), getattr(fb, attr, None)
        if a is not None and b is not None and a != b:
            raise SignatureMismatch(f"functions differ in {attr}: {a} vs {b}")
    dim = dim if dim is not None else getattr(fa, "n_inputs", None)
    if dim is None:
        raise SignatureMismatch("input dimension unknown; pass dim")
    xs = samples.draw(dim)
    if not xs:
        return 0.0
    return sum(loss(fa(x), fb(x)) for x in xs) / len(xs)


def error_bound(g1: Network, formats, params: Mapping[str, float], box: tuple[float, float]) -> dict[str, float]:
    """Worst-case |quantised - real| per primary output, by interval propagation.

    Inputs range over ``box``; every quantised input and parameter is off by
    at most half an ulp of its format; products obey ``|w'x' - wx| <= |w'-w||x'| + |w||x'-x|``,
    ReLU is 1-Lipschitz, and each output rounding adds half an ulp when it
    discards bits.  Returns ``inf`` where saturation cannot be ruled out.
    """
    fmt = _format_lookup(formats)
    lo, hi = box
    rng: dict[str, tuple[float, float]] = {}
    err: dict[str, float] = {}
    fracs: dict[str, int] = {}

    def half_ulp(f: FixedPointFormat) -> float:
        return 2.0 ** (-f.frac_bits - 1)

    for e in g1.inputs:
        f = fmt(e)
        rng[e] = (lo, hi)
        err[e] = half_ulp(f) if f.contains(lo) and f.contains(hi) else math.inf
        fracs[e] = f.frac_bits
    for p in g1.param_edges:
        f = fmt(p)
        rng[p] = (params[p], params[p])
        err[p] = half_ulp(f) if f.contains(params[p]) else math.inf
        fracs[p] = f.frac_bits

    def mag(e):
        return max(abs(rng[e][0]), abs(rng[e][1]))

    for v in topo_sort(g1):
        f, out = v.func, v.outs[0]
        of = fmt(out)
        if f.kind == "dot":
            lo_s = hi_s = 0.0
            e_s = 0.0
            frac = 0
            for w, x in zip(v.params, v.ins):
                prods = [a * b for a in rng[w] for b in rng[x]]
                lo_s += min(prods)
                hi_s += max(prods)
                e_s += err[w] * (mag(x) + err[x]) + mag(w) * err[x]
                frac = max(frac, fracs[w] + fracs[x])
            if f.bias:
                b = v.params[-1]
                lo_s += rng[b][0]
                hi_s += rng[b][1]
                e_s += err[b]
                frac = max(frac, fracs[b])
            val = (lo_s, hi_s)
        elif f.kind in ("relu", "identity"):
            (a, b), e_s, frac = rng[v.ins[0]], err[v.ins[0]], fracs[v.ins[0]]
            val = (max(a, 0.0), max(b, 0.0)) if f.kind == "relu" else (a, b)
        elif f.kind == "const":
            val = (f.values[0], f.values[0])
            e_s, frac = 0.0, math.inf
        else:
            raise UnsupportedLeaf(f"no error model for {f}")
        if frac > of.frac_bits:
            e_s += half_ulp(of)
        # clamping is a projection onto the range, so it only hurts when the
        # real value itself leaves the range
        if not (of.contains(val[0]) and of.contains(val[1])):
            e_s = math.inf
        rng[out], err[out], fracs[out] = val, e_s, of.frac_bits
    return {e: err[e] for e in g1.priout}


def dot_relu_network() -> Network:
    """``d = ReLU(w1 * x + w2 * y)`` over reals: a dot-product vertex feeding a ReLU."""
    edges = [EdgeDecl(e, REAL) for e in ("w1", "w2", "x", "y", "c", "d")]
    vertices = [
        Vertex("dot", Func.dot(2), ins=("x", "y"), outs=("c",), params=("w1", "w2")),
        Vertex("relu", Func.relu(), ins=("c",), outs=("d",)),
    ]
    return Network(edges, vertices, ("d",))


DEMO_WEIGHTS = {"w1": 1.0, "w2": -0.5}
DEMO_FORMAT = FixedPointFormat(4, 2, True)


def demo_pipeline(fmt: FixedPointFormat = DEMO_FORMAT, weights: Mapping[str, float] = DEMO_WEIGHTS):
    """The dot-ReLU network quantised and core-generated: ``(g1, g2, qparams, g3)``."""
    g1 = dot_relu_network()
    g2, qparams = quantize_network(g1, fmt, weights)
    return g1, g2, qparams, core_generate(g2, qparams)
