"""Typed acyclic dataflow networks and their exact semantics.

A network is a set of typed edges and a list of vertices.  Each vertex
reads parameter edges and input edges, applies a leaf function, and drives
its output edges.  Edges that no vertex drives and no vertex reads as a
parameter are the network's inputs; ``priout`` lists the observable outputs.
"""

from __future__ import annotations

import heapq
import json
import math
import re
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from .boolfunc import TruthTable
from .errors import (
    ArityMismatch,
    BindingError,
    CyclicNetwork,
    MissingBinding,
    NetworkError,
    TypeMismatch,
)
from .fixedpoint import FixedPointFormat, FixedValue, requantize


# -- types -----------------------------------------------------------------

@dataclass(frozen=True)
class DataType:
    kind: str  # "real" | "bool" | "pm1" | "fixed"
    format: FixedPointFormat | None = None

    def __post_init__(self):
        if self.kind not in ("real", "bool", "pm1", "fixed"):
            raise ValueError(f"unknown data type {self.kind!r}")
        if (self.kind == "fixed") != (self.format is not None):
            raise ValueError("fixed types carry a format; other kinds do not")

    @classmethod
    def fixed(cls, fmt: FixedPointFormat) -> "DataType":
        return cls("fixed", fmt)

    def check(self, value) -> bool:
        if self.kind == "bool":
            return isinstance(value, bool)
        if self.kind == "pm1":
            return not isinstance(value, bool) and value in (-1, 1)
        if self.kind == "real":
            return isinstance(value, (int, float, Fraction)) and not isinstance(value, bool)
        return isinstance(value, FixedValue) and value.format == self.format

    def __str__(self):
        return f"fixed({self.format})" if self.format else self.kind


REAL = DataType("real")
BOOL = DataType("bool")
PM1 = DataType("pm1")


@dataclass(frozen=True)
class EdgeDecl:
    id: str
    dtype: DataType


LEAF_KINDS = ("dot", "relu", "sigmoid", "full_adder", "truth_table", "bnn", "identity", "const")


@dataclass(frozen=True)
class Func:
    """Reference to a leaf function plus the attributes its kind needs.

    ``arity`` counts activation inputs.  ``out_format`` selects fixed-point
    semantics for ``dot``/``relu``/``identity``: the exact result is rounded
    and saturated into that format.
    """

    kind: str
    arity: int = 0
    bias: bool = False
    tables: tuple[TruthTable, ...] = ()
    weights: tuple[int, ...] = ()
    threshold: int = 0
    values: tuple = ()
    out_format: FixedPointFormat | None = None

    def __post_init__(self):
        if self.kind not in LEAF_KINDS:
            raise ValueError(f"unknown leaf kind {self.kind!r}")
        if self.kind == "truth_table":
            if not self.tables:
                raise ValueError("truth_table leaf needs at least one table")
            if any(t.arity != self.arity for t in self.tables):
                raise ValueError("all tables of one leaf share its arity")
        if self.kind == "bnn":
            from .bnn import BnnNode

            BnnNode(self.weights, self.threshold)  # validates
            if len(self.weights) != self.arity:
                raise ValueError("bnn arity must equal the number of weights")

    # constructors
    @classmethod
    def dot(cls, n: int, bias: bool = False, out_format: FixedPointFormat | None = None) -> "Func":
        return cls("dot", arity=n, bias=bias, out_format=out_format)

    @classmethod
    def relu(cls, out_format: FixedPointFormat | None = None) -> "Func":
        return cls("relu", arity=1, out_format=out_format)

    @classmethod
    def sigmoid(cls) -> "Func":
        return cls("sigmoid", arity=1)

    @classmethod
    def full_adder(cls) -> "Func":
        return cls("full_adder", arity=3)

    @classmethod
    def table(cls, *tables: TruthTable | str) -> "Func":
        tabs = tuple(TruthTable.from_bits(t) if isinstance(t, str) else t for t in tables)
        return cls("truth_table", arity=tabs[0].arity, tables=tabs)

    @classmethod
    def bnn(cls, weights: Sequence[int], threshold: int) -> "Func":
        return cls("bnn", arity=len(weights), weights=tuple(weights), threshold=threshold)

    @classmethod
    def identity(cls, out_format: FixedPointFormat | None = None) -> "Func":
        return cls("identity", arity=1, out_format=out_format)

    @classmethod
    def const(cls, *values) -> "Func":
        return cls("const", arity=0, values=tuple(values))

    @property
    def signature(self) -> tuple[int, int, int]:
        """(number of params, number of inputs, number of outputs)."""
        k = self.kind
        if k == "dot":
            return (self.arity + (1 if self.bias else 0), self.arity, 1)
        if k == "full_adder":
            return (0, 3, 2)
        if k == "truth_table":
            return (0, self.arity, len(self.tables))
        if k == "bnn":
            return (0, self.arity, 1)
        if k == "const":
            return (0, 0, len(self.values))
        return (0, 1, 1)

    def __str__(self):
        if self.kind == "truth_table":
            return "tt[" + ",".join(t.bits for t in self.tables) + "]"
        if self.kind == "bnn":
            w = ",".join(f"{x:+d}" for x in self.weights)
            return f"bnn[w=({w}),c={self.threshold}]"
        if self.kind == "const":
            return "const[" + ",".join(_value_str(v) for v in self.values) + "]"
        if self.kind == "dot":
            return f"dot{self.arity}" + ("+b" if self.bias else "")
        return self.kind


def _value_str(v) -> str:
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, FixedValue):
        return str(v.value)
    return str(v)


@dataclass(frozen=True)
class Vertex:
    name: str
    func: Func
    ins: tuple[str, ...] = ()
    outs: tuple[str, ...] = ()
    params: tuple[str, ...] = ()

    def __post_init__(self):
        for attr in ("ins", "outs", "params"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))


@dataclass(frozen=True)
class Network:
    edges: tuple[EdgeDecl, ...]
    vertices: tuple[Vertex, ...]
    priout: tuple[str, ...]

    def __post_init__(self):
        edges = self.edges
        if isinstance(edges, Mapping):
            edges = [EdgeDecl(k, v) for k, v in edges.items()]
        object.__setattr__(self, "edges", tuple(edges))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "priout", tuple(self.priout))

    @cached_property
    def edge_types(self) -> dict[str, DataType]:
        return {e.id: e.dtype for e in self.edges}

    @cached_property
    def drivers(self) -> dict[str, int]:
        """Edge id -> index of the first vertex driving it."""
        out = {}
        for i, v in enumerate(self.vertices):
            for e in v.outs:
                out.setdefault(e, i)
        return out

    @cached_property
    def param_edges(self) -> tuple[str, ...]:
        seen = {p for v in self.vertices for p in v.params}
        return tuple(e.id for e in self.edges if e.id in seen)

    @cached_property
    def inputs(self) -> tuple[str, ...]:
        """Declared edges that are neither driven nor parameters, in declaration order."""
        params = set(self.param_edges)
        return tuple(e.id for e in self.edges if e.id not in self.drivers and e.id not in params)

    @cached_property
    def consumers(self) -> dict[str, list[int]]:
        out: dict[str, list[int]] = {}
        for i, v in enumerate(self.vertices):
            for e in v.ins:
                out.setdefault(e, []).append(i)
        return out

    def vertex(self, name: str) -> Vertex:
        for v in self.vertices:
            if v.name == name:
                return v
        raise KeyError(name)


# -- validation ------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[str, ...] = ()
    warnings: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {"ok": self.ok, "violations": list(self.violations), "warnings": list(self.warnings)}


def validate(net: Network) -> ValidationReport:
    """Check the structural rules of a network; problems are returned, not raised."""
    bad: list[str] = []
    warn: list[str] = []

    seen: set[str] = set()
    for e in net.edges:
        if e.id in seen:
            bad.append(f"duplicate edge: {e.id}")
        seen.add(e.id)
    names: set[str] = set()
    for v in net.vertices:
        if v.name in names:
            bad.append(f"duplicate vertex: {v.name}")
        names.add(v.name)
        for e in (*v.params, *v.ins, *v.outs):
            if e not in seen:
                bad.append(f"undeclared edge: {e} (vertex {v.name})")
        if not v.outs:
            bad.append(f"empty outs: {v.name}")
        want = v.func.signature
        have = (len(v.params), len(v.ins), len(v.outs))
        if want != have:
            bad.append(f"arity mismatch: {v.name} expects (params, ins, outs)={want}, has {have}")
        else:
            bad.extend(f"type mismatch: {v.name}: {msg}" for msg in _type_problems(v, net.edge_types))

    driven_count: dict[str, int] = {}
    for v in net.vertices:
        for e in v.outs:
            driven_count[e] = driven_count.get(e, 0) + 1
    params = {p for v in net.vertices for p in v.params}
    for e in net.edges:
        if e.id in params and e.id in driven_count:
            bad.append(f"param driven: {e.id}")
        if driven_count.get(e.id, 0) > 1:
            bad.append(f"multiple drivers: {e.id}")
    for e in net.priout:
        if driven_count.get(e, 0) != 1:
            bad.append(f"priout not driven by exactly one vertex: {e}")

    try:
        topo_sort(net)
    except CyclicNetwork as exc:
        bad.append(f"cycle: {exc}")

    consumed = {e for v in net.vertices for e in (*v.ins, *v.params)}
    observed = set(net.priout)
    for e in net.edges:
        if e.id in driven_count and e.id not in consumed and e.id not in observed:
            warn.append(f"unobserved edge: {e.id}")
    return ValidationReport(tuple(bad), tuple(warn))


def _type_problems(v: Vertex, types: Mapping[str, DataType]) -> list[str]:
    try:
        p = [types[e] for e in v.params]
        i = [types[e] for e in v.ins]
        o = [types[e] for e in v.outs]
    except KeyError:
        return []  # reported as undeclared
    f = v.func
    k = f.kind
    problems = []

    def need(dts, kind, what):
        for d in dts:
            if d.kind != kind:
                problems.append(f"{what} must be {kind}, found {d}")
                return

    if k in ("full_adder", "truth_table"):
        need(i, "bool", "inputs")
        need(o, "bool", "outputs")
    elif k == "bnn":
        need(i, "pm1", "inputs")
        need(o, "pm1", "outputs")
    elif k == "sigmoid":
        need(i + o, "real", "edges")
    elif k == "const":
        for d, val in zip(o, f.values):
            if not d.check(val):
                problems.append(f"constant {_value_str(val)} does not fit {d}")
    elif k in ("dot", "relu", "identity"):
        kinds = {d.kind for d in p + i}
        if k == "identity" and f.out_format is None:
            if i[0] != o[0]:
                problems.append(f"identity maps {i[0]} to {o[0]}")
        elif kinds == {"real"} and f.out_format is None:
            need(o, "real", "outputs")
        elif kinds == {"fixed"}:
            want = f.out_format or (i[0].format if k == "relu" else None)
            if want is None:
                problems.append("fixed-point dot product needs an output format")
            elif o[0] != DataType.fixed(want):
                problems.append(f"output edge {o[0]} differs from fixed({want})")
        else:
            problems.append(f"operands must be all real or all fixed, found {sorted(kinds)}")
    return problems


def topo_sort(net: Network) -> list[Vertex]:
    """Vertices ordered so that drivers come first; ties keep declaration order."""
    n = len(net.vertices)
    deps: list[set[int]] = [set() for _ in range(n)]
    users: list[list[int]] = [[] for _ in range(n)]
    for j, v in enumerate(net.vertices):
        for e in (*v.ins, *v.params):
            i = net.drivers.get(e)
            if i is None:
                continue
            if i == j:
                raise CyclicNetwork(f"vertex {v.name} reads its own output {e}")
            if i not in deps[j]:
                deps[j].add(i)
                users[i].append(j)
    remaining = [len(d) for d in deps]
    ready = [j for j in range(n) if remaining[j] == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        i = heapq.heappop(ready)
        order.append(i)
        for j in users[i]:
            remaining[j] -= 1
            if remaining[j] == 0:
                heapq.heappush(ready, j)
    if len(order) != n:
        stuck = [net.vertices[j].name for j in range(n) if remaining[j] > 0]
        raise CyclicNetwork("dependency cycle through " + ", ".join(stuck))
    return [net.vertices[i] for i in order]


# -- semantics -------------------------------------------------------------

def sigmoid(x: float) -> float:
    """The symmetric logistic ``2 / (1 + exp(-x)) - 1`` with range (-1, 1)."""
    if x < -700:
        return -1.0
    return 2.0 / (1.0 + math.exp(-x)) - 1.0


def relu(x):
    return x if x > 0 else type(x)(0)


def _is_real(v) -> bool:
    return isinstance(v, (int, float, Fraction)) and not isinstance(v, bool)


def apply_leaf(f: Func, params: Sequence = (), ins: Sequence = ()) -> tuple:
    """Apply a leaf function; returns one value per output."""
    n_params, n_ins, _ = f.signature
    if len(params) != n_params or len(ins) != n_ins:
        raise ArityMismatch(
            f"{f} takes {n_params} params and {n_ins} inputs, got {len(params)} and {len(ins)}"
        )
    k = f.kind
    if k == "const":
        return tuple(f.values)
    if k in ("full_adder", "truth_table"):
        if not all(isinstance(x, bool) for x in ins):
            raise TypeMismatch(f"{f} needs Boolean inputs, got {list(ins)!r}")
        if k == "full_adder":
            a, b, c = ins
            return (a ^ b ^ c, (a and b) or (c and (a or b)))
        return tuple(t(*ins) for t in f.tables)
    if k == "bnn":
        if not all(not isinstance(x, bool) and x in (-1, 1) for x in ins):
            raise TypeMismatch(f"{f} needs +-1 inputs, got {list(ins)!r}")
        s = sum(w * x for w, x in zip(f.weights, ins))
        return (1 if s >= f.threshold else -1,)

    operands = list(params) + list(ins)
    if all(_is_real(x) for x in operands) and f.out_format is None:
        if k == "dot":
            s = sum(w * x for w, x in zip(params, ins))
            if f.bias:
                s += params[-1]
            return (s,)
        if k == "relu":
            return (relu(ins[0]),)
        if k == "sigmoid":
            return (sigmoid(ins[0]),)
        return (ins[0],)
    if all(isinstance(x, FixedValue) for x in operands) and k != "sigmoid":
        return (_apply_fixed(f, params, ins),)
    if k == "identity" and f.out_format is None:
        return (ins[0],)
    raise TypeMismatch(f"{f} cannot be applied to {operands!r}")


def _apply_fixed(f: Func, params, ins) -> FixedValue:
    if f.kind == "dot":
        terms = [(w.raw * x.raw, w.format.frac_bits + x.format.frac_bits) for w, x in zip(params, ins)]
        if f.bias:
            b = params[-1]
            terms.append((b.raw, b.format.frac_bits))
        frac = max((fr for _, fr in terms), default=0)
        acc = sum(r << (frac - fr) for r, fr in terms)
        if f.out_format is None:
            raise TypeMismatch("fixed-point dot product needs an output format")
        return requantize(acc, frac, f.out_format)
    x = ins[0]
    raw = max(x.raw, 0) if f.kind == "relu" else x.raw
    return requantize(raw, x.format.frac_bits, f.out_format or x.format)


def _check_binding(net: Network, binding: Mapping[str, Any], expected: Iterable[str], what: str):
    expected = list(expected)
    missing = [e for e in expected if e not in binding]
    if missing:
        raise MissingBinding(f"{what} not bound: {', '.join(missing)}")
    extra = sorted(set(binding) - set(expected))
    if extra:
        raise BindingError(f"not {what} of this network: {', '.join(extra)}")
    for e in expected:
        if not net.edge_types[e].check(binding[e]):
            raise TypeMismatch(f"value {binding[e]!r} for edge {e} is not {net.edge_types[e]}")


def trace(net: Network, params: Mapping[str, Any], inputs: Mapping[str, Any]) -> dict[str, Any]:
    """Evaluate and return the value of every edge."""
    params = params or {}
    _check_binding(net, params, net.param_edges, "parameters")
    _check_binding(net, inputs, net.inputs, "inputs")
    values = dict(params)
    values.update(inputs)
    for v in topo_sort(net):
        outs = apply_leaf(v.func, [values[e] for e in v.params], [values[e] for e in v.ins])
        for e, val in zip(v.outs, outs):
            if not net.edge_types[e].check(val):
                raise TypeMismatch(f"vertex {v.name} produced {val!r} for edge {e} of type {net.edge_types[e]}")
            values[e] = val
    return values


def evaluate(net: Network, params: Mapping[str, Any] | None, inputs: Mapping[str, Any]) -> dict[str, Any]:
    """The network function restricted to its primary outputs."""
    values = trace(net, params or {}, inputs)
    return {e: values[e] for e in net.priout}


# -- bit-parallel simulation of Boolean netlists ---------------------------

_PARALLEL_KINDS = {"truth_table", "full_adder", "identity", "const"}


def supports_bit_parallel(net: Network) -> bool:
    return all(e.dtype.kind == "bool" for e in net.edges) and all(
        v.func.kind in _PARALLEL_KINDS for v in net.vertices
    )


def simulate_bit_parallel(net: Network, params: Mapping[str, bool] | None = None) -> dict[str, int]:
    """Evaluate all input assignments at once; edge values are 2**K-bit masks.

    Bit ``i`` of an edge's mask is its value under assignment index ``i``.
    """
    inputs = net.inputs
    k = len(inputs)
    full = (1 << (1 << k)) - 1
    params = params or {}
    _check_binding(net, params, net.param_edges, "parameters")
    values: dict[str, int] = {p: full if params[p] else 0 for p in net.param_edges}
    for j, e in enumerate(inputs):
        values[e] = _var_mask(j, k)
    for v in topo_sort(net):
        f = v.func
        xs = [values[e] for e in v.ins]
        if f.kind == "const":
            outs = [full if b else 0 for b in f.values]
        elif f.kind == "identity":
            outs = xs
        elif f.kind == "full_adder":
            a, b, c = xs
            outs = [a ^ b ^ c, (a & b) | (c & (a | b))]
        else:
            outs = [_table_mask(t, xs, full) for t in f.tables]
        values.update(zip(v.outs, outs))
    return values


def _var_mask(j: int, k: int) -> int:
    # assignments whose bit j is set: blocks of 2**j ones every 2**(j+1)
    block = ((1 << (1 << j)) - 1) << (1 << j)
    period = 1 << (j + 1)
    mask = 0
    for start in range(0, 1 << k, period):
        mask |= block << start
    return mask


def _table_mask(t: TruthTable, xs: Sequence[int], full: int) -> int:
    if t.mask == 0:
        return 0
    out = 0
    for idx in range(t.size):
        if not (t.mask >> idx) & 1:
            continue
        term = full
        for j, x in enumerate(xs):
            term &= x if (idx >> j) & 1 else full ^ x
        out |= term
    return out


# -- JSON ------------------------------------------------------------------

def dtype_to_json(d: DataType) -> dict:
    if d.kind == "fixed":
        return {"kind": "fixed", **d.format.to_json()}
    return {"kind": d.kind}


def dtype_from_json(obj: Mapping) -> DataType:
    kind = obj["kind"]
    if kind == "fixed":
        return DataType.fixed(FixedPointFormat.from_json(obj))
    return DataType(kind)


def value_to_json(v):
    if isinstance(v, FixedValue):
        return {"raw": v.raw}
    if isinstance(v, Fraction):
        return float(v)
    return v


def value_from_json(obj, dtype: DataType):
    kind = dtype.kind
    if kind == "bool":
        if not isinstance(obj, bool):
            raise TypeMismatch(f"expected true/false, got {obj!r}")
        return obj
    if kind == "pm1":
        if isinstance(obj, bool) or obj not in (-1, 1):
            raise TypeMismatch(f"expected -1 or +1, got {obj!r}")
        return int(obj)
    if kind == "real":
        if isinstance(obj, bool) or not isinstance(obj, (int, float)):
            raise TypeMismatch(f"expected a number, got {obj!r}")
        return float(obj)
    if isinstance(obj, Mapping) and "raw" in obj:
        try:
            return FixedValue(dtype.format, int(obj["raw"]))
        except ValueError as exc:
            raise TypeMismatch(str(exc)) from None
    raise TypeMismatch(f"expected {{\"raw\": k}} for {dtype}, got {obj!r}")


def func_to_json(f: Func) -> dict:
    k = f.kind
    out: dict[str, Any] = {"kind": k}
    if k == "dot":
        out.update(arity=f.arity, bias=f.bias)
    elif k == "truth_table":
        bits = [t.bits for t in f.tables]
        out.update(arity=f.arity, bits=bits[0] if len(bits) == 1 else bits)
    elif k == "bnn":
        out.update(w=list(f.weights), c=f.threshold)
    elif k == "const":
        vals = [value_to_json(v) for v in f.values]
        if len(vals) == 1:
            out["value"] = vals[0]
        else:
            out["values"] = vals
    if f.out_format is not None:
        out["out"] = f.out_format.to_json()
    return out


def func_from_json(obj: Mapping, out_types: Sequence[DataType] = ()) -> Func:
    k = obj.get("kind")
    fmt = FixedPointFormat.from_json(obj["out"]) if "out" in obj else None
    if k == "dot":
        return Func.dot(int(obj["arity"]), bool(obj.get("bias", False)), fmt)
    if k == "relu":
        return Func.relu(fmt)
    if k == "sigmoid":
        return Func.sigmoid()
    if k == "identity":
        return Func.identity(fmt)
    if k == "full_adder":
        return Func.full_adder()
    if k == "truth_table":
        bits = obj["bits"]
        bits = [bits] if isinstance(bits, str) else list(bits)
        f = Func.table(*bits)
        if "arity" in obj and int(obj["arity"]) != f.arity:
            raise ValueError(f"truth table arity {obj['arity']} does not match {len(bits[0])} bits")
        return f
    if k == "bnn":
        return Func.bnn([int(w) for w in obj["w"]], int(obj["c"]))
    if k == "const":
        raw = [obj["value"]] if "value" in obj else list(obj["values"])
        if len(out_types) != len(raw):
            raise ValueError("const leaf needs one value per output edge")
        return Func.const(*(value_from_json(r, d) for r, d in zip(raw, out_types)))
    raise ValueError(f"unknown function kind {k!r}")


def network_to_json(net: Network) -> dict:
    return {
        "edges": [{"id": e.id, "type": dtype_to_json(e.dtype)} for e in net.edges],
        "vertices": [
            {
                "name": v.name,
                "params": list(v.params),
                "ins": list(v.ins),
                "outs": list(v.outs),
                "func": func_to_json(v.func),
            }
            for v in net.vertices
        ],
        "priout": list(net.priout),
    }


def network_from_json(obj: Mapping) -> Network:
    try:
        edges = [EdgeDecl(str(e["id"]), dtype_from_json(e["type"])) for e in obj["edges"]]
        types = {e.id: e.dtype for e in edges}
        vertices = []
        for v in obj["vertices"]:
            outs = [str(e) for e in v["outs"]]
            out_types = [types[e] for e in outs if e in types]
            vertices.append(
                Vertex(
                    name=str(v["name"]),
                    func=func_from_json(v["func"], out_types),
                    ins=[str(e) for e in v.get("ins", [])],
                    outs=outs,
                    params=[str(e) for e in v.get("params", [])],
                )
            )
        return Network(edges, vertices, [str(e) for e in obj["priout"]])
    except (KeyError, TypeError, AttributeError) as exc:
        raise NetworkError(f"malformed network description: {exc!r}") from None
    except ValueError as exc:
        raise NetworkError(f"malformed network description: {exc}") from None


def binding_to_json(net: Network, binding: Mapping[str, Any]) -> dict:
    return {e: value_to_json(v) for e, v in binding.items()}


def binding_from_json(net: Network, obj: Mapping) -> dict[str, Any]:
    out = {}
    for e, raw in obj.items():
        if e not in net.edge_types:
            raise BindingError(f"unknown edge in binding: {e}")
        out[e] = value_from_json(raw, net.edge_types[e])
    return out


# -- DOT -------------------------------------------------------------------

def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(net: Network, name: str = "network") -> str:
    """Graphviz rendering that also carries everything needed to re-import it."""
    lines = [f"digraph {_dot_quote(name)} {{", "  rankdir=LR;"]
    prio = set(net.priout)
    for e in net.edges:
        attrs = {
            "shape": "plaintext",
            "label": e.id,
            "dtype": json.dumps(dtype_to_json(e.dtype), sort_keys=True),
        }
        if e.id in prio:
            attrs["priout"] = str(net.priout.index(e.id))
        lines.append(f"  {_dot_quote('e:' + e.id)} [{_dot_attrs(attrs)}];")
    for v in net.vertices:
        attrs = {
            "shape": "box",
            "label": f"{v.name}\\n{v.func}",
            "func": json.dumps(func_to_json(v.func), sort_keys=True),
            "params": ",".join(v.params),
            "ins": ",".join(v.ins),
            "outs": ",".join(v.outs),
        }
        lines.append(f"  {_dot_quote('v:' + v.name)} [{_dot_attrs(attrs)}];")
    for v in net.vertices:
        for role, edges in (("param", v.params), ("in", v.ins)):
            for pos, e in enumerate(edges):
                src = net.drivers.get(e)
                tail = f"v:{net.vertices[src].name}" if src is not None else f"e:{e}"
                lines.append(
                    f"  {_dot_quote(tail)} -> {_dot_quote('v:' + v.name)} "
                    f"[label={_dot_quote(e)}, role={role}, pos={pos}];"
                )
        for e in v.outs:
            if e in prio:
                lines.append(f"  {_dot_quote('v:' + v.name)} -> {_dot_quote('e:' + e)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_attrs(attrs: Mapping[str, str]) -> str:
    return ", ".join(f"{k}={_dot_quote(v)}" for k, v in attrs.items())


_DOT_NODE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)"\s*\[(.*)\];\s*$')
_DOT_ATTR = re.compile(r'(\w+)="((?:[^"\\]|\\.)*)"')


def _dot_unquote(s: str) -> str:
    return re.sub(r"\\(.)", lambda m: m.group(1) if m.group(1) in '"\\' else "\\" + m.group(1), s)


def from_dot(text: str) -> Network:
    """Re-import a network written by :func:`to_dot`."""
    edges, vertices, prio = [], [], []
    for line in text.splitlines():
        m = _DOT_NODE.match(line)
        if not m or "->" in line.split("[", 1)[0]:
            continue
        node = _dot_unquote(m.group(1))
        attrs = {k: _dot_unquote(v) for k, v in _DOT_ATTR.findall(m.group(2))}
        if node.startswith("e:"):
            edges.append({"id": node[2:], "type": json.loads(attrs["dtype"])})
            if "priout" in attrs:
                prio.append((int(attrs["priout"]), node[2:]))
        elif node.startswith("v:"):
            split = lambda s: [x for x in s.split(",") if x]  # noqa: E731
            vertices.append(
                {
                    "name": node[2:],
                    "func": json.loads(attrs["func"]),
                    "params": split(attrs.get("params", "")),
                    "ins": split(attrs.get("ins", "")),
                    "outs": split(attrs.get("outs", "")),
                }
            )
    return network_from_json({"edges": edges, "vertices": vertices, "priout": [e for _, e in sorted(prio)]})


def with_vertices(net: Network, vertices: Iterable[Vertex]) -> Network:
    return replace(net, vertices=tuple(vertices))
