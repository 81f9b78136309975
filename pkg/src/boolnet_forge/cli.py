"""Command-line front end.

Every command reads plain files (network JSON or DOT, bindings as JSON
objects) and prints either a network document or one JSON report line.
Exit status: 0 on success, 1 on user or validation errors, 2 when a size
guard refuses the job.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import bnn, decouple, lipschitz, quant
from .boolfunc import TruthTable, tabulate
from .coding import parse_metric
from .errors import BoolnetError, GuardError, NetworkError
from .fixedpoint import FixedPointFormat
from .graph import (
    Func,
    Network,
    binding_from_json,
    binding_to_json,
    evaluate,
    from_dot,
    network_from_json,
    network_to_json,
    to_dot,
    validate,
)

METRIC_HELP = (
    "metric mini-format: '<norm>[*p/q]: <enc>[w] | <enc>[w] | ...' with norm L1, Linf or Hamming "
    "and enc bin, tc, gray, unary, pm1 or bit; slices are read most significant bit first, "
    "e.g. 'L1: bin[3] | bin[3] | bit'. 'Hamming[6]' is short for six bit slices."
)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for guards here
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- file helpers ----------------------------------------------------------

def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def load_network(path: str) -> tuple[Network, dict]:
    """A network and any parameter binding stored alongside it under ``"params"``."""
    if path.endswith(".dot"):
        try:
            return from_dot(Path(path).read_text()), {}
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise NetworkError(f"{path}: expected a JSON object")
    net = network_from_json(obj)
    params = binding_from_json(net, obj.get("params", {}))
    return net, params


def _load_params(net: Network, path: str | None, embedded: dict) -> dict:
    if path is None:
        return embedded
    obj = _read_json(path)
    if not isinstance(obj, dict):
        raise UsageError(f"{path}: expected a JSON object of parameter values")
    return binding_from_json(net, obj)


def _network_doc(net: Network, params: dict | None = None) -> dict:
    doc = network_to_json(net)
    if params:
        doc["params"] = binding_to_json(net, params)
    return doc


def _emit_network(net: Network, out: str | None, params: dict | None = None):
    if out and out.endswith(".dot"):
        text = to_dot(net)
    else:
        text = json.dumps(_network_doc(net, params), indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _say(obj) -> None:
    print(obj if isinstance(obj, str) else json.dumps(obj, sort_keys=False))


def _rational(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"expected an integer or 'p/q', got {text!r}") from None
    if value < 0:
        raise UsageError(f"expected a non-negative rational, got {text}")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None


def _format(text: str, unsigned: bool) -> FixedPointFormat:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--format expects T,F, got {text!r}")
    try:
        return FixedPointFormat(int(parts[0]), int(parts[1]), not unsigned)
    except ValueError as exc:
        raise UsageError(f"--format {text}: {exc}") from None


def _convention(text: str | None) -> decouple.Convention:
    if text is None:
        return decouple.PRIMARY
    if text.isdigit() and int(text) < len(decouple.CONVENTIONS):
        return decouple.CONVENTIONS[int(text)]
    for c in decouple.CONVENTIONS:
        if c.name == text:
            return c
    names = ", ".join(f"{i}={c.name}" for i, c in enumerate(decouple.CONVENTIONS))
    raise UsageError(f"unknown convention {text!r}; choose from {names}")


# -- commands --------------------------------------------------------------

def cmd_validate(args) -> int:
    net, _ = load_network(args.net)
    report = validate(net)
    _say(report.to_json())
    for v in report.violations:
        print(f"violation: {v}", file=sys.stderr)
    return 0 if report.ok else 1


def cmd_eval(args) -> int:
    net, embedded = load_network(args.net)
    params = _load_params(net, args.params, embedded)
    obj = _read_json(args.inputs)
    if not isinstance(obj, dict):
        raise UsageError(f"{args.inputs}: expected a JSON object of input values")
    out = evaluate(net, params, binding_from_json(net, obj))
    _say(binding_to_json(net, out))
    return 0


def cmd_lipschitz(args) -> int:
    net, params = load_network(args.net)
    d, e = parse_metric(args.d), parse_metric(args.e)
    report = lipschitz.min_lipschitz(net, d, e, params=params)
    doc = report.to_json()
    if args.k is not None:
        ok, _ = lipschitz.is_k_lipschitz(net, d, e, _rational(args.k), params=params)
        doc["k"] = args.k
        doc["is_k_lipschitz"] = ok
    _say(doc)
    return 0


def cmd_adder(args) -> int:
    net = lipschitz.ripple_adder(args.n)
    if args.leaf == "carry-pass":
        net = lipschitz.replace_leaves(net, {Func.full_adder(): lipschitz.CARRY_PASS})
    d, e = lipschitz.adder_metrics(args.n)
    t0 = time.perf_counter()
    report = lipschitz.min_lipschitz(net, d, e)
    doc = {"n": args.n, "leaf": args.leaf, **report.to_json(), "seconds": round(time.perf_counter() - t0, 3)}
    if args.out:
        _emit_network(net, args.out)
    _say(doc)
    return 0


def cmd_decouple_enumerate(args) -> int:
    conv = _convention(args.convention)
    t0 = time.perf_counter()
    pairs = decouple.enumerate_klipschitz_pairs(_rational(args.k), convention=conv, jobs=args.jobs)
    elapsed = time.perf_counter() - t0
    out = Path(args.out)
    with out.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["f1_bits_s", "f1_bits_t", "f0_bits_s", "f0_bits_t"])
        w.writerows(decouple.pair_rows(pairs))
    _say(f"pairs: {len(pairs)}")
    _say({"k": args.k, "convention": conv.name, "pairs": len(pairs), "csv": str(out), "seconds": round(elapsed, 3)})
    return 0


def _read_pairs(path: str) -> list[tuple[int, int]]:
    index = {(c.g_s.bits, c.g_t.bits): i for i, c in enumerate(decouple.candidates())}
    try:
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    pairs = []
    for n, row in enumerate(rows, start=2):
        try:
            u = index[(row["f1_bits_s"], row["f1_bits_t"])]
            v = index[(row["f0_bits_s"], row["f0_bits_t"])]
        except (KeyError, TypeError):
            raise UsageError(f"{path}:{n}: not a candidate pair row") from None
        pairs.append((u, v))
    return pairs


def _pairs(args) -> list[tuple[int, int]]:
    if args.pairs:
        return _read_pairs(args.pairs)
    return decouple.enumerate_klipschitz_pairs(_rational(args.k), convention=_convention(args.convention), jobs=args.jobs)


def cmd_decouple_biclique(args) -> int:
    g = decouple.build_bipartite(_pairs(args))
    if args.size:
        sizes = _int_list(args.size)
        if len(sizes) != 2:
            raise UsageError("--size expects a,b")
        s1, s0 = sizes
        b = decouple.find_biclique(g, s1, s0)
        if b is None:
            _say({"found": False, "size": [s1, s0]})
            return 1
    else:
        b = decouple.max_edge_biclique(g)
    _say(b.to_json())
    return 0


def cmd_decouple_calibrate(args) -> int:
    rows = decouple.calibrate(_rational(args.k), jobs=args.jobs)
    width = max(len(c.name) for c, _ in rows)
    for i, (c, n) in enumerate(rows):
        mark = "  (primary)" if c == decouple.PRIMARY else ""
        print(f"{i}  {c.name:<{width}}  {n:>5}{mark}")
    _say({"k": args.k, "counts": {c.name: n for c, n in rows}})
    return 0


def cmd_decouple_verify(args) -> int:
    obj = _read_json(args.biclique)
    try:
        b = decouple.Biclique(tuple(obj["S1"]), tuple(obj["S0"]))
    except (KeyError, TypeError):
        raise UsageError(f"{args.biclique}: expected {{\"S1\": [...], \"S0\": [...]}}") from None
    g = decouple.build_bipartite(())
    conv = _convention(args.convention)
    ok = decouple.verify_decoupling(g, b, _rational(args.k), conv)
    _say({"verified": ok, "combinations": b.edge_count, "k": args.k, "convention": conv.name})
    return 0 if ok else 1


def _equivalence_line(count: int) -> str:
    return f"equivalence: verified ({count} assignments)"


def cmd_bnn_compile(args) -> int:
    bits = args.table.strip()
    if not bits or set(bits) - {"0", "1"} or len(bits) & (len(bits) - 1):
        raise UsageError(f"--table expects 2^K characters of 0/1, got {bits!r}")
    t = TruthTable.from_bits(bits)
    net = bnn.tt_to_bnn(t)
    if tabulate(net) != [t]:
        raise BoolnetError("compiled network disagrees with the table")
    _emit_network(net, args.out)
    _say(_equivalence_line(t.size))
    return 0


def cmd_bnn_lower(args) -> int:
    w = _int_list(args.w)
    try:
        node = bnn.BnnNode(tuple(w), args.c)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    net = bnn.bnn_to_netlist(node)
    if tabulate(net) != [bnn.node_table(node)]:
        raise BoolnetError("netlist disagrees with the node")
    _emit_network(net, args.out)
    _say(_equivalence_line(1 << node.n))
    return 0


def cmd_bnn_gadgets(args) -> int:
    for kind in ("AND", "OR", "NOT"):
        node = bnn.GADGETS[kind]
        t = bnn.node_table(node)
        ok = t == bnn.GADGET_TABLES[kind]
        print(f"{kind:<4} w={list(node.w)} c={node.c:+d}  table {t.bits}  {'ok' if ok else 'MISMATCH'}")
        if not ok:
            return 1
    print("verified")
    return 0


def cmd_quantize(args) -> int:
    g1, embedded = load_network(args.net)
    params = _load_params(g1, args.params, embedded)
    fmt = _format(args.format, args.unsigned)
    g2, qparams = quant.quantize_network(g1, fmt, params)
    _emit_network(g2, args.out, qparams)
    return 0


def cmd_synth(args) -> int:
    g2, embedded = load_network(args.net)
    params = _load_params(g2, args.params, embedded)
    g3 = quant.core_generate(g2, params)
    if args.simplify:
        g3 = quant.simplify(g3)
    _emit_network(g3, args.out)
    return 0


def cmd_commute(args) -> int:
    g2, embedded = load_network(args.g2)
    params = _load_params(g2, args.params, embedded)
    g3, _ = load_network(args.g3)
    t0 = time.perf_counter()
    result = quant.check_commute(g2, g3, params)
    _say({**result.to_json(), "seconds": round(time.perf_counter() - t0, 3)})
    return 0 if result.commutes else 1


def cmd_simplify(args) -> int:
    g3, _ = load_network(args.net)
    out = quant.simplify(g3)
    _emit_network(out, args.out)
    print(
        json.dumps({"vertices_before": len(g3.vertices), "vertices_after": len(out.vertices)}),
        file=sys.stderr if not args.out else sys.stdout,
    )
    return 0


def cmd_estimate(args) -> int:
    fa_net, pa = load_network(args.a)
    fb_net, pb = load_network(args.b)
    if args.bits:
        samples = quant.SampleSpec(None if args.n is None else args.n, args.seed, "bits")
    else:
        lo, hi = (float(x) for x in args.box.split(","))
        samples = quant.SampleSpec(10000 if args.n is None else args.n, args.seed, "uniform", lo, hi)
    fa, fb = quant.NetFunction(fa_net, pa), quant.NetFunction(fb_net, pb)
    value = quant.estimate_metric(fa, fb, quant.LossSpec(args.loss), samples)
    _say({"loss": args.loss, "samples": samples.count if samples.count is not None else "all", "seed": args.seed, "estimate": value})
    return 0


def cmd_export_dot(args) -> int:
    net, _ = load_network(args.net)
    text = to_dot(net)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


# -- parser ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="boolnet-forge", description="Boolean network analysis and synthesis.", epilog=METRIC_HELP)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def jobs_flag(sp):
        sp.add_argument("--jobs", type=int, default=None, help="worker processes (default: $BOOLNET_JOBS or 1)")

    sp = sub.add_parser("validate", help="check a network's structural rules")
    sp.add_argument("net")
    sp.set_defaults(run=cmd_validate)

    sp = sub.add_parser("eval", help="evaluate a network on one input binding")
    sp.add_argument("net")
    sp.add_argument("--inputs", required=True, help="JSON object edge -> value")
    sp.add_argument("--params", help="JSON object edge -> value (overrides embedded params)")
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("lipschitz", help="exact minimal Lipschitz constant", epilog=METRIC_HELP)
    sp.add_argument("net")
    sp.add_argument("--d", required=True, help="domain metric")
    sp.add_argument("--e", required=True, help="codomain metric")
    sp.add_argument("--k", help="also check a given constant, 'p/q'")
    sp.set_defaults(run=cmd_lipschitz)

    sp = sub.add_parser("adder", help="Lipschitz constant of the n-bit ripple-carry adder")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--leaf", choices=("full-adder", "carry-pass"), default="full-adder")
    sp.add_argument("--out", help="also write the network (JSON, or DOT by extension)")
    sp.set_defaults(run=cmd_adder)

    dec = sub.add_parser("decouple", help="functional decoupling experiment").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    sp = dec.add_parser("enumerate", help="list all k-Lipschitz node-function pairs")
    sp.add_argument("--k", default="2")
    sp.add_argument("--out", default="pairs.csv")
    sp.add_argument("--convention", help="index 0-7 or full name (see 'decouple calibrate')")
    jobs_flag(sp)
    sp.set_defaults(run=cmd_decouple_enumerate)
    sp = dec.add_parser("biclique", help="maximum-edge biclique of the pair graph")
    sp.add_argument("--pairs", help="CSV from 'decouple enumerate' (default: recompute)")
    sp.add_argument("--k", default="2")
    sp.add_argument("--size", help="look for a biclique with these side sizes, a,b")
    sp.add_argument("--convention")
    jobs_flag(sp)
    sp.set_defaults(run=cmd_decouple_biclique)
    sp = dec.add_parser("calibrate", help="pair counts under all eight conventions")
    sp.add_argument("--k", default="2")
    jobs_flag(sp)
    sp.set_defaults(run=cmd_decouple_calibrate)
    sp = dec.add_parser("verify", help="recheck every combination of a biclique")
    sp.add_argument("--biclique", required=True, help="JSON with S1 and S0 index lists")
    sp.add_argument("--k", default="2")
    sp.add_argument("--convention")
    sp.set_defaults(run=cmd_decouple_verify)

    bn = sub.add_parser("bnn", help="binarised-neuron compilation").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    sp = bn.add_parser("compile", help="truth table -> network of binarised neurons")
    sp.add_argument("--table", required=True, help="bits string, index order")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_bnn_compile)
    sp = bn.add_parser("lower", help="binarised neuron -> XNOR/popcount/compare netlist")
    sp.add_argument("--w", required=True, help="weights, e.g. +1,-1,+1")
    sp.add_argument("--c", type=int, required=True, help="integer threshold")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_bnn_lower)
    sp = bn.add_parser("gadgets", help="print and check the AND/OR/NOT gadgets")
    sp.set_defaults(run=cmd_bnn_gadgets)

    sp = sub.add_parser("quantize", help="real network -> fixed-point network")
    sp.add_argument("--net", required=True)
    sp.add_argument("--format", required=True, help="T,F applied to every edge")
    sp.add_argument("--unsigned", action="store_true")
    sp.add_argument("--params", help="JSON object of real parameter values")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_quantize)

    sp = sub.add_parser("synth", help="fixed-point network -> Boolean netlist")
    sp.add_argument("--net", required=True)
    sp.add_argument("--params")
    sp.add_argument("--simplify", action="store_true")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_synth)

    sp = sub.add_parser("commute", help="exhaustively compare a fixed-point network with its netlist")
    sp.add_argument("--g2", required=True)
    sp.add_argument("--g3", required=True)
    sp.add_argument("--params")
    sp.set_defaults(run=cmd_commute)

    sp = sub.add_parser("simplify", help="constant propagation and dead-vertex elimination")
    sp.add_argument("--net", required=True)
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_simplify)

    sp = sub.add_parser("estimate", help="sampled mean loss between two networks")
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--loss", choices=quant.LOSSES, default="absdiff")
    sp.add_argument("--n", type=int, help="sample count (bits: default exhaustive)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--box", default="-1,1", help="uniform sampling interval lo,hi")
    sp.add_argument("--bits", action="store_true", help="sample Boolean input patterns")
    sp.set_defaults(run=cmd_estimate)

    sp = sub.add_parser("export-dot", help="write a network as Graphviz DOT")
    sp.add_argument("net")
    sp.add_argument("--out")
    sp.set_defaults(run=cmd_export_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "jobs", None) is None and "jobs" in args:
            args.jobs = decouple.default_jobs()
        if getattr(args, "jobs", None) is not None and args.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return args.run(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except GuardError as exc:
        print(f"refused: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (BoolnetError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
