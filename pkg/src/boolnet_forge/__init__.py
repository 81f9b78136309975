"""Boolean networks for learned functions: typed dataflow graphs, exact
Lipschitz analysis, functional decoupling search, binarised-neuron
compilation and a real -> fixed-point -> netlist pipeline."""

from .bnn import BnnNode, bnn_eval, bnn_to_netlist, circuit_to_bnn, gadget, tt_to_bnn
from .boolfunc import TruthTable, essential_inputs, nondegenerate_tables, tabulate
from .coding import (
    BIT,
    Encoding,
    InducedMetric,
    Pm1,
    ReflectedGray,
    StdBinary,
    TwosComplement,
    Unary,
    decode,
    encode,
    metric,
    parse_metric,
)
from .decouple import (
    Biclique,
    Convention,
    build_bipartite,
    calibrate,
    enumerate_klipschitz_pairs,
    max_edge_biclique,
    verify_decoupling,
)
from .errors import BoolnetError, GuardError
from .fixedpoint import FixedPointFormat, FixedValue, quantize_value
from .graph import BOOL, PM1, REAL, DataType, EdgeDecl, Func, Network, Vertex, evaluate, topo_sort, validate
from .lipschitz import is_k_lipschitz, min_lipschitz, ripple_adder
from .quant import LossSpec, SampleSpec, check_commute, core_generate, estimate_metric, quantize_network, simplify

__version__ = "0.1.0"

__all__ = [
    "Biclique",
    "BIT",
    "bnn_eval",
    "bnn_to_netlist",
    "BnnNode",
    "BOOL",
    "BoolnetError",
    "build_bipartite",
    "calibrate",
    "check_commute",
    "circuit_to_bnn",
    "Convention",
    "core_generate",
    "DataType",
    "decode",
    "EdgeDecl",
    "encode",
    "Encoding",
    "enumerate_klipschitz_pairs",
    "essential_inputs",
    "estimate_metric",
    "evaluate",
    "FixedPointFormat",
    "FixedValue",
    "Func",
    "gadget",
    "GuardError",
    "InducedMetric",
    "is_k_lipschitz",
    "LossSpec",
    "max_edge_biclique",
    "metric",
    "min_lipschitz",
    "Network",
    "nondegenerate_tables",
    "parse_metric",
    "Pm1",
    "PM1",
    "quantize_network",
    "quantize_value",
    "REAL",
    "ReflectedGray",
    "ripple_adder",
    "SampleSpec",
    "simplify",
    "StdBinary",
    "tabulate",
    "topo_sort",
    "TruthTable",
    "tt_to_bnn",
    "TwosComplement",
    "Unary",
    "validate",
    "verify_decoupling",
    "Vertex",
]
