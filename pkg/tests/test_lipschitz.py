from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolnet_forge.boolfunc import TruthTable, tabulate
from boolnet_forge.coding import metric, parse_metric
from boolnet_forge.errors import InvalidPattern, SignatureMismatch, TooWide, WidthMismatch
from boolnet_forge.graph import BOOL, EdgeDecl, Func, Network, Vertex, validate
from boolnet_forge.lipschitz import (
    CARRY_PASS,
    adder_metrics,
    is_k_lipschitz,
    min_lipschitz,
    replace_leaves,
    ripple_adder,
)
from helpers import naive_min_lipschitz


def carry_pass_adder(n):
    return replace_leaves(ripple_adder(n), {Func.full_adder(): CARRY_PASS})


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_adder_is_one_lipschitz(n):
    d, e = adder_metrics(n)
    report = min_lipschitz(ripple_adder(n), d, e)
    assert report.min_constant == 1
    i, j = report.witness
    assert j > i


def test_adder_witness_is_unit_step():
    d, e = adder_metrics(2)
    report = min_lipschitz(ripple_adder(2), d, e)
    # smallest-index maximiser: inputs a=0 vs a=1 read as one step
    assert report.to_json()["min_constant"] == "1/1"
    assert report.pair_count == 32 * 31 // 2


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_carry_pass_leaf_gives_power_of_two(n):
    d, e = adder_metrics(n)
    assert min_lipschitz(carry_pass_adder(n), d, e).min_constant == 2**n


def test_constant_network_is_zero_lipschitz():
    net = Network(
        [EdgeDecl(e, BOOL) for e in ("a", "b", "y")],
        [Vertex("g", Func.table("0000"), ins=("a", "b"), outs=("y",))],
        ("y",),
    )
    report = min_lipschitz(net, parse_metric("L1: bin[2]"), parse_metric("L1: bit"))
    assert report.min_constant == 0


def test_is_k_lipschitz_examples():
    d, e = adder_metrics(2)
    net = ripple_adder(2)
    assert is_k_lipschitz(net, d, e, 1) == (True, None)
    ok, (i, j) = is_k_lipschitz(net, d, e, Fraction(1, 2))
    assert not ok
    tables = tabulate(net)
    out_i = sum(t(*[(i >> b) & 1 for b in range(5)]) << k for k, t in enumerate(reversed(tables)))
    out_j = sum(t(*[(j >> b) & 1 for b in range(5)]) << k for k, t in enumerate(reversed(tables)))
    assert abs(out_i - out_j) >= 1


def test_identity_is_k_lipschitz_for_k_at_least_one():
    ident = [TruthTable.projection(j, 3) for j in range(3)]
    d = parse_metric("L1: gray[3]")
    for k in (1, 2, Fraction(3, 2)):
        assert is_k_lipschitz(ident, d, d, k)[0]


def test_unary_domain_skips_non_codewords():
    # "00" -> 0, "01" -> 1, "11" -> 2; "10" is not a unary codeword and is never paired
    d = parse_metric("L1: unary[2]")
    e = parse_metric("L1: bit")
    report = min_lipschitz([TruthTable.from_bits("0101")], d, e)
    assert report.pair_count == 3
    assert report.min_constant == 1
    assert min_lipschitz([TruthTable.from_bits("0001")], d, e).min_constant == 1
    # only index 1 (the non-codeword "10") is set, so f is constant on the domain
    assert min_lipschitz([TruthTable.from_bits("0100")], d, e).min_constant == 0


def test_ratio_above_one_from_bit_swap():
    d = parse_metric("L1: bit | bit")
    e = parse_metric("L1: bin[2]")
    swap = [TruthTable.projection(1, 2), TruthTable.projection(0, 2)]
    report = min_lipschitz(swap, d, e)
    assert report.min_constant == 2
    assert not report.infinite


def test_guards_and_width_checks():
    d = parse_metric("L1: bin[17]")
    with pytest.raises(TooWide):
        min_lipschitz([TruthTable.constant(False, 17)], d, parse_metric("L1: bit"))
    with pytest.raises(WidthMismatch):
        min_lipschitz([TruthTable.constant(False, 3)], parse_metric("L1: bin[2]"), parse_metric("L1: bit"))
    with pytest.raises(InvalidPattern):
        min_lipschitz([TruthTable.from_bits("0100"), TruthTable.from_bits("0000")], parse_metric("L1: bin[2]"), parse_metric("L1: unary[2]"))


def test_replace_leaves_rules():
    net = ripple_adder(3)
    same = replace_leaves(net, {})
    assert tabulate(same) == tabulate(net)
    with pytest.raises(SignatureMismatch):
        replace_leaves(net, {Func.full_adder(): Func.table("0110")})
    assert validate(carry_pass_adder(3)).ok


def test_scale_covariance():
    d, e = adder_metrics(2)
    base = min_lipschitz(carry_pass_adder(2), d, e).min_constant
    for lam in (Fraction(2), Fraction(1, 3), Fraction(5, 7)):
        assert min_lipschitz(carry_pass_adder(2), d.scaled(lam), e).min_constant == base / lam


METRIC_PAIRS = [
    ("L1: bin[3]", "L1: bin[2]"),
    ("L1: gray[3]", "Linf: tc[2]"),
    ("Hamming[3]", "L1: bit | bit"),
    ("Linf: bit | bin[2]", "L1: pm1[2]"),
    ("L1*2/3: tc[3]", "L1*3/2: gray[2]"),
]


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(METRIC_PAIRS), st.integers(0, 255), st.integers(0, 255), st.fractions(0, 8, max_denominator=6))
def test_oracle_consistency(pair, m0, m1, k):
    d, e = (parse_metric(s) for s in pair)
    tables = [TruthTable(3, m0), TruthTable(3, m1)]

    report = min_lipschitz(tables, d, e)
    want = naive_min_lipschitz(lambda x: tuple(t(*x) for t in tables), 3, d, e)
    assert report.min_constant == want
    ok, witness = is_k_lipschitz(tables, d, e, k)
    assert ok == (report.min_constant <= k)
    if not ok:
        assert witness is not None
    if report.witness is not None and report.min_constant > 0:
        i, j = report.witness
        xi = tuple(bool((i >> b) & 1) for b in range(3))
        xj = tuple(bool((j >> b) & 1) for b in range(3))
        fi = tuple(t(*xi) for t in tables)
        fj = tuple(t(*xj) for t in tables)
        assert metric(e, fi, fj) == report.min_constant * metric(d, xi, xj)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 255), st.fractions(0, 4, max_denominator=4), st.fractions(0, 4, max_denominator=4))
def test_monotone_in_k(mask, k1, k2):
    d, e = parse_metric("L1: bin[3]"), parse_metric("L1: bit")
    lo, hi = sorted((k1, k2))
    if is_k_lipschitz([TruthTable(3, mask)], d, e, lo)[0]:
        assert is_k_lipschitz([TruthTable(3, mask)], d, e, hi)[0]


def test_report_json_shape():
    d, e = adder_metrics(1)
    doc = min_lipschitz(carry_pass_adder(1), d, e).to_json()
    assert doc["min_constant"] == "2/1"
    assert len(doc["witness"]) == 2 and all(len(w) == 3 for w in doc["witness"])
    assert doc["pairs"] == 28


def test_adder_n4_is_fast():
    import time

    d, e = adder_metrics(4)
    t0 = time.perf_counter()
    min_lipschitz(ripple_adder(4), d, e)
    assert time.perf_counter() - t0 < 5
