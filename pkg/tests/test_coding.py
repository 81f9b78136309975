import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolnet_forge.coding import (
    BIT,
    Encoding,
    InducedMetric,
    Pm1,
    ReflectedGray,
    StdBinary,
    TwosComplement,
    Unary,
    decode,
    decode_matrix,
    encode,
    metric,
    parse_metric,
)
from boolnet_forge.errors import InvalidPattern, WidthMismatch
from boolnet_forge.lipschitz import adder_metrics
from helpers import bitvec


def test_decode_examples():
    assert decode(StdBinary(3), bitvec("101")) == 5
    assert decode(TwosComplement(4), bitvec("1010")) == -6
    assert encode(ReflectedGray(3), 5) == bitvec("111")
    assert decode(Pm1(3), bitvec("101")) == (1, -1, 1)
    assert decode(BIT, (True,)) == 1
    assert decode(Unary(4), bitvec("0011")) == 2


def test_decode_errors():
    with pytest.raises(InvalidPattern):
        decode(Unary(3), bitvec("101"))
    with pytest.raises(WidthMismatch):
        decode(StdBinary(3), bitvec("10"))
    with pytest.raises(ValueError):
        encode(StdBinary(3), 8)


KINDS = [StdBinary, TwosComplement, ReflectedGray, Unary, Pm1]


@pytest.mark.parametrize("make", KINDS)
@pytest.mark.parametrize("k", range(1, 11))
def test_roundtrip_exhaustive(make, k):
    enc = make(k)
    for v in enc.values():
        assert decode(enc, encode(enc, v)) == v


@pytest.mark.parametrize("k", range(1, 11))
def test_gray_adjacency(k):
    enc = ReflectedGray(k)
    for v in range((1 << k) - 1):
        a, b = encode(enc, v), encode(enc, v + 1)
        assert sum(x != y for x, y in zip(a, b)) == 1


@pytest.mark.parametrize("k", range(1, 9))
def test_std_binary_injective(k):
    vals = [decode(StdBinary(k), x) for x in itertools.product((False, True), repeat=k)]
    assert len(set(vals)) == 1 << k


@pytest.mark.parametrize("make", KINDS)
def test_decode_matrix_agrees_with_scalar(make):
    enc = make(4)
    rows = np.array(list(itertools.product((0, 1), repeat=4)))
    values, valid = decode_matrix(enc, rows)
    for row, val, ok in zip(rows, values, valid):
        bits = tuple(map(bool, row))
        if not ok:
            with pytest.raises(InvalidPattern):
                decode(enc, bits)
            continue
        want = decode(enc, bits)
        assert tuple(val) == (want if isinstance(want, tuple) else (want,))


def test_metric_examples():
    d, e = adder_metrics(2)
    a = bitvec("10") + bitvec("00") + (False,)
    b = bitvec("01") + bitvec("00") + (False,)
    assert metric(d, a, b) == 1
    assert metric(parse_metric("Hamming[3]"), bitvec("101"), bitvec("001")) == 1
    assert metric(e, bitvec("100"), bitvec("011")) == 1


def test_parse_metric():
    m = parse_metric("L1: bin[3] | bin[3] | bit")
    assert m == InducedMetric.concat([StdBinary(3), StdBinary(3), BIT], "L1")
    half = parse_metric("Linf*1/2: tc[4]")
    assert half.scale == Fraction(1, 2) and half.norm == "Linf"
    assert str(parse_metric(str(m))) == str(m)
    with pytest.raises(ValueError):
        parse_metric("L1 bin[3]")
    with pytest.raises(ValueError):
        parse_metric("L1: hex[3]")


METRICS = [
    "L1: bin[3] | bin[3] | bit",
    "Linf: tc[4] | gray[4]",
    "L1: gray[6] | bin[6]",
    "Hamming[8]",
    "L1*1/3: pm1[3] | unary[4]",
    "Linf: bin[12]",
]


def _points(m: InducedMetric, limit: int, rnd) -> list[tuple[bool, ...]]:
    allx = [x for x in itertools.product((False, True), repeat=m.width) if _valid(m, x)]
    if len(allx) <= limit:
        return allx
    return rnd.sample(allx, limit)


def _valid(m, x):
    try:
        m.decode(x)
        return True
    except InvalidPattern:
        return False


@pytest.mark.parametrize("text", METRICS)
def test_metric_axioms(text):
    import random

    m = parse_metric(text)
    pts = _points(m, 64 if m.width > 8 else 10_000, random.Random(0))
    for a in pts:
        assert metric(m, a, a) == 0
    for a, b in itertools.combinations(pts, 2):
        dab = metric(m, a, b)
        assert dab == metric(m, b, a)
        assert (dab == 0) == (m.decode(a) == m.decode(b))
    sample = pts[:24]
    for a, b, c in itertools.product(sample, repeat=3):
        assert metric(m, a, c) <= metric(m, a, b) + metric(m, b, c)


def test_metric_axioms_exhaustive_width_twelve():
    # every triple would be 2^36; instead check the triangle inequality on the
    # decoded lattice, which is the image of all 2^12 points
    m = parse_metric("L1: bin[4] | tc[4] | gray[4]")
    rows = np.array(list(itertools.product((0, 1), repeat=12)))
    vals, valid = m.decode_matrix(rows)
    assert valid.all()
    assert len({tuple(v) for v in vals}) == 1 << 12  # injective, so d=0 iff equal bits
    pts = vals[:: 97]
    dist = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=-1)
    assert (dist == dist.T).all()
    assert (np.diag(dist) == 0).all()
    assert (dist[:, :, None] <= dist[:, None, :] + dist.T[None, :, :]).all()


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(METRICS), st.data())
def test_scaled_metric(text, data):
    m = parse_metric(text)
    pts = [tuple(data.draw(st.lists(st.booleans(), min_size=m.width, max_size=m.width))) for _ in range(2)]
    if not all(_valid(m, p) for p in pts):
        return
    lam = Fraction(data.draw(st.integers(1, 9)), data.draw(st.integers(1, 9)))
    assert metric(m.scaled(lam), *pts) == lam * metric(m, *pts)


def test_reversed_metric_reads_back_to_front():
    m = InducedMetric.concat([StdBinary(3)])
    r = m.reversed()
    assert r.decode(bitvec("001")) == (4,)
    assert m.decode(bitvec("001")) == (1,)


def test_encoding_validation():
    with pytest.raises(ValueError):
        Encoding("hex", 3)
    with pytest.raises(ValueError):
        Encoding("bit", 2)
