"""Encodings of Boolean vectors as numbers, and the metrics they induce.

Bit vectors are written most significant bit first: the tuple
``(x_{k-1}, ..., x_0)`` has ``x_0`` rightmost, and ``StdBinary`` decodes it
to ``sum(x_i * 2**i)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import InvalidPattern, WidthMismatch

ENCODING_KINDS = ("bin", "tc", "gray", "unary", "pm1", "bit")


@dataclass(frozen=True)
class Encoding:
    kind: str
    width: int = 1

    def __post_init__(self):
        if self.kind not in ENCODING_KINDS:
            raise ValueError(f"unknown encoding {self.kind!r}; choose from {ENCODING_KINDS}")
        if self.kind == "bit" and self.width != 1:
            raise ValueError("the bit encoding has width 1")
        if self.width < 1:
            raise ValueError("encodings need at least one bit")

    @property
    def dim(self) -> int:
        """Length of the decoded numeric vector."""
        return self.width if self.kind == "pm1" else 1

    def values(self) -> list:
        """Every value in the encoding's range, in increasing order."""
        k = self.width
        if self.kind in ("bin", "gray"):
            return list(range(1 << k))
        if self.kind == "tc":
            return list(range(-(1 << (k - 1)), 1 << (k - 1)))
        if self.kind == "unary":
            return list(range(k + 1))
        if self.kind == "bit":
            return [0, 1]
        return [tuple(1 if (i >> (k - 1 - j)) & 1 else -1 for j in range(k)) for i in range(1 << k)]

    def __str__(self):
        return self.kind if self.kind == "bit" else f"{self.kind}[{self.width}]"


def StdBinary(k: int) -> Encoding:  # noqa: N802
    return Encoding("bin", k)


def TwosComplement(k: int) -> Encoding:  # noqa: N802
    return Encoding("tc", k)


def ReflectedGray(k: int) -> Encoding:  # noqa: N802
    return Encoding("gray", k)


def Unary(k: int) -> Encoding:  # noqa: N802
    return Encoding("unary", k)


def Pm1(k: int) -> Encoding:  # noqa: N802
    return Encoding("pm1", k)


BIT = Encoding("bit", 1)


def _word(bits: Sequence[bool]) -> int:
    w = 0
    for b in bits:
        w = (w << 1) | bool(b)
    return w


def _bits(word: int, k: int) -> tuple[bool, ...]:
    return tuple(bool((word >> (k - 1 - j)) & 1) for j in range(k))


def gray_encode(v: int) -> int:
    return v ^ (v >> 1)


def gray_decode(g: int) -> int:
    v = 0
    while g:
        v ^= g
        g >>= 1
    return v


def decode(enc: Encoding, bits: Sequence[bool]):
    """Number represented by ``bits`` (a tuple of +-1 for the ``pm1`` encoding)."""
    k = enc.width
    if len(bits) != k:
        raise WidthMismatch(f"{enc} expects {k} bits, got {len(bits)}")
    w = _word(bits)
    if enc.kind in ("bin", "bit"):
        return w
    if enc.kind == "tc":
        return w - (1 << k) if bits[0] else w
    if enc.kind == "gray":
        return gray_decode(w)
    if enc.kind == "unary":
        n = sum(map(bool, bits))
        if w != (1 << n) - 1:
            raise InvalidPattern(f"unary code must be 0...01...1, got {''.join('01'[bool(b)] for b in bits)}")
        return n
    return tuple(1 if b else -1 for b in bits)


def encode(enc: Encoding, v) -> tuple[bool, ...]:
    """Inverse of :func:`decode` on the encoding's range."""
    k = enc.width
    if enc.kind == "pm1":
        if len(v) != k or any(x not in (-1, 1) for x in v):
            raise ValueError(f"{v!r} is not a +-1 vector of length {k}")
        return tuple(x == 1 for x in v)
    lo, hi = {
        "bin": (0, (1 << k) - 1),
        "bit": (0, 1),
        "gray": (0, (1 << k) - 1),
        "tc": (-(1 << (k - 1)), (1 << (k - 1)) - 1),
        "unary": (0, k),
    }[enc.kind]
    if not lo <= v <= hi:
        raise ValueError(f"{v} outside the range [{lo}, {hi}] of {enc}")
    if enc.kind == "tc":
        return _bits(v & ((1 << k) - 1), k)
    if enc.kind == "gray":
        return _bits(gray_encode(v), k)
    if enc.kind == "unary":
        return _bits((1 << v) - 1, k)
    return _bits(v, k)


def decode_matrix(enc: Encoding, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised decode of the rows of a 0/1 matrix of shape (N, width).

    Returns ``(values, valid)`` with ``values`` of shape (N, dim); rows that
    are not codewords (only possible for ``unary``) have ``valid`` False.
    """
    bits = np.asarray(bits, dtype=np.int64)
    n, k = bits.shape
    if k != enc.width:
        raise WidthMismatch(f"{enc} expects {enc.width} bits, got {k}")
    valid = np.ones(n, dtype=bool)
    weights = np.int64(1) << np.arange(k - 1, -1, -1, dtype=np.int64)
    if enc.kind == "pm1":
        return 2 * bits - 1, valid
    if enc.kind == "gray":
        bits = np.bitwise_xor.accumulate(bits, axis=1)
    word = bits @ weights
    if enc.kind == "tc":
        word = word - (bits[:, 0] << k)
    elif enc.kind == "unary":
        ones = bits.sum(axis=1)
        valid = word == (np.int64(1) << ones) - 1
        word = ones
    return word[:, None], valid


NORMS = ("L1", "Linf", "Hamming")


@dataclass(frozen=True)
class InducedMetric:
    """Distance ``scale * || decode(a) - decode(b) ||`` over sliced bit vectors.

    Each component pairs the positions it reads (most significant first)
    with an encoding.  ``Hamming`` ignores the encodings and counts
    differing bits.
    """

    components: tuple[tuple[tuple[int, ...], Encoding], ...]
    norm: str = "L1"
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        comps = tuple((tuple(pos), enc) for pos, enc in self.components)
        object.__setattr__(self, "components", comps)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if self.norm not in NORMS:
            raise ValueError(f"unknown norm {self.norm!r}")
        if self.scale <= 0:
            raise ValueError("metric scale must be positive")
        used = [p for pos, _ in comps for p in pos]
        if sorted(used) != list(range(len(used))):
            raise ValueError("component slices must partition positions 0..width-1")
        for pos, enc in comps:
            if len(pos) != enc.width:
                raise ValueError(f"slice {pos} does not match width of {enc}")

    @classmethod
    def concat(cls, encodings: Sequence[Encoding], norm: str = "L1", scale=1) -> "InducedMetric":
        comps, start = [], 0
        for enc in encodings:
            comps.append((tuple(range(start, start + enc.width)), enc))
            start += enc.width
        return cls(tuple(comps), norm, Fraction(scale))

    @property
    def width(self) -> int:
        return sum(enc.width for _, enc in self.components)

    def scaled(self, factor) -> "InducedMetric":
        return InducedMetric(self.components, self.norm, self.scale * Fraction(factor))

    def reversed(self) -> "InducedMetric":
        """Same metric reading the bit vector back to front."""
        w = self.width
        comps = tuple((tuple(w - 1 - p for p in pos), enc) for pos, enc in self.components)
        return InducedMetric(comps, self.norm, self.scale)

    def decode(self, bits: Sequence[bool]) -> tuple:
        """Flattened numeric vector of all components."""
        if len(bits) != self.width:
            raise WidthMismatch(f"metric over {self.width} bits applied to {len(bits)}")
        out = []
        for pos, enc in self.components:
            v = decode(enc, [bits[p] for p in pos])
            out.extend(v if isinstance(v, tuple) else (v,))
        return tuple(out)

    def decode_matrix(self, bits: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        bits = np.asarray(bits, dtype=np.int64)
        if bits.shape[1] != self.width:
            raise WidthMismatch(f"metric over {self.width} bits applied to {bits.shape[1]}")
        if self.norm == "Hamming":
            return bits, np.ones(len(bits), dtype=bool)
        cols, valid = [], np.ones(len(bits), dtype=bool)
        for pos, enc in self.components:
            vals, ok = decode_matrix(enc, bits[:, list(pos)])
            cols.append(vals)
            valid &= ok
        return np.concatenate(cols, axis=1), valid

    def raw_distance(self, u: Sequence, v: Sequence) -> int:
        """Unscaled norm of the difference of two decoded vectors."""
        diffs = [abs(a - b) for a, b in zip(u, v)]
        if self.norm == "Linf":
            return max(diffs, default=0)
        if self.norm == "Hamming":
            return sum(1 for d in diffs if d)
        return sum(diffs)

    def __str__(self):
        body = " | ".join(str(enc) for _, enc in self.components)
        scale = "" if self.scale == 1 else f"*{self.scale}"
        return f"{self.norm}{scale}: {body}"


def metric(m: InducedMetric, a: Sequence[bool], b: Sequence[bool]) -> Fraction:
    if len(a) != m.width or len(b) != m.width:
        raise WidthMismatch(f"metric over {m.width} bits applied to {len(a)} and {len(b)}")
    if m.norm == "Hamming":
        return m.scale * sum(1 for x, y in zip(a, b) if bool(x) != bool(y))
    return m.scale * m.raw_distance(m.decode(a), m.decode(b))


_TOKEN = re.compile(r"^(bin|tc|gray|unary|pm1)\[(\d+)\]$|^bit$")


def parse_metric(text: str) -> InducedMetric:
    """Parse the mini-format ``"L1: bin[3] | bin[3] | bit"``.

    The norm may carry a rational scale, ``"L1*1/2: bin[3]"``; components are
    consecutive slices of the bit vector, each read most significant first.
    ``"Hamming[6]"`` is shorthand for a Hamming metric over six bits.
    """
    text = text.strip()
    m = re.fullmatch(r"Hamming\[(\d+)\]", text)
    if m:
        return InducedMetric.concat([BIT] * int(m.group(1)), "Hamming")
    if ":" not in text:
        raise ValueError(f"metric {text!r}: expected '<norm>: <enc> | <enc> ...'")
    head, body = text.split(":", 1)
    norm, _, scale = head.strip().partition("*")
    encs = []
    for tok in body.split("|"):
        tok = tok.strip()
        mt = _TOKEN.match(tok)
        if not mt:
            raise ValueError(f"metric {text!r}: bad component {tok!r}")
        encs.append(BIT if tok == "bit" else Encoding(mt.group(1), int(mt.group(2))))
    return InducedMetric.concat(encs, norm.strip(), Fraction(scale) if scale else 1)
