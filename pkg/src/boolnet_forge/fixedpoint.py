"""Fixed-point number formats and exact scalar arithmetic.

A value in format ``(T, F, signed)`` is an integer ``raw`` scaled by
``2**-F``; signed formats use two's complement over ``T`` bits.  All
conversions round to nearest with ties to even and saturate on overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real

MAX_BITS = 32


@dataclass(frozen=True)
class FixedPointFormat:
    total_bits: int
    frac_bits: int
    signed: bool = True

    def __post_init__(self):
        if not (0 <= self.frac_bits <= self.total_bits <= MAX_BITS):
            raise ValueError(
                f"invalid fixed-point format T={self.total_bits}, F={self.frac_bits}: "
                f"need 0 <= F <= T <= {MAX_BITS}"
            )
        if self.signed and self.total_bits < 1:
            raise ValueError("signed format needs at least one bit")

    @property
    def raw_min(self) -> int:
        return -(1 << (self.total_bits - 1)) if self.signed else 0

    @property
    def raw_max(self) -> int:
        if self.signed:
            return (1 << (self.total_bits - 1)) - 1
        return (1 << self.total_bits) - 1

    @property
    def resolution(self) -> Fraction:
        return Fraction(1, 1 << self.frac_bits)

    def saturate(self, raw: int) -> int:
        return min(max(raw, self.raw_min), self.raw_max)

    def contains(self, v) -> bool:
        """True when ``v`` lies inside the representable interval."""
        if isinstance(v, float) and not math.isfinite(v):
            return False
        v = Fraction(v)
        return self.raw_min * self.resolution <= v <= self.raw_max * self.resolution

    def to_json(self) -> dict:
        return {"total": self.total_bits, "frac": self.frac_bits, "signed": self.signed}

    @classmethod
    def from_json(cls, obj: dict) -> "FixedPointFormat":
        return cls(int(obj["total"]), int(obj["frac"]), bool(obj.get("signed", True)))

    def __str__(self):
        return f"{'s' if self.signed else 'u'}{self.total_bits}.{self.frac_bits}"


@dataclass(frozen=True)
class FixedValue:
    format: FixedPointFormat
    raw: int

    def __post_init__(self):
        if not (self.format.raw_min <= self.raw <= self.format.raw_max):
            raise ValueError(f"raw value {self.raw} outside format {self.format}")

    @property
    def value(self) -> Fraction:
        return self.raw * self.format.resolution

    def __float__(self):
        return float(self.value)

    def bits(self) -> tuple[bool, ...]:
        """Two's complement (or plain binary) bits, least significant first."""
        mask = (1 << self.format.total_bits) - 1
        word = self.raw & mask
        return tuple(bool((word >> i) & 1) for i in range(self.format.total_bits))

    @classmethod
    def from_bits(cls, fmt: FixedPointFormat, bits) -> "FixedValue":
        word = sum(1 << i for i, b in enumerate(bits) if b)
        if fmt.signed and fmt.total_bits and word >> (fmt.total_bits - 1):
            word -= 1 << fmt.total_bits
        return cls(fmt, word)


def round_shift(acc: int, shift: int) -> int:
    """Divide ``acc`` by ``2**shift`` rounding to nearest, ties to even.

    A negative ``shift`` multiplies.  This is the same rule the generated
    rounding cores implement with guard/sticky/lsb bits.
    """
    if shift <= 0:
        return acc << -shift
    q = acc >> shift
    rem = acc - (q << shift)
    half = 1 << (shift - 1)
    if rem > half or (rem == half and q & 1):
        q += 1
    return q


def requantize(acc: int, acc_frac: int, fmt: FixedPointFormat) -> FixedValue:
    """Round an exact integer at scale ``2**-acc_frac`` into ``fmt``."""
    return FixedValue(fmt, fmt.saturate(round_shift(acc, acc_frac - fmt.frac_bits)))


def quantize_value(fmt: FixedPointFormat, v: Real) -> FixedValue:
    """Nearest representable value (ties to even raw), saturating out of range."""
    if isinstance(v, float) and not math.isfinite(v):
        if math.isnan(v):
            raise ValueError("cannot quantise NaN")
        return FixedValue(fmt, fmt.raw_max if v > 0 else fmt.raw_min)
    scaled = Fraction(v) * (1 << fmt.frac_bits)
    return FixedValue(fmt, fmt.saturate(round(scaled)))
