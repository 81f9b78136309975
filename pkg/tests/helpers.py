"""Independent brute-force oracles shared by the test modules."""

import itertools
import math
from fractions import Fraction

from boolnet_forge.coding import metric


def bitvec(s: str) -> tuple[bool, ...]:
    return tuple(ch == "1" for ch in s)


def assignments(n: int):
    """All input vectors in assignment-index order (input j is bit j)."""
    for idx in range(1 << n):
        yield tuple(bool((idx >> j) & 1) for j in range(n))


def naive_min_lipschitz(fn, n: int, d, e):
    """max e/d over unordered pairs, straight from the metric definitions."""
    best = Fraction(0)
    xs = list(assignments(n))
    for a, b in itertools.combinations(xs, 2):
        dd = metric(d, a, b)
        ee = metric(e, fn(a), fn(b))
        if dd == 0:
            if ee > 0:
                return math.inf
            continue
        best = max(best, ee / dd)
    return best
