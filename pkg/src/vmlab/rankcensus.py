"""How many labeled graphs on ``s`` vertices have adjacency rank ``a`` over GF(2)."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .f2core import rank as f2rank, F2Matrix
from .graph import edge_pairs

__all__ = ["RankCensus", "census_exhaustive", "census_formula", "census_bound", "EXHAUSTIVE_MAX_S"]

EXHAUSTIVE_MAX_S = 6


@dataclass(frozen=True)
class RankCensus:
    s: int
    counts: dict[int, int] = field(default_factory=dict)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def __getitem__(self, a: int) -> int:
        return self.counts.get(a, 0)


def census_exhaustive(s: int) -> RankCensus:
    """Enumerate all ``2^C(s,2)`` graphs on ``[s]`` and bucket them by rank."""
    if s < 0:
        raise ValueError("s must be nonnegative")
    if s > EXHAUSTIVE_MAX_S:
        raise ValueError(f"s={s} too large for enumeration (max {EXHAUSTIVE_MAX_S})")
    pairs = edge_pairs(s)
    counts: dict[int, int] = {}
    for mask in range(1 << len(pairs)):
        rows = [0] * s
        for k, (i, j) in enumerate(pairs):
            if (mask >> k) & 1:
                rows[i] |= 1 << j
                rows[j] |= 1 << i
        a = f2rank(F2Matrix(s, s, rows))
        counts[a] = counts.get(a, 0) + 1
    return RankCensus(s, dict(sorted(counts.items())))


def census_formula(s: int, a: int) -> int:
    """Closed-form count of graphs on ``[s]`` with rank ``a`` (zero for odd ``a``).

    For ``a = 2b``::

        prod_{i=1..b} 2^(2i-2) / (2^(2i) - 1)  *  prod_{i=0..2b-1} (2^(s-i) - 1)
    """
    if not 0 <= a <= s:
        raise ValueError(f"need 0 <= a <= s, got a={a}, s={s}")
    if a % 2:
        return 0
    b = a // 2
    value = Fraction(1)
    for i in range(1, b + 1):
        value *= Fraction(2 ** (2 * i - 2), 2 ** (2 * i) - 1)
    for i in range(2 * b):
        value *= 2 ** (s - i) - 1
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral census value for s={s}, a={a}")
    return value.numerator


def census_bound(s: int, a: int) -> Fraction:
    """``2^(s*a - 2)`` as an exact rational (it is 1/4 at ``a = 0``)."""
    if s < 1 or a < 0:
        raise ValueError("need s >= 1 and a >= 0")
    return Fraction(2) ** (s * a - 2)
