"""Exact power-sum ranges for monic integer polynomials with a Perron root below r."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction


def parse_bound(text: str | Fraction | int) -> Fraction:
    """Decimal string -> exact rational ("1.1743" -> 11743/10000).

    Binary floats are refused on purpose: pruning must not depend on float
    rounding.
    """
    if isinstance(text, float):
        raise TypeError("bounds must be given as decimal strings or Fractions, not floats")
    if isinstance(text, (Fraction, int)):
        return Fraction(text)
    if "/" in text:
        return Fraction(text)
    return Fraction(Decimal(text.strip()))


@dataclass(frozen=True)
class PowerSumRange:
    k: int
    lower: Fraction
    lower_strict: bool
    upper: Fraction
    lo: int
    hi: int

    @property
    def admissible(self) -> range:
        return range(self.lo, self.hi + 1)

    def __len__(self) -> int:
        return max(0, self.hi - self.lo + 1)

    def __contains__(self, p: int) -> bool:
        return self.lo <= p <= self.hi


def power_sum_range(d: int, k: int, r: Fraction, strict_lower: bool) -> PowerSumRange:
    r = Fraction(r)
    if r <= 1:
        raise ValueError(f"bound r must exceed 1, got {r}")
    if d < 2 or k < 1:
        raise ValueError("need d >= 2 and k >= 1")
    n, odd = divmod(d, 2)
    rk = r**k
    rinv = 1 / rk
    if odd:
        lower = min(Fraction(1 - 2 * n), -(n - 2) * rk - 1 - n * rinv)
        upper = n * (rk + rinv) + 1
    else:
        lower = min(Fraction(2 - 2 * n), -(n - 2) * rk - n * rinv)
        upper = n * (rk + rinv)
    lo = math.floor(lower) + 1 if strict_lower else math.ceil(lower)
    hi = math.floor(upper)
    return PowerSumRange(k, lower, strict_lower, upper, lo, hi)


def power_sum_table(d: int, r: Fraction, strict_lower: bool, kmax: int | None = None) -> list[PowerSumRange]:
    kmax = d - 1 if kmax is None else kmax
    return [power_sum_range(d, k, r, strict_lower) for k in range(1, kmax + 1)]
