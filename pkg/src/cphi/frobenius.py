"""Brute-force enumeration of k-colored generalized Frobenius symbols.

Ground truth for the engine: every count here comes from listing symbols.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, List, Optional, Tuple

ColoredPart = Tuple[int, int]  # (value, color); tuple order is the total order on parts


@dataclass(frozen=True)
class FrobeniusSymbol:
    k: int
    top: Tuple[ColoredPart, ...]
    bottom: Tuple[ColoredPart, ...]

    def __post_init__(self):
        assert len(self.top) == len(self.bottom)
        for row in (self.top, self.bottom):
            assert all(row[i] > row[i + 1] for i in range(len(row) - 1)), "row not strictly decreasing"
            assert all(0 <= v and 1 <= c <= self.k for v, c in row)

    @property
    def d(self) -> int:
        return len(self.top)

    @property
    def weight(self) -> int:
        return self.d + sum(v for v, _ in self.top) + sum(v for v, _ in self.bottom)

    def swapped(self) -> "FrobeniusSymbol":
        return FrobeniusSymbol(self.k, self.bottom, self.top)

    def render(self) -> str:
        if not self.d:
            return "( | )"
        top = " ".join(f"{v}_{c}" for v, c in self.top)
        bot = " ".join(f"{v}_{c}" for v, c in self.bottom)
        return f"({top} | {bot})"

    __str__ = render


@lru_cache(maxsize=None)
def _rows(k: int, d: int, total: int, below: Optional[ColoredPart] = None) -> Tuple[Tuple[ColoredPart, ...], ...]:
    """Strictly decreasing rows of d colored parts, all < ``below``, with value sum ``total``."""
    if d == 0:
        return ((),) if total == 0 else ()
    out = []
    # the remaining d-1 parts need at least d-1 distinct slots below the first one
    for v in range(total, -1, -1):
        for c in range(k, 0, -1):
            part = (v, c)
            if below is not None and part >= below:
                continue
            for rest in _rows(k, d - 1, total - v, part):
                out.append((part,) + rest)
    return tuple(out)


def enumerate_symbols(k: int, n: int) -> List[FrobeniusSymbol]:
    """All k-colored symbols of weight n, in a fixed lexicographic order."""
    if n == 0:
        return [FrobeniusSymbol(k, (), ())]
    out = []
    for d in range(1, n + 1):
        rest = n - d
        for s in range(rest + 1):
            tops = _rows(k, d, s)
            if not tops:
                continue
            bots = _rows(k, d, rest - s)
            for t in tops:
                for b in bots:
                    out.append(FrobeniusSymbol(k, t, b))
    out.sort(key=lambda x: (x.d, x.top, x.bottom))
    return out


def enumerate_phi(k: int, n: int) -> int:
    """Generalized Frobenius symbols of weight n, each value at most k times per row."""

    @lru_cache(maxsize=None)
    def rows(d: int, total: int, vmax: int) -> int:
        # non-increasing rows of length d, values <= vmax, multiplicity <= k, sum = total
        if d == 0:
            return 1 if total == 0 else 0
        if vmax < 0:
            return 0
        count = 0
        for mult in range(0, min(k, d) + 1):
            if mult * vmax > total:
                break
            count += rows(d - mult, total - mult * vmax, vmax - 1)
        return count

    if n == 0:
        return 1
    total = 0
    for d in range(1, n + 1):
        rest = n - d
        for s in range(rest + 1):
            total += rows(d, s, s) * rows(d, rest - s, rest - s)
    return total


def _shift(sym: FrobeniusSymbol, ell: int) -> FrobeniusSymbol:
    k = sym.k

    def move(row):
        return tuple(sorted(((v, (c - 1 + ell) % k + 1) for v, c in row), reverse=True))

    return FrobeniusSymbol(k, move(sym.top), move(sym.bottom))


def _divisors(n: int) -> List[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def symbol_order(sym: FrobeniusSymbol) -> int:
    """Least ell with sigma^ell(sym) == sym, sigma the color cycle 1 -> 2 -> ... -> k -> 1."""
    for ell in _divisors(sym.k):
        if _shift(sym, ell) == sym:
            return ell
    raise AssertionError("order must divide k")


def color_difference(sym: FrobeniusSymbol) -> int:
    return sum(c for _, c in sym.top) - sum(c for _, c in sym.bottom)


def mobius(n: int) -> int:
    if n < 1:
        raise ValueError("mobius needs n >= 1")
    out = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            out = -out
        p += 1
    if n > 1:
        out = -out
    return out


@dataclass
class RefinedCounts:
    k: int
    n: int
    cphi: int
    by_difference: Dict[int, int]
    psi: Dict[int, int]
    overline: int
    residue_classes: Dict[int, int]


def refined_counts(k: int, n: int) -> RefinedCounts:
    """One enumeration pass: totals, color-difference histogram, counts by order,
    order-k count, and order-k counts split by color difference mod k."""
    syms = enumerate_symbols(k, n)
    by_diff: Dict[int, int] = defaultdict(int)
    psi = {ell: 0 for ell in _divisors(k)}
    classes = {j: 0 for j in range(k)}
    for s in syms:
        m = color_difference(s)
        by_diff[m] += 1
        o = symbol_order(s)
        psi[o] += 1
        if o == k:
            classes[m % k] += 1
    return RefinedCounts(k, n, len(syms), dict(sorted(by_diff.items())), psi, psi[k], classes)


def overline_via_mobius(k: int, n: int, cphi_provider: Callable[[int, int], int]) -> int:
    """sum_{d | k} mu(d) cphi_{k/d}(n/d), with cphi(x) = 0 off the integers."""
    total = 0
    for d in _divisors(k):
        if n % d:
            continue
        mu = mobius(d)
        if mu:
            total += mu * cphi_provider(k // d, n // d)
    return total


def cphi_from_overline(k: int, n: int, overline_provider: Callable[[int, int], int]) -> int:
    """Inverse relation: cphi_k(n) = sum_{l | k} overline_l(n / (k/l))."""
    total = 0
    for ell in _divisors(k):
        step = k // ell
        if n % step == 0:
            total += overline_provider(ell, n // step)
    return total
