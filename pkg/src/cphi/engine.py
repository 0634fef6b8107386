"""Theta series of the colored Frobenius lattice and the generating functions CPhi_k.

Two independent routes compute A_k(q) = sum_{m in Z^{k-1}} q^{Q(m)} with
Q(m) = 1/2 sum m_i^2 + 1/2 (sum m_i)^2:

* ``ct``: constant term in z of (sum_n z^n q^{n^2/2})^k.  Each z-slice is a
  packed big integer whose base-2^bits digits are the coefficients of
  q^{i/2}; shifting by bits*n^2 multiplies by q^{n^2/2}.  The two halves of
  the k-fold product meet in the middle via big-integer multiplication.
* ``lattice``: depth-first enumeration with exact quadratic pruning.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Tuple

from .builders import _is_prime, pochhammer
from .series import (InvalidInput, OutOfPrecision, PuiseuxSeries, _ceil, _frac, bigmul,
                     series_invert, series_pow)


@dataclass(frozen=True)
class LatticeForm:
    """Q(m) = 1/2(|m|^2 + (sum m)^2) in 'primal' mode; Q'(m) = 1/2(l|m|^2 - (sum m)^2) in 'dual'."""

    k: int
    mode: str = "primal"

    def value(self, m) -> int:
        sq = sum(x * x for x in m)
        s = sum(m)
        if self.mode == "primal":
            return (sq + s * s) // 2
        return (self.k * sq - s * s) // 2


# ---------------------------------------------------------------------------
# constant-term route


def _ct_theta(k: int, N: int) -> list:
    H = 2 * N  # exponents in half-q units
    R = math.isqrt(H - 1) if H > 1 else 0
    bits = ((2 * R + 1) ** k).bit_length() + 1
    bits = (bits + 7) // 8 * 8
    mask = (1 << (bits * H)) - 1
    sq = [(n, bits * n * n) for n in range(-R, R + 1)]

    def grow(P: Dict[int, int], j: int) -> Dict[int, int]:
        # P holds j factors; return j+1 factors, pruned for a k-fold constant term
        out: Dict[int, int] = {}
        for m, v in P.items():
            for n, sh in sq:
                t = m + n
                if t * t * k >= H * (j + 1) * (k - j - 1) and j + 1 < k:
                    continue
                w = v << sh
                if t in out:
                    out[t] += w
                else:
                    out[t] = w
        return {t: v & mask for t, v in out.items() if v & mask}

    P = {0: 1}
    half = k // 2
    left = P
    for j in range(half):
        left = grow(left, j)
    right = left
    if k - half != half:
        right = grow(left, half)
    total = 0
    for m, v in left.items():
        w = right.get(-m)
        if w:
            total += bigmul(v, w) & mask
    total &= mask
    nbytes = bits // 8
    raw = total.to_bytes(H * nbytes, "little")
    out = []
    for i in range(H):
        c = int.from_bytes(raw[i * nbytes:(i + 1) * nbytes], "little")
        if i % 2:
            assert c == 0, "odd half-exponent in constant term"
        else:
            out.append(c)
    return out


# ---------------------------------------------------------------------------
# enumeration route


def _lattice_theta(k: int, N: int) -> list:
    out = [0] * N
    dim = k - 1
    if dim == 0:
        out[0] = 1
        return out
    lim2 = 2 * N  # compare 2Q against 2N

    def dfs(depth: int, sq: int, s: int) -> None:
        free = dim - depth
        if free == 1:
            # 2Q = sq + m^2 + (s + m)^2 < 2N
            r = math.isqrt(max(lim2, 0)) + 1
            for m in range(-r - abs(s), r + abs(s) + 1):
                v = sq + m * m + (s + m) * (s + m)
                if v < lim2:
                    out[v // 2] += 1
            return
        # after fixing m, `free - 1` coordinates remain
        f = free - 1
        r = math.isqrt(lim2) + 1
        for m in range(-r, r + 1):
            nsq = sq + m * m
            ns = s + m
            if nsq * (1 + f) + ns * ns < lim2 * (1 + f):
                dfs(depth + 1, nsq, ns)

    dfs(0, 0, 0)
    return out


@lru_cache(maxsize=64)
def _theta_cached(k: int, N: int, method: str) -> Tuple[int, ...]:
    if method == "ct":
        return tuple(_ct_theta(k, N))
    if method == "lattice":
        return tuple(_lattice_theta(k, N))
    raise InvalidInput(f"unknown method {method!r}")


def frobenius_theta(k: int, prec, method: str = "ct") -> PuiseuxSeries:
    """A_k(q) to the given precision."""
    if k < 2:
        raise InvalidInput("need k >= 2")
    prec = _frac(prec)
    N = _ceil(prec)
    return PuiseuxSeries(0, 1, list(_theta_cached(k, N, method)), 1, prec)


def dual_theta(ell: int, prec) -> PuiseuxSeries:
    """Theta series of Q'(m) = 1/2(ell |m|^2 - (sum m)^2) on Z^{ell-1}."""
    if not _is_prime(ell) or ell < 5:
        raise InvalidInput("ell must be a prime >= 5")
    prec = _frac(prec)
    N = _ceil(prec)
    out = [0] * N
    dim = ell - 1
    lim2 = 2 * N

    def dfs(depth: int, sq: int, s: int) -> None:
        # t free coordinates left after this one
        t = dim - depth - 1
        r = math.isqrt(lim2) + 1
        for m in range(-r, r + 1):
            nsq = sq + m * m
            ns = s + m
            if t == 0:
                v = ell * nsq - ns * ns
                if v < lim2:
                    out[v // 2] += 1
            elif ell * nsq * (ell - t) - ell * ns * ns < lim2 * (ell - t):
                dfs(depth + 1, nsq, ns)

    dfs(0, 0, 0)
    return PuiseuxSeries(0, 1, out, 1, prec)


def binary_qf_theta(a: int, b: int, c: int, prec) -> PuiseuxSeries:
    """sum over (m, n) in Z^2 of q^{a m^2 + b m n + c n^2}."""
    disc = 4 * a * c - b * b
    if a <= 0 or disc <= 0:
        raise InvalidInput("form must be positive definite")
    prec = _frac(prec)
    N = _ceil(prec)
    out = [0] * N
    # a m^2 + b m n + c n^2 >= disc n^2 / (4a)
    nmax = math.isqrt(4 * a * N // disc + 1) + 1
    for n in range(-nmax, nmax + 1):
        if disc * n * n >= 4 * a * N:
            continue
        # roots of a m^2 + b n m + (c n^2 - N) = 0
        center = -b * n / (2 * a)
        span = math.sqrt(max(b * b * n * n - 4 * a * (c * n * n - N), 0)) / (2 * a)
        for m in range(math.floor(center - span) - 1, math.ceil(center + span) + 2):
            v = a * m * m + b * m * n + c * n * n
            if v < N:
                out[v] += 1
    return PuiseuxSeries(0, 1, out, 1, prec)


# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def _cphi_cached(k: int, prec: Fraction, method: str) -> PuiseuxSeries:
    euler = pochhammer(1, 1, prec)
    if k == 1:
        return series_invert(euler)
    return frobenius_theta(k, prec, method) * series_pow(series_invert(euler), k)


def cphi_series(k: int, prec, method: str = "ct") -> PuiseuxSeries:
    """CPhi_k(q) = A_k(q) / (q;q)_inf^k."""
    if k < 1:
        raise InvalidInput("need k >= 1")
    return _cphi_cached(int(k), _frac(prec), method)


def cphi(k: int, n: int, prec=None, method: str = "ct") -> int:
    """Number of k-colored generalized Frobenius partitions of n."""
    if n < 0:
        return 0
    if prec is None:
        prec = n + 1
    if n >= _frac(prec):
        raise OutOfPrecision(f"cphi({k}, {n}) needs precision > {n}")
    c = cphi_series(k, prec, method).coefficient(n)
    assert c.denominator == 1
    return int(c)


def cphi_values(k: int, n_max: int, method: str = "ct") -> list:
    """[cphi_k(0), ..., cphi_k(n_max)]."""
    return cphi_series(k, n_max + 1, method).integer_coefficients(n_max + 1)


# ---------------------------------------------------------------------------
# refined counts


@dataclass
class BivariateTable:
    """Counts indexed by (color difference m, weight n); only m >= 0 is stored."""

    n_max: int
    data: Dict[Tuple[int, int], int] = field(default_factory=dict)

    def get(self, m: int, n: int) -> int:
        return self.data.get((abs(m), n), 0)

    def set(self, m: int, n: int, value: int) -> None:
        if m < 0:
            raise InvalidInput("store nonnegative color differences only")
        if value:
            self.data[(m, n)] = value
        else:
            self.data.pop((m, n), None)

    @property
    def m_max(self) -> int:
        return max((m for m, _ in self.data), default=0)

    def row(self, n: int) -> Dict[int, int]:
        """m -> count at weight n, both signs."""
        out = {}
        for (m, w), v in self.data.items():
            if w == n:
                out[m] = v
                if m:
                    out[-m] = v
        return dict(sorted(out.items()))

    def total(self, n: int) -> int:
        return sum(self.row(n).values())

    def __eq__(self, other):
        if not isinstance(other, BivariateTable):
            return NotImplemented
        n = min(self.n_max, other.n_max)
        a = {key: v for key, v in self.data.items() if key[1] <= n}
        b = {key: v for key, v in other.data.items() if key[1] <= n}
        return a == b


def refined_cphi_ct(k: int, n_max: int) -> BivariateTable:
    """Coefficients of t^m q^n in the z-constant term of
    prod_{j=1..k} prod_{v>=0} (1 + z t^j q^{v+1})(1 + z^{-1} t^{-j} q^v).
    """
    if k < 1:
        raise InvalidInput("need k >= 1")
    width = n_max + 1
    # state: (zdeg, tdeg) -> q-coefficient list
    state: Dict[Tuple[int, int], list] = {(0, 0): [1] + [0] * n_max}
    factors = []
    for v in range(n_max + 1):
        for j in range(1, k + 1):
            if v + 1 <= n_max:
                factors.append((1, j, v + 1))
            factors.append((-1, -j, v))
    # a z^r surplus needs r bottom parts of weight >= 0; z^{-r} needs r top parts of weight >= 1
    for dz, dt, dq in factors:
        new = {key: list(vals) for key, vals in state.items()}
        for (z, t), vals in state.items():
            nz = z + dz
            if nz < 0 and -nz > n_max:
                continue
            if nz > 0 and nz > n_max:
                continue
            key = (nz, t + dt)
            tgt = new.get(key)
            if tgt is None:
                tgt = [0] * width
                new[key] = tgt
            for i in range(width - dq):
                if vals[i]:
                    tgt[i + dq] += vals[i]
        state = new
    table = BivariateTable(n_max)
    for (z, t), vals in state.items():
        if z == 0 and t >= 0:
            for n, c in enumerate(vals):
                table.set(t, n, c)
    return table


def refined_from_engine(k: int, n_max: int) -> Dict[int, int]:
    """Sum over m of the refined table, i.e. cphi_k(n) for n <= n_max (t=1 collapse)."""
    tab = refined_cphi_ct(k, n_max)
    return {n: tab.total(n) for n in range(n_max + 1)}
