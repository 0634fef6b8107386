"""Named q-expansions: products, eta quotients, thetas, Eisenstein series, partitions."""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence, Tuple

from .series import (InvalidInput, PuiseuxSeries, _ceil, _frac, _lcm, series_invert,
                     series_pow, substitute_power)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# partitions

_P = [1]
_P_LOCK = threading.Lock()


def _extend_partitions(n: int) -> None:
    with _P_LOCK:
        p = _P
        for m in range(len(p), n + 1):
            total = 0
            k = 1
            while True:
                g1 = k * (3 * k - 1) // 2
                if g1 > m:
                    break
                sgn = 1 if k % 2 else -1
                total += sgn * p[m - g1]
                g2 = g1 + k
                if g2 <= m:
                    total += sgn * p[m - g2]
                k += 1
            p.append(total)


def partition(n) -> int:
    """p(n) by the pentagonal recurrence; 0 for negative or non-integral n."""
    if isinstance(n, Fraction):
        if n.denominator != 1:
            return 0
        n = n.numerator
    if n < 0:
        return 0
    if n >= len(_P):
        _extend_partitions(n)
    return _P[n]


def partitions_upto(n: int) -> list:
    if n >= len(_P):
        _extend_partitions(n)
    return _P[:n + 1]


def partition_progression(ell: int, c: int, prec) -> PuiseuxSeries:
    """sum_{j>=1} p(ell*j - c) q^j."""
    N = _ceil(_frac(prec))
    vals = partitions_upto(max(ell * N - c, 0))
    num = [0] + [vals[ell * j - c] if ell * j - c >= 0 else 0 for j in range(1, N)]
    return PuiseuxSeries(0, 1, num, 1, prec)


# ---------------------------------------------------------------------------
# products


def _euler(N: int) -> list:
    """Coefficients of (q;q)_inf below q^N (pentagonal theorem)."""
    out = [0] * N
    k = 0
    while True:
        g = k * (3 * k - 1) // 2
        if g >= N:
            break
        s = -1 if k % 2 else 1
        out[g] += s
        g2 = k * (3 * k + 1) // 2
        if k and g2 < N:
            out[g2] += s
        k += 1
    return out


@lru_cache(maxsize=256)
def _poch_cached(a: Fraction, b: Fraction, negate: bool, prec: Fraction) -> PuiseuxSeries:
    s = _lcm(a.denominator, b.denominator)
    A, B = int(a * s), int(b * s)
    N = _ceil(prec * s)
    if not negate and A == B:
        c = _euler(_ceil(Fraction(N, A)))
        return substitute_power(PuiseuxSeries(0, 1, c, 1, Fraction(len(c))), Fraction(A, s))
    c = [0] * N
    c[0] = 1
    sign = 1 if negate else -1
    e = A
    while e < N:
        for i in range(N - 1, e - 1, -1):
            if c[i - e]:
                c[i] += sign * c[i - e]
        e += B
    return PuiseuxSeries(0, s, c, 1, prec)


def pochhammer(a, b, prec, negate: bool = False) -> PuiseuxSeries:
    """(q^a; q^b)_inf, or (-q^a; q^b)_inf when ``negate``."""
    a, b = _frac(a), _frac(b)
    if a <= 0 or b <= 0:
        raise InvalidInput("pochhammer needs a > 0 and b > 0")
    prec = _frac(prec)
    return _poch_cached(a, b, bool(negate), prec).truncate(prec)


@dataclass(frozen=True)
class EtaQuotientSpec:
    factors: Tuple[Tuple[int, int], ...]
    prec: Fraction

    def __post_init__(self):
        rs = [r for r, _ in self.factors]
        if len(set(rs)) != len(rs):
            raise InvalidInput("eta quotient multipliers must be distinct")
        if any(r <= 0 for r in rs):
            raise InvalidInput("eta multipliers must be positive")


def eta_quotient(spec: EtaQuotientSpec) -> PuiseuxSeries:
    """prod eta(r tau)^e as one series (leading power sum r e / 24)."""
    lead = sum(Fraction(r * e, 24) for r, e in spec.factors)
    body_prec = _frac(spec.prec) - lead
    out = PuiseuxSeries.const(1)
    for r, e in spec.factors:
        if e == 0:
            continue
        base = pochhammer(r, r, max(body_prec, Fraction(1)))
        out = out * series_pow(base, e)
    return out.truncate(max(body_prec, Fraction(0))).shift(lead)


def eta(r, prec) -> PuiseuxSeries:
    """eta(r tau) = q^{r/24} (q^r;q^r)_inf."""
    r = _frac(r)
    lead = r / 24
    return pochhammer(r, r, max(_frac(prec) - lead, Fraction(1))).shift(lead).truncate(prec)


# ---------------------------------------------------------------------------
# theta functions


@lru_cache(maxsize=256)
def _theta_cached(kind: int, r: Fraction, prec: Fraction) -> PuiseuxSeries:
    terms = {}
    if kind == 3:
        terms[Fraction(0)] = 1
        j = 1
        while r * j * j < prec:
            terms[r * j * j] = 2
            j += 1
    elif kind == 2:
        j = 0
        while r * (j + Fraction(1, 2)) ** 2 < prec:
            terms[r * (j + Fraction(1, 2)) ** 2] = 2
            j += 1
    else:
        raise InvalidInput("theta kind must be 2 or 3")
    return PuiseuxSeries.from_terms(terms, prec)


def theta(kind: int, r, prec) -> PuiseuxSeries:
    """Theta3(q^r) = sum q^{r j^2}, Theta2(q^r) = sum q^{r (j+1/2)^2}."""
    r = _frac(r)
    if r <= 0:
        raise InvalidInput("theta argument power must be positive")
    return _theta_cached(int(kind), r, _frac(prec))


def jacobi_f(x, y, prec) -> PuiseuxSeries:
    """Ramanujan's f(q^x, q^y) = (-q^x;q^{x+y})(-q^y;q^{x+y})(q^{x+y};q^{x+y})."""
    x, y = _frac(x), _frac(y)
    if x <= 0 or y <= 0:
        raise InvalidInput("jacobi_f needs positive exponents")
    s = x + y
    return (pochhammer(x, s, prec, negate=True) * pochhammer(y, s, prec, negate=True)
            * pochhammer(s, s, prec)).truncate(prec)


def bernoulli2(x: Fraction) -> Fraction:
    return x * x - x + Fraction(1, 6)


def gen_eta(L: int, a: int, prec) -> PuiseuxSeries:
    """Generalized eta q^{L B2(a/L)/2} prod (1 - q^{L(m-1)+a})(1 - q^{Lm-a}).

    Any integer index not divisible by L is accepted.  Expanding the product
    literally gives E_{a+L} = -E_a, so E_a = (-1)^{floor(a/L)} E_{a mod L}.
    """
    if a % L == 0:
        raise InvalidInput("gen_eta index must not be divisible by the level")
    sign = -1 if (a // L) % 2 else 1
    a = a % L
    lead = L * bernoulli2(Fraction(a, L)) / 2
    body = max(_frac(prec) - lead, Fraction(1))
    prod = pochhammer(a, L, body) * pochhammer(L - a, L, body)
    out = prod.shift(lead).truncate(prec)
    return out if sign == 1 else -out


# ---------------------------------------------------------------------------
# characters and Eisenstein series


@dataclass(frozen=True)
class CharacterSpec:
    d: int

    def __call__(self, n: int) -> int:
        return kronecker(self.d, n)


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    t = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def kronecker(d, n: int) -> int:
    """Kronecker symbol (d/n) for all integers d, n."""
    if isinstance(d, CharacterSpec):
        d = d.d
    if n == 0:
        return 1 if d in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if d < 0:
            t = -t
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if d % 2 == 0:
            return 0
        if v % 2 and d % 8 in (3, 5):
            t = -t
    return t * _jacobi(d, n)


def _divisor_sums(N: int, fn) -> list:
    out = [0] * N
    for d in range(1, N):
        for m in range(1, (N - 1) // d + 1):
            out[d * m] += fn(d, m)
    return out


@lru_cache(maxsize=128)
def _sigma_series(w: int, N: int) -> list:
    return _divisor_sums(N, lambda d, m: d ** w)


def eisenstein(kind: str, r: int, prec) -> PuiseuxSeries:
    """E2(q^r) = 1 - 24 sum sigma1(n) q^{rn}; E4(q^r) = 1 + 240 sum sigma3(n) q^{rn}."""
    prec = _frac(prec)
    N = _ceil(prec / r)
    if kind == "E2":
        num = [-24 * x for x in _sigma_series(1, N)]
    elif kind == "E4":
        num = [240 * x for x in _sigma_series(3, N)]
    else:
        raise InvalidInput(f"unknown Eisenstein kind {kind!r}")
    num[0] = 1
    return substitute_power(PuiseuxSeries(0, 1, num, 1, N), r).truncate(prec)


def twisted_eisenstein(w: int, chi: CharacterSpec, side: str, prec) -> PuiseuxSeries:
    """Divisor sums twisted by chi, no constant term.

    side='divisor':   coefficient of q^n is sum_{d|n} chi(d) (n/d)^w
    side='codivisor': coefficient of q^n is sum_{d|n} chi(d) d^w
    """
    if w < 0:
        raise InvalidInput("weight power must be nonnegative")
    N = _ceil(_frac(prec))
    vals = [chi(d) for d in range(N)]
    if side == "divisor":
        num = _divisor_sums(N, lambda d, m: vals[d] * m ** w)
    elif side == "codivisor":
        num = _divisor_sums(N, lambda d, m: vals[d] * d ** w)
    else:
        raise InvalidInput("side must be 'divisor' or 'codivisor'")
    return PuiseuxSeries(0, 1, num, 1, prec)


def twist(a: PuiseuxSeries, d: int) -> PuiseuxSeries:
    """Multiply the coefficient of q^n by (d/n); integer exponents only."""
    if a.num and (a.step != 1 or a.offset.denominator != 1):
        raise InvalidInput("twist needs integer exponents")
    lo = int(a.offset)
    num = [x * kronecker(d, lo + j) if x else 0 for j, x in enumerate(a.num)]
    return PuiseuxSeries(a.offset, 1, num, a.den, a.prec)


# ---------------------------------------------------------------------------
# f_ell, g_ell, h_ell


def delta(ell: int) -> int:
    return (ell * ell - 1) // 24


def nu(ell: int) -> int:
    """ell^2 - ell p(ell - delta_ell)."""
    return ell * ell - ell * partition(ell - delta(ell))


def fgh_ell(which: str, ell: int, prec) -> PuiseuxSeries:
    if not _is_prime(ell) or ell < 5:
        raise InvalidInput("ell must be a prime >= 5")
    prec = _frac(prec)
    if which == "f":
        from .engine import cphi_series
        return (pochhammer(ell, ell, prec) * cphi_series(ell, prec)).truncate(prec)
    if which == "g":
        tail = pochhammer(ell, ell, prec) * partition_progression(ell, delta(ell), prec)
        return (1 + ell * tail).truncate(prec)
    if which == "h":
        if ell < 17:
            raise InvalidInput("h_ell is defined for ell >= 17")
        e = ell - 11
        ratio = eta_quotient(EtaQuotientSpec(((ell, e), (1, -e)), prec))
        corr = 2 * ell ** ((ell - 11) // 2) * ratio
        return (fgh_ell("f", ell, prec) - fgh_ell("g", ell, prec) - corr).truncate(prec)
    raise InvalidInput(f"unknown function {which!r}; expected f, g or h")


def theta_product(parts: Sequence[Tuple[int, object, int]], prec) -> PuiseuxSeries:
    """prod Theta_kind(q^r)^e for (kind, r, e) triples."""
    out = PuiseuxSeries.const(1)
    for kind, r, e in parts:
        out = out * series_pow(theta(kind, r, prec), e)
    return out.truncate(prec)


__all__ = [
    "CharacterSpec", "EtaQuotientSpec", "bernoulli2", "delta", "eisenstein", "eta",
    "eta_quotient", "fgh_ell", "gen_eta", "jacobi_f", "kronecker", "nu", "partition",
    "partition_progression", "partitions_upto", "pochhammer", "series_invert", "theta",
    "theta_product", "twist", "twisted_eisenstein",
]
