"""Truncated Laurent-Puiseux series in q with exact rational coefficients.

A series is stored as a leading exponent ``offset``, a step ``1/step`` and a
dense list of integer numerators over one common denominator ``den``.  Thus
the j-th stored entry is the coefficient ``num[j]/den`` of
``q**(offset + j/step)``.  Coefficients at exponents ``>= prec`` are unknown;
``prec is None`` marks an exact (finite) series.

The public view follows the usual lattice convention: ``scale`` is the least
positive integer s such that every exponent is a multiple of 1/s, ``lo`` the
least supported index and ``coeffs`` the map index -> Fraction.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

Rational = Union[int, Fraction]


class InvalidInput(ValueError):
    pass


class OutOfPrecision(ArithmeticError):
    pass


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


def _lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // math.gcd(out, x)
    return out


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _min_prec(*ps):
    known = [p for p in ps if p is not None]
    return min(known) if known else None


# ---------------------------------------------------------------------------
# integer convolution

try:
    import gmpy2

    def bigmul(x: int, y: int) -> int:
        return int(gmpy2.mpz(x) * gmpy2.mpz(y))
except ImportError:  # pragma: no cover
    def bigmul(x: int, y: int) -> int:
        return x * y

_SPARSE_WORK = 40000


def _pack(xs: List[int], nbytes: int) -> int:
    half = 1 << (8 * nbytes - 1)
    raw = b"".join((x + half).to_bytes(nbytes, "little") for x in xs)
    packed = int.from_bytes(raw, "little")
    return packed - _bias(len(xs), nbytes)


def _bias(n: int, nbytes: int) -> int:
    # 0x80 in the top byte of every slot
    return int.from_bytes((b"\x00" * (nbytes - 1) + b"\x80") * n, "little")


def _unpack(value: int, n: int, nbytes: int) -> List[int]:
    half = 1 << (8 * nbytes - 1)
    value += _bias(n, nbytes)
    raw = value.to_bytes(n * nbytes, "little")
    return [int.from_bytes(raw[i:i + nbytes], "little") - half
            for i in range(0, n * nbytes, nbytes)]


def convolve(a: List[int], b: List[int], n: Optional[int] = None) -> List[int]:
    """First ``n`` terms of the integer convolution of ``a`` and ``b``.

    Dense inputs go through Kronecker substitution (one big-integer product);
    sparse ones are multiplied term by term.
    """
    if not a or not b:
        return []
    full = len(a) + len(b) - 1
    n = full if n is None else min(n, full)
    if n <= 0:
        return []
    a = a[:n]
    b = b[:n]
    nza = [(i, x) for i, x in enumerate(a) if x]
    nzb = [(j, y) for j, y in enumerate(b) if y]
    if not nza or not nzb:
        return [0] * n
    if len(nza) * len(nzb) <= _SPARSE_WORK or len(nza) * len(nzb) <= 4 * n:
        out = [0] * n
        for i, x in nza:
            lim = n - i
            for j, y in nzb:
                if j >= lim:
                    break
                out[i + j] += x * y
        return out
    ma = max(abs(x) for _, x in nza)
    mb = max(abs(y) for _, y in nzb)
    bound = ma * mb * min(len(nza), len(nzb))
    nbytes = (bound.bit_length() + 2 + 7) // 8
    m = len(a) + len(b) - 1
    return _unpack(bigmul(_pack(a, nbytes), _pack(b, nbytes)), m, nbytes)[:n]


# ---------------------------------------------------------------------------


class PuiseuxSeries:
    """Immutable truncated series; see the module docstring for the layout."""

    __slots__ = ("offset", "step", "num", "den", "prec")

    def __init__(self, offset, step: int, num: List[int], den: int = 1, prec=None,
                 _normalized: bool = False):
        self.offset = _frac(offset)
        self.step = int(step)
        self.num = num
        self.den = int(den)
        self.prec = None if prec is None else _frac(prec)
        if self.step <= 0 or self.den <= 0:
            raise InvalidInput("step and denominator must be positive")
        if not _normalized:
            self._normalize()

    # -- construction -----------------------------------------------------

    @classmethod
    def from_terms(cls, terms: Dict, prec=None) -> "PuiseuxSeries":
        """Build from a mapping exponent -> rational coefficient."""
        items = [(_frac(e), _frac(c)) for e, c in terms.items() if c != 0]
        if prec is not None:
            items = [(e, c) for e, c in items if e < _frac(prec)]
        if not items:
            return cls.zero(prec)
        lo = min(e for e, _ in items)
        step = _lcm(*[(e - lo).denominator for e, _ in items])
        den = _lcm(*[c.denominator for _, c in items])
        size = max(int((e - lo) * step) for e, _ in items) + 1
        num = [0] * size
        for e, c in items:
            num[int((e - lo) * step)] += c.numerator * (den // c.denominator)
        return cls(lo, step, num, den, prec)

    @classmethod
    def zero(cls, prec=None) -> "PuiseuxSeries":
        return cls(0, 1, [], 1, prec)

    @classmethod
    def const(cls, c, prec=None) -> "PuiseuxSeries":
        c = _frac(c)
        return cls(0, 1, [c.numerator], c.denominator, prec)

    @classmethod
    def monomial(cls, exponent, coeff=1, prec=None) -> "PuiseuxSeries":
        c = _frac(coeff)
        return cls(exponent, 1, [c.numerator], c.denominator, prec)

    @classmethod
    def from_list(cls, coeffs: Iterable, prec=None, offset=0, step: int = 1):
        """Coefficients of q**(offset + j/step) for j = 0, 1, ..."""
        cs = [_frac(c) for c in coeffs]
        den = _lcm(*[c.denominator for c in cs]) if cs else 1
        num = [c.numerator * (den // c.denominator) for c in cs]
        return cls(offset, step, num, den, prec)

    # -- normal form ------------------------------------------------------

    def _normalize(self) -> None:
        num = self.num
        if self.prec is not None:
            limit = _ceil((self.prec - self.offset) * self.step)
            if limit < len(num):
                num = num[:max(limit, 0)]
        start = 0
        while start < len(num) and num[start] == 0:
            start += 1
        end = len(num)
        while end > start and num[end - 1] == 0:
            end -= 1
        if start == end:
            self.offset, self.step, self.num, self.den = Fraction(0), 1, [], 1
            return
        if start or end != len(num):
            self.offset += Fraction(start, self.step)
            num = num[start:end]
        g = self.step
        for j, x in enumerate(num):
            if g == 1:
                break
            if x:
                g = math.gcd(g, j)
        if g > 1:
            num = num[::g]
            self.step //= g
        d = math.gcd(self.den, *num)
        if d > 1:
            num = [x // d for x in num]
            self.den //= d
        if num is self.num:
            num = list(num)
        self.num = num

    # -- views ------------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.prec is None

    def is_zero(self) -> bool:
        return not self.num

    @property
    def valuation(self) -> Optional[Fraction]:
        return None if not self.num else self.offset

    @property
    def scale(self) -> int:
        return _lcm(self.step, self.offset.denominator)

    @property
    def lo(self) -> int:
        if not self.num:
            return 0
        return int(self.offset * self.scale)

    def terms(self) -> List[Tuple[Fraction, Fraction]]:
        """(exponent, coefficient) pairs of the nonzero terms, ascending."""
        out = []
        for j, x in enumerate(self.num):
            if x:
                out.append((self.offset + Fraction(j, self.step), Fraction(x, self.den)))
        return out

    @property
    def coeffs(self) -> Dict[int, Fraction]:
        s = self.scale
        return {int(e * s): c for e, c in self.terms()}

    def coefficient(self, e) -> Fraction:
        e = _frac(e)
        if self.prec is not None and e >= self.prec:
            raise OutOfPrecision(f"coefficient of q^{e} requested but prec is {self.prec}")
        if not self.num:
            return Fraction(0)
        j = (e - self.offset) * self.step
        if j.denominator != 1 or j < 0 or j >= len(self.num):
            return Fraction(0)
        return Fraction(self.num[int(j)], self.den)

    __getitem__ = coefficient

    def integer_coefficients(self, n: int) -> List[int]:
        """Coefficients of q^0 .. q^(n-1) as ints (integral series only)."""
        if self.prec is not None and n > self.prec:
            raise OutOfPrecision(f"{n} terms requested but prec is {self.prec}")
        out = [0] * n
        for e, c in self.terms():
            if e < 0 or e.denominator != 1:
                raise InvalidInput("series has non-integer or negative exponents")
            if e < n:
                if c.denominator != 1:
                    raise InvalidInput(f"coefficient {c} at q^{e} is not an integer")
                out[int(e)] = int(c)
        return out

    def __repr__(self) -> str:
        shown = []
        for e, c in self.terms()[:8]:
            shown.append(f"{c}*q^{e}")
        body = " + ".join(shown) if shown else "0"
        if len(self.terms()) > 8:
            body += " + ..."
        tail = "" if self.prec is None else f" + O(q^{self.prec})"
        return f"PuiseuxSeries({body}{tail})"

    # -- precision --------------------------------------------------------

    def truncate(self, prec) -> "PuiseuxSeries":
        prec = _frac(prec)
        if self.prec is not None and prec >= self.prec:
            return self
        return PuiseuxSeries(self.offset, self.step, self.num, self.den, prec)

    def as_exact(self) -> "PuiseuxSeries":
        """Same stored terms, precision forgotten."""
        return PuiseuxSeries(self.offset, self.step, self.num, self.den, None, _normalized=True)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _coerce(x) -> "PuiseuxSeries":
        if isinstance(x, PuiseuxSeries):
            return x
        if isinstance(x, (int, Fraction)):
            return PuiseuxSeries.const(x)
        return NotImplemented

    def _spread(self, base: Fraction, step: int, size: int, scale_num: int) -> List[int]:
        out = [0] * size
        if not self.num:
            return out
        start = (self.offset - base) * step
        assert start.denominator == 1
        start = int(start)
        stride = step // self.step
        for j, x in enumerate(self.num):
            i = start + j * stride
            if i >= size:
                break
            if x:
                out[i] = x * scale_num
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        prec = _min_prec(self.prec, other.prec)
        if not other.num:
            return self.truncate(prec) if prec is not None else self
        if not self.num:
            return other.truncate(prec) if prec is not None else other
        base = min(self.offset, other.offset)
        step = _lcm(self.step, other.step, (self.offset - other.offset).denominator)
        top = max(self.offset + Fraction(len(self.num) - 1, self.step),
                  other.offset + Fraction(len(other.num) - 1, other.step))
        if prec is not None:
            top = min(top, prec)
        size = int((top - base) * step) + 1
        den = _lcm(self.den, other.den)
        a = self._spread(base, step, size, den // self.den)
        b = other._spread(base, step, size, den // other.den)
        return PuiseuxSeries(base, step, [x + y for x, y in zip(a, b)], den, prec)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries(self.offset, self.step, [-x for x in self.num], self.den,
                             self.prec, _normalized=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale_by(self, c) -> "PuiseuxSeries":
        c = _frac(c)
        return PuiseuxSeries(self.offset, self.step, [x * c.numerator for x in self.num],
                             self.den * c.denominator, self.prec)

    def shift(self, r) -> "PuiseuxSeries":
        """Multiply by q**r (exact)."""
        r = _frac(r)
        prec = None if self.prec is None else self.prec + r
        return PuiseuxSeries(self.offset + r, self.step, self.num, self.den, prec,
                             _normalized=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale_by(other)
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self.scale_by(1 / _frac(other))
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        if other.prec is None:
            if len(other.num) == 1:
                return self.shift(-other.offset).scale_by(Fraction(other.den, other.num[0]))
            if self.prec is None:
                raise InvalidInput("exact / exact needs an explicit precision")
            va = self.offset if self.num else self.prec
            need = self.prec - other.offset - va
            return self * series_invert(other, need)
        return self * series_invert(other)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __pow__(self, e: int):
        return series_pow(self, e)

    # -- comparison -------------------------------------------------------

    def first_difference(self, other) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
        """First exponent below the common precision where the series differ."""
        other = self._coerce(other)
        diff = self - other
        if not diff.num:
            return None
        e = diff.offset
        return e, self.coefficient(e), other.coefficient(e)

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.first_difference(other) is None

    __hash__ = None

    # -- serialization ----------------------------------------------------

    def to_text(self) -> str:
        s = self.scale
        prec = "inf" if self.prec is None else f"{self.prec.numerator}/{self.prec.denominator}"
        lines = [f"scale {s} prec {prec} lo {self.lo}"]
        for e, c in self.terms():
            lines.append(f"{int(e * s)} {c.numerator}/{c.denominator}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "PuiseuxSeries":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = lines[0].split()
        if len(head) != 6 or head[0] != "scale" or head[2] != "prec" or head[4] != "lo":
            raise InvalidInput(f"bad series header: {lines[0]!r}")
        s = int(head[1])
        prec = None if head[3] == "inf" else Fraction(head[3])
        terms = {}
        for ln in lines[1:]:
            i, c = ln.split()
            terms[Fraction(int(i), s)] = Fraction(c)
        return cls.from_terms(terms, prec)


# ---------------------------------------------------------------------------
# operations


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Exact truncated product; precision min(prec_a + val_b, prec_b + val_a)."""
    if not a.num or not b.num:
        va = a.offset if a.num else (a.prec if a.prec is not None else 0)
        vb = b.offset if b.num else (b.prec if b.prec is not None else 0)
        p1 = None if a.prec is None else a.prec + vb
        p2 = None if b.prec is None else b.prec + va
        return PuiseuxSeries.zero(_min_prec(p1, p2))
    p1 = None if a.prec is None else a.prec + b.offset
    p2 = None if b.prec is None else b.prec + a.offset
    prec = _min_prec(p1, p2)
    step = _lcm(a.step, b.step)
    base = a.offset + b.offset
    la = (len(a.num) - 1) * (step // a.step) + 1
    lb = (len(b.num) - 1) * (step // b.step) + 1
    n = la + lb - 1
    if prec is not None:
        n = min(n, max(_ceil((prec - base) * step), 0))
    if n <= 0:
        return PuiseuxSeries.zero(prec)
    xa = a._spread(a.offset, step, min(la, n), 1)
    xb = b._spread(b.offset, step, min(lb, n), 1)
    return PuiseuxSeries(base, step, convolve(xa, xb, n), a.den * b.den, prec)


def series_invert(a: PuiseuxSeries, prec=None) -> PuiseuxSeries:
    """Multiplicative inverse.  Exact inputs need an explicit ``prec``."""
    if not a.num:
        raise InvalidInput("cannot invert a zero or empty series")
    v = a.offset
    if a.prec is None:
        if prec is None:
            if len(a.num) == 1:
                return PuiseuxSeries(-v, 1, [a.den], a.num[0])
            raise InvalidInput("inverting an exact series needs a precision")
        rel = _frac(prec) + v
    else:
        rel = a.prec - v
        if prec is not None:
            rel = min(rel, _frac(prec) + v)
    if rel <= 0:
        return PuiseuxSeries.zero(rel - v)
    # unit part u = a / (c0 q^v), u = 1 + O(q^(1/step))
    c0 = Fraction(a.num[0], a.den)
    u = PuiseuxSeries(0, a.step, a.num, a.den, None if a.prec is None else rel,
                      _normalized=True).scale_by(1 / c0)
    g = PuiseuxSeries.const(1)
    p = Fraction(1, a.step)
    while True:
        p = min(2 * p, rel)
        ut = u.truncate(p)
        ge = g.as_exact()
        err = (ut * ge) - 1
        g = (ge - (ge * err)).truncate(p)
        if p >= rel:
            break
    return g.shift(-v).scale_by(1 / c0)


def series_pow(a: PuiseuxSeries, e: int, prec=None) -> PuiseuxSeries:
    e = int(e)
    if e < 0:
        return series_pow(series_invert(a, prec), -e)
    result = PuiseuxSeries.const(1)
    base = a
    while e:
        if e & 1:
            result = result * base
        e >>= 1
        if e:
            base = base * base
    if prec is not None:
        result = result.truncate(prec)
    return result


def substitute_power(a: PuiseuxSeries, r) -> PuiseuxSeries:
    """q -> q**r for a positive rational r."""
    r = _frac(r)
    if r <= 0:
        raise InvalidInput("substitution exponent must be positive")
    prec = None if a.prec is None else a.prec * r
    if not a.num:
        return PuiseuxSeries.zero(prec)
    step = a.step * r.denominator
    stride = r.numerator
    num = [0] * ((len(a.num) - 1) * stride + 1)
    num[::stride] = a.num
    return PuiseuxSeries(a.offset * r, step, num, a.den, prec)


def _require_integral_exponents(a: PuiseuxSeries, what: str) -> None:
    if a.num and (a.step != 1 or a.offset.denominator != 1):
        raise InvalidInput(f"{what} needs integer exponents")


def dissect(a: PuiseuxSeries, m: int, r: int) -> PuiseuxSeries:
    """Sum of coeff(m n + r) q^n."""
    if m <= 0 or not 0 <= r < m:
        raise InvalidInput("need m > 0 and 0 <= r < m")
    _require_integral_exponents(a, "dissect")
    prec = None if a.prec is None else (a.prec - r) / m
    if not a.num:
        return PuiseuxSeries.zero(prec)
    lo = int(a.offset)
    first = lo + (r - lo) % m
    n0 = (first - r) // m
    return PuiseuxSeries(n0, 1, a.num[first - lo::m], a.den, prec)


def alternate_sign(a: PuiseuxSeries) -> PuiseuxSeries:
    """q -> -q on an integer-exponent series."""
    _require_integral_exponents(a, "alternate_sign")
    lo = int(a.offset) if a.num else 0
    num = [-x if (lo + j) % 2 else x for j, x in enumerate(a.num)]
    return PuiseuxSeries(a.offset, a.step, num, a.den, a.prec, _normalized=True)


def coefficient(a: PuiseuxSeries, e) -> Fraction:
    return a.coefficient(e)


def first_difference(a: PuiseuxSeries, b: PuiseuxSeries):
    return a.first_difference(b)


# ---------------------------------------------------------------------------


class ModSeries:
    """Integral series reduced coefficientwise into [0, modulus)."""

    __slots__ = ("modulus", "offset", "step", "res", "prec")

    def __init__(self, modulus: int, offset, step: int, res: List[int], prec):
        self.modulus = modulus
        self.offset = _frac(offset)
        self.step = step
        self.res = res
        self.prec = prec

    def terms(self) -> List[Tuple[Fraction, int]]:
        return [(self.offset + Fraction(j, self.step), x) for j, x in enumerate(self.res) if x]

    def is_zero(self) -> bool:
        return not any(self.res)

    def coefficient(self, e) -> int:
        e = _frac(e)
        if self.prec is not None and e >= self.prec:
            raise OutOfPrecision(f"coefficient of q^{e} requested but prec is {self.prec}")
        j = (e - self.offset) * self.step
        if j.denominator != 1 or j < 0 or j >= len(self.res):
            return 0
        return self.res[int(j)]

    def __eq__(self, other):
        if isinstance(other, int):
            other = reduce_mod(PuiseuxSeries.const(other), self.modulus)
        if not isinstance(other, ModSeries) or other.modulus != self.modulus:
            return NotImplemented
        prec = _min_prec(self.prec, other.prec)
        a = {e: x for e, x in self.terms() if prec is None or e < prec}
        b = {e: x for e, x in other.terms() if prec is None or e < prec}
        return a == b

    __hash__ = None

    def __repr__(self):
        shown = " + ".join(f"{x}*q^{e}" for e, x in self.terms()[:8]) or "0"
        return f"ModSeries({shown} mod {self.modulus}, prec={self.prec})"


def reduce_mod(a: PuiseuxSeries, M: int) -> ModSeries:
    if M <= 0:
        raise InvalidInput("modulus must be positive")
    if a.den != 1:
        bad = next(c for _, c in a.terms() if c.denominator != 1)
        raise InvalidInput(f"non-integral coefficient {bad}")
    return ModSeries(M, a.offset, a.step, [x % M for x in a.num], a.prec)
