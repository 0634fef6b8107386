"""Prefix S-expression language over the series builders.

Grammar::

    expr   := number | "(" head arg* ")"
    number := integer | integer "/" integer

Arithmetic heads: ``+ - * / ^ neg``.  Transformations: ``subst a r``
(q -> q^r), ``dissect a m r``, ``shift a r`` (times q^r), ``altsign a``,
``twist a d``.  Leaves:

    (q r)              q^r (exact)
    (poch a b)         (q^a; q^b)_inf         (npoch a b) for (-q^a; q^b)_inf
    (euler r)          (q^r; q^r)_inf
    (eta r)            eta(r tau), with its q^{r/24}
    (etaq (r e) ...)   prod eta(r tau)^e
    (theta 2|3 r)      Theta_2(q^r), Theta_3(q^r)
    (jacobi x y)       f(q^x, q^y)
    (geneta L a)       generalized eta of level L
    (E2 r) (E4 r)      Eisenstein series at q^r
    (eis w d side)     twisted divisor sum, chi = (d/.), side divisor|codivisor
    (pprog l c)        sum_{j>=1} p(l j - c) q^j
    (A k)              theta series of the k-color form
    (cphi k)           CPhi_k(q)
    (overline k)       sum_{d|k} mu(d) CPhi_{k/d}(q^d)
    (dualtheta l)      dual-lattice theta series
    (binqf a b c)      theta series of a m^2 + b m n + c n^2
    (fgh f|g|h l)      f_l, g_l, h_l
    (ref name)         a named definition
"""
from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Optional, Tuple, Union

from . import builders as B
from .engine import binary_qf_theta, cphi_series, dual_theta, frobenius_theta
from .frobenius import mobius
from .series import (InvalidInput, PuiseuxSeries, _frac, alternate_sign, dissect,
                     series_pow, substitute_power)

Node = Union[Fraction, str, Tuple]

_TOKEN = re.compile(r"\(|\)|[^\s()]+")
_NUMBER = re.compile(r"^-?\d+(/\d+)?$")


class ExprError(ValueError):
    pass


def parse(text: str) -> Node:
    tokens = _TOKEN.findall(text)
    if not tokens:
        raise ExprError("empty expression")
    pos = 0

    def read():
        nonlocal pos
        if pos >= len(tokens):
            raise ExprError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            items = []
            while True:
                if pos >= len(tokens):
                    raise ExprError("unbalanced parentheses")
                if tokens[pos] == ")":
                    pos += 1
                    break
                items.append(read())
            if not items:
                raise ExprError("empty list")
            return tuple(items)
        if tok == ")":
            raise ExprError("unexpected ')'")
        if _NUMBER.match(tok):
            return Fraction(tok)
        return tok

    node = read()
    if pos != len(tokens):
        raise ExprError(f"trailing tokens after expression: {' '.join(tokens[pos:])}")
    return node


def unparse(node: Node) -> str:
    if isinstance(node, Fraction):
        return str(node)
    if isinstance(node, str):
        return node
    return "(" + " ".join(unparse(x) for x in node) + ")"


def _num(x) -> Fraction:
    if not isinstance(x, Fraction):
        raise ExprError(f"expected a number, got {unparse(x)}")
    return x


def _int(x) -> int:
    v = _num(x)
    if v.denominator != 1:
        raise ExprError(f"expected an integer, got {v}")
    return int(v)


def _overline(k: int, prec: Fraction) -> PuiseuxSeries:
    total = PuiseuxSeries.zero(prec)
    for d in range(1, k + 1):
        if k % d:
            continue
        mu = mobius(d)
        if mu:
            total = total + mu * substitute_power(cphi_series(k // d, prec / d), d)
    return total


def _leaf(head: str, args: tuple, prec: Fraction) -> PuiseuxSeries:
    if head == "q":
        return PuiseuxSeries.monomial(_num(args[0]))
    if head == "poch":
        return B.pochhammer(_num(args[0]), _num(args[1]), prec)
    if head == "npoch":
        return B.pochhammer(_num(args[0]), _num(args[1]), prec, negate=True)
    if head == "euler":
        r = _num(args[0])
        return B.pochhammer(r, r, prec)
    if head == "eta":
        return B.eta(_num(args[0]), prec)
    if head == "etaq":
        pairs = []
        for pair in args:
            if not isinstance(pair, tuple) or len(pair) != 2:
                raise ExprError("etaq takes (multiplier exponent) pairs")
            pairs.append((_int(pair[0]), _int(pair[1])))
        return B.eta_quotient(B.EtaQuotientSpec(tuple(pairs), prec))
    if head == "theta":
        return B.theta(_int(args[0]), _num(args[1]), prec)
    if head == "jacobi":
        return B.jacobi_f(_num(args[0]), _num(args[1]), prec)
    if head == "geneta":
        return B.gen_eta(_int(args[0]), _int(args[1]), prec)
    if head in ("E2", "E4"):
        return B.eisenstein(head, _int(args[0]), prec)
    if head == "eis":
        return B.twisted_eisenstein(_int(args[0]), B.CharacterSpec(_int(args[1])), args[2], prec)
    if head == "pprog":
        return B.partition_progression(_int(args[0]), _int(args[1]), prec)
    if head == "A":
        return frobenius_theta(_int(args[0]), prec)
    if head == "cphi":
        return cphi_series(_int(args[0]), prec)
    if head == "overline":
        return _overline(_int(args[0]), prec)
    if head == "dualtheta":
        return dual_theta(_int(args[0]), prec)
    if head == "binqf":
        return binary_qf_theta(_int(args[0]), _int(args[1]), _int(args[2]), prec)
    if head == "fgh":
        return B.fgh_ell(args[0], _int(args[1]), prec)
    raise ExprError(f"unknown head {head!r}")


LEAVES = {"q", "poch", "npoch", "euler", "eta", "etaq", "theta", "jacobi", "geneta", "E2", "E4", "eis",
          "pprog", "A", "cphi", "overline", "dualtheta", "binqf", "fgh"}


class Evaluator:
    """Evaluates expressions; leaf values and named definitions are memoized per precision."""

    def __init__(self, defs: Optional[Dict[str, Node]] = None):
        self.defs = defs or {}
        self._memo: Dict[Tuple, PuiseuxSeries] = {}

    def evaluate(self, node: Node, prec, max_rounds: int = 8) -> PuiseuxSeries:
        """Exact series equal to ``node`` with precision at least ``prec``."""
        target = _frac(prec)
        work = target
        for _ in range(max_rounds):
            out = self._eval(node, work)
            if out.prec is None or out.prec >= target:
                return out.truncate(target)
            work += (target - out.prec) + 1
        raise InvalidInput(f"could not reach precision {target} (got {out.prec})")

    def _eval(self, node: Node, W: Fraction) -> PuiseuxSeries:
        if isinstance(node, Fraction):
            return PuiseuxSeries.const(node)
        if isinstance(node, str):
            raise ExprError(f"bare symbol {node!r}")
        head, args = node[0], node[1:]
        if head in LEAVES:
            key = (node, W)
            hit = self._memo.get(key)
            if hit is None:
                hit = _leaf(head, args, W)
                self._memo[key] = hit
            return hit
        if head == "ref":
            name = args[0]
            if name not in self.defs:
                raise ExprError(f"unknown definition {name!r}")
            key = ("ref", name, W)
            hit = self._memo.get(key)
            if hit is None:
                hit = self._eval(self.defs[name], W)
                self._memo[key] = hit
            return hit
        if head == "+":
            out = self._eval(args[0], W)
            for a in args[1:]:
                out = out + self._eval(a, W)
            return out
        if head == "-":
            if len(args) == 1:
                return -self._eval(args[0], W)
            out = self._eval(args[0], W)
            for a in args[1:]:
                out = out - self._eval(a, W)
            return out
        if head == "neg":
            return -self._eval(args[0], W)
        if head == "*":
            # scalars first so that series products stay few
            scalar = Fraction(1)
            series = []
            for a in args:
                if isinstance(a, Fraction):
                    scalar *= a
                else:
                    series.append(self._eval(a, W))
            if not series:
                return PuiseuxSeries.const(scalar)
            out = series[0]
            for s in series[1:]:
                out = out * s
            return out if scalar == 1 else out.scale_by(scalar)
        if head == "/":
            num = self._eval(args[0], W)
            den = self._eval(args[1], W)
            if den.prec is None and num.prec is None and len(den.num) > 1:
                num = num.truncate(W)
            return num / den
        if head == "^":
            base = self._eval(args[0], W)
            e = _int(args[1])
            if e < 0 and base.prec is None and len(base.num) > 1:
                base = base.truncate(W)
            return series_pow(base, e)
        if head == "subst":
            r = _num(args[1])
            return substitute_power(self._eval(args[0], W / r), r)
        if head == "dissect":
            m, r = _int(args[1]), _int(args[2])
            return dissect(self._eval(args[0], W * m + r), m, r)
        if head == "shift":
            r = _num(args[1])
            return self._eval(args[0], W - r).shift(r)
        if head == "altsign":
            return alternate_sign(self._eval(args[0], W))
        if head == "twist":
            return B.twist(self._eval(args[0], W), _int(args[1]))
        raise ExprError(f"unknown head {head!r}")


def evaluate(expr: Union[str, Node], prec, defs: Optional[Dict[str, Node]] = None) -> PuiseuxSeries:
    node = parse(expr) if isinstance(expr, str) else expr
    return Evaluator(defs).evaluate(node, prec)


def substitute_vars(text: str, values: Dict[str, str], strict: bool = True) -> str:
    """Replace {name} placeholders; unknown names raise unless ``strict`` is off."""
    def repl(m):
        key = m.group(1)
        if key not in values:
            if strict:
                raise ExprError(f"unbound placeholder {{{key}}}")
            return m.group(0)
        return values[key]
    return re.sub(r"\{(\w+)\}", repl, text)
