"""Registry-driven verification of series identities, leading terms and congruences."""
from __future__ import annotations

import configparser
import csv
import fnmatch
import io
import json
import re
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .expr import Evaluator, Node, parse, substitute_vars, unparse
from .series import PuiseuxSeries, first_difference

DEFAULT_PREC = 120
DEFAULT_NMAX = 400
REGISTRY_PATH = Path(__file__).with_name("data") / "registry.ini"
KINDS = ("series-identity", "congruence", "leading-terms")


class UnknownCheck(KeyError):
    pass


class RegistryError(ValueError):
    pass


@dataclass(frozen=True)
class Clause:
    """Coefficients with index = residue (mod step) vanish mod modulus; residue None means all."""

    modulus: int
    residue: Optional[int] = None
    step: int = 1

    def applies(self, n: int) -> bool:
        return self.residue is None or n % self.step == self.residue

    def render(self) -> str:
        if self.residue is None:
            return f"all n mod {self.modulus}"
        return f"n = {self.residue} (mod {self.step}) mod {self.modulus}"


@dataclass(frozen=True)
class CheckSpec:
    id: str
    kind: str
    note: str
    lhs: Optional[Node] = None
    rhs: Optional[Node] = None
    clauses: Tuple[Clause, ...] = ()
    upto: Optional[Fraction] = None
    prec: Optional[Fraction] = None
    nmax: Optional[int] = None
    known_issue: Optional[str] = None
    group: Optional[str] = None

    def to_record(self) -> dict:
        out = {"id": self.id, "kind": self.kind, "note": self.note}
        if self.kind == "congruence":
            out["series"] = unparse(self.lhs)
            out["clauses"] = [c.render() for c in self.clauses]
        else:
            out["lhs"] = unparse(self.lhs)
            out["rhs"] = unparse(self.rhs)
        if self.upto is not None:
            out["upto"] = str(self.upto)
        if self.known_issue:
            out["known_issue"] = self.known_issue
        return out


@dataclass
class CheckResult:
    id: str
    kind: str
    status: str  # pass | fail | error
    bound: str  # precision (identities) or n_max (congruences) used
    first_mismatch: Optional[Tuple[str, str, str]] = None
    wall_time: float = 0.0
    known_issue: Optional[str] = None
    message: Optional[str] = None

    def __post_init__(self):
        if self.status == "fail":
            assert self.first_mismatch is not None, "a failing result must carry its first mismatch"

    def to_dict(self) -> dict:
        mm = None
        if self.first_mismatch is not None:
            e, a, b = self.first_mismatch
            mm = {"exponent": e, "lhs": a, "rhs": b}
        return {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "bound": self.bound,
            "first_mismatch": mm,
            "known_issue": self.known_issue,
            "message": self.message,
            "wall_time": round(self.wall_time, 6),
        }


@dataclass
class Registry:
    defs: Dict[str, Node] = field(default_factory=dict)
    checks: Dict[str, CheckSpec] = field(default_factory=dict)

    def ids(self) -> List[str]:
        return list(self.checks)

    def groups(self) -> Dict[str, List[str]]:
        out: Dict[str, List[str]] = {}
        for cid, spec in self.checks.items():
            if spec.group:
                out.setdefault(spec.group, []).append(cid)
        return out

    def select(self, pattern: str) -> List[str]:
        """Check ids matching a glob against either the full id or its parametrized group."""
        out = []
        for cid, spec in self.checks.items():
            if fnmatch.fnmatchcase(cid, pattern) or (spec.group and fnmatch.fnmatchcase(spec.group, pattern)):
                out.append(cid)
        return out


_CLAUSE = re.compile(r"^\s*(\d+)\s*:\s*(?:all|(\d+)\s+mod\s+(\d+))\s*$")


def _parse_clauses(text: str) -> Tuple[Clause, ...]:
    out = []
    for line in text.strip().splitlines():
        m = _CLAUSE.match(line)
        if not m:
            raise RegistryError(f"bad clause {line!r}")
        M = int(m.group(1))
        if m.group(2) is None:
            out.append(Clause(M))
        else:
            r, step = int(m.group(2)), int(m.group(3))
            if not 0 <= r < step:
                raise RegistryError(f"residue out of range in {line!r}")
            out.append(Clause(M, r, step))
    return tuple(out)


def _parse_instances(text: str) -> List[Tuple[str, Dict[str, str]]]:
    out = []
    for line in text.strip().splitlines():
        label, _, rest = line.partition(":")
        values = dict(tok.split("=", 1) for tok in rest.split())
        out.append((label.strip(), values))
    return out


def _build_check(cid: str, sec, values: Dict[str, str], group: Optional[str]) -> CheckSpec:
    def get(key):
        raw = sec.get(key)
        return None if raw is None else substitute_vars(raw, values, strict=key not in ("note", "known_issue"))

    kind = sec.get("kind")
    if kind not in KINDS:
        raise RegistryError(f"{cid}: kind must be one of {KINDS}")
    note = get("note") or ""
    lhs = rhs = None
    clauses: Tuple[Clause, ...] = ()
    if kind == "congruence":
        lhs = parse(get("series"))
        clauses = _parse_clauses(get("clauses"))
    else:
        lhs, rhs = parse(get("lhs")), parse(get("rhs"))
    upto = Fraction(get("upto")) if sec.get("upto") else None
    if kind == "leading-terms" and upto is None:
        raise RegistryError(f"{cid}: leading-terms needs upto")
    prec = Fraction(get("prec")) if sec.get("prec") else None
    nmax = int(get("nmax")) if sec.get("nmax") else None
    return CheckSpec(cid, kind, note, lhs, rhs, clauses, upto, prec, nmax, get("known_issue"), group)


def load_registry(path=None) -> Registry:
    path = Path(path) if path else REGISTRY_PATH
    return _load_registry(str(path))


@lru_cache(maxsize=8)
def _load_registry(path: str) -> Registry:
    cp = configparser.ConfigParser(interpolation=None, comment_prefixes=("#",), empty_lines_in_values=False)
    cp.optionxform = str
    with open(path, encoding="utf-8") as fh:
        cp.read_file(fh)
    reg = Registry()
    for name in cp.sections():
        kind, _, ident = name.partition(" ")
        sec = cp[name]
        if kind == "def":
            reg.defs[ident] = parse(sec["expr"])
        elif kind == "check":
            if "instances" in sec:
                for label, values in _parse_instances(sec["instances"]):
                    cid = f"{ident}:{label}"
                    reg.checks[cid] = _build_check(cid, sec, values, ident)
            else:
                reg.checks[ident] = _build_check(ident, sec, {}, None)
        else:
            raise RegistryError(f"unknown section [{name}]")
    for cid in reg.checks:
        if cid in reg.defs:
            raise RegistryError(f"name clash between check and definition {cid!r}")
    return reg


# ---------------------------------------------------------------------------
# running


def _mismatch(a: PuiseuxSeries, b: PuiseuxSeries, bound: Fraction):
    d = first_difference(a, b)
    if d is None or d[0] >= bound:
        return None
    return tuple(str(x) for x in d)


def _run_identity(spec: CheckSpec, ev: Evaluator, prec: Fraction):
    bound = spec.upto if spec.kind == "leading-terms" else prec
    lhs = ev.evaluate(spec.lhs, bound)
    rhs = ev.evaluate(spec.rhs, bound)
    return str(bound), _mismatch(lhs, rhs, bound)


def _run_congruence(spec: CheckSpec, ev: Evaluator, nmax: int):
    s = ev.evaluate(spec.lhs, nmax + 1)
    for e, c in s.terms():
        if e.denominator != 1:
            return str(nmax), (str(e), str(c), "no fractional exponents")
        if c.denominator != 1:
            return str(nmax), (str(e), str(c), "integer coefficient")
        n = int(e)
        for cl in spec.clauses:
            if cl.applies(n) and c.numerator % cl.modulus:
                return str(nmax), (str(n), str(c), f"0 mod {cl.modulus}")
    return str(nmax), None


def _execute(spec: CheckSpec, defs: Dict[str, Node], prec=None, n_max=None) -> CheckResult:
    t0 = time.perf_counter()
    ev = Evaluator(defs)
    try:
        if spec.kind == "congruence":
            nmax = int(n_max if n_max is not None else (spec.nmax or DEFAULT_NMAX))
            bound, mm = _run_congruence(spec, ev, nmax)
        else:
            p = Fraction(prec) if prec is not None else (spec.prec or Fraction(DEFAULT_PREC))
            bound, mm = _run_identity(spec, ev, p)
    except Exception as exc:  # captured per check
        return CheckResult(spec.id, spec.kind, "error", "", None, time.perf_counter() - t0,
                           spec.known_issue, f"{type(exc).__name__}: {exc}")
    status = "pass" if mm is None else "fail"
    # the flag only matters where the printed statement actually fails
    flag = spec.known_issue if status != "pass" else None
    return CheckResult(spec.id, spec.kind, status, bound, mm, time.perf_counter() - t0, flag)


def run_spec(spec: CheckSpec, prec=None, n_max=None, registry: Optional[Registry] = None) -> CheckResult:
    """Run an ad-hoc spec (e.g. a mutated registry entry)."""
    reg = registry or load_registry()
    return _execute(spec, reg.defs, prec, n_max)


def run_check(check_id: str, prec=None, n_max=None, registry: Optional[Registry] = None) -> CheckResult:
    """Run one entry.  A parametrized group id runs every instance and reports the first failure."""
    reg = registry or load_registry()
    if check_id in reg.checks:
        return _execute(reg.checks[check_id], reg.defs, prec, n_max)
    members = reg.groups().get(check_id)
    if not members:
        raise UnknownCheck(check_id)
    t0 = time.perf_counter()
    parts = [_execute(reg.checks[m], reg.defs, prec, n_max) for m in members]
    bad = next((r for r in parts if r.status != "pass"), None)
    if bad is None:
        return CheckResult(check_id, parts[0].kind, "pass", parts[0].bound, None, time.perf_counter() - t0)
    return CheckResult(check_id, bad.kind, bad.status, bad.bound, bad.first_mismatch,
                       time.perf_counter() - t0, bad.known_issue, f"instance {bad.id}: {bad.message or bad.status}")


def _worker(args):
    cid, prec, n_max, path = args
    return run_check(cid, prec, n_max, load_registry(path))


def run_suite(pattern: str = "*", prec=None, n_max=None, jobs: int = 1,
              registry_path=None) -> List[CheckResult]:
    """Run all checks whose id (or group) matches the glob; results in registry order."""
    reg = load_registry(registry_path)
    ids = reg.select(pattern)
    if not ids:
        return []
    if jobs <= 1:
        results = [run_check(cid, prec, n_max, reg) for cid in ids]
    else:
        path = str(registry_path or REGISTRY_PATH)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, [(cid, prec, n_max, path) for cid in ids]))
    order = {cid: i for i, cid in enumerate(ids)}
    return sorted(results, key=lambda r: order[r.id])


# ---------------------------------------------------------------------------
# mutation


def perturb_constant(node: Node, delta=Fraction(1), index: int = 0) -> Node:
    """Copy of ``node`` with its index-th non-integer-position rational constant shifted by delta."""
    count = [0]

    def walk(x, in_args):
        if isinstance(x, Fraction):
            if in_args and count[0] == index:
                count[0] += 1
                return x + delta
            if in_args:
                count[0] += 1
            return x
        if isinstance(x, tuple):
            head = x[0]
            # only constants that are arithmetic operands, not builder parameters
            arith = head in ("+", "-", "*", "/", "neg")
            return (head,) + tuple(walk(a, arith) for a in x[1:])
        return x

    out = walk(node, False)
    if count[0] <= index:
        raise ValueError("no rational coefficient to perturb")
    return out


def mutate(spec: CheckSpec, delta=Fraction(1), index: int = 0) -> CheckSpec:
    side = "rhs" if spec.rhs is not None else "lhs"
    return replace(spec, id=spec.id + "~mutant", **{side: perturb_constant(getattr(spec, side), delta, index)})


# ---------------------------------------------------------------------------
# reports


def report_json(results: Sequence[CheckResult], include_time: bool = True) -> str:
    rows = []
    for r in results:
        d = r.to_dict()
        if not include_time:
            d.pop("wall_time")
        rows.append(d)
    return json.dumps(rows, indent=2, sort_keys=True) + "\n"


def report_csv(results: Sequence[CheckResult]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "kind", "status", "bound", "mismatch_exponent", "mismatch_lhs", "mismatch_rhs",
                "known_issue", "wall_time"])
    for r in results:
        e, a, b = r.first_mismatch or ("", "", "")
        w.writerow([r.id, r.kind, r.status, r.bound, e, a, b, r.known_issue or "", f"{r.wall_time:.3f}"])
    return buf.getvalue()


def report_text(results: Sequence[CheckResult]) -> str:
    width = max((len(r.id) for r in results), default=4)
    lines = [f"{'id':<{width}}  status  bound  time(s)  detail"]
    for r in results:
        detail = ""
        if r.first_mismatch:
            e, a, b = r.first_mismatch
            detail = f"first mismatch at q^{e}: {a} vs {b}"
        if r.message:
            detail = (detail + "; " if detail else "") + r.message
        if r.known_issue:
            detail = (detail + "; " if detail else "") + "known-issue: " + r.known_issue
        lines.append(f"{r.id:<{width}}  {r.status:<6}  {r.bound:>5}  {r.wall_time:7.2f}  {detail}".rstrip())
    n_pass = sum(r.status == "pass" for r in results)
    lines.append(f"{n_pass}/{len(results)} passed")
    return "\n".join(lines) + "\n"
