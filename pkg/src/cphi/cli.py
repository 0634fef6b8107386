"""Command line: compute values and series, enumerate symbols, verify registry entries."""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

from . import harness
from .engine import cphi_series, refined_cphi_ct
from .frobenius import color_difference, enumerate_symbols, refined_counts, symbol_order
from .series import InvalidInput, OutOfPrecision, PuiseuxSeries

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
CACHE_ENV = "CPHI_CACHE_DIR"
# beyond this many symbols the oracle is refused
ENUMERATE_LIMIT = 200_000


class UsageError(Exception):
    pass


@dataclass
class CliConfig:
    precision: Optional[Fraction] = None  # None: each registry entry's default (120)
    n_max: Optional[int] = None  # None: each registry entry's default (400)
    fmt: str = "text"
    cache_dir: Optional[Path] = None
    jobs: int = 1

    def __post_init__(self):
        if self.precision is not None and self.precision < 10:
            raise UsageError("precision must be at least 10")
        if self.n_max is not None and self.n_max < 1:
            raise UsageError("n-max must be positive")
        if self.fmt not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.fmt!r}")
        if self.jobs < 1:
            raise UsageError("jobs must be positive")


# ---------------------------------------------------------------------------
# disk cache


class SeriesCache:
    """Series stored as text records under a key of (builder, canonical params, precision)."""

    def __init__(self, root: Path):
        self.root = Path(root)

    @staticmethod
    def key(builder: str, params: dict, prec) -> str:
        canon = json.dumps({"builder": builder, "params": params, "prec": str(Fraction(prec))}, sort_keys=True)
        return hashlib.sha256(canon.encode()).hexdigest()[:32]

    def path(self, builder: str, params: dict, prec) -> Path:
        return self.root / f"{builder}-{self.key(builder, params, prec)}.series"

    def get(self, builder: str, params: dict, prec) -> Optional[PuiseuxSeries]:
        p = self.path(builder, params, prec)
        if not p.exists():
            return None
        return PuiseuxSeries.from_text(p.read_text())

    def put(self, builder: str, params: dict, prec, s: PuiseuxSeries) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        p = self.path(builder, params, prec)
        tmp = p.with_suffix(".tmp")
        tmp.write_text(s.to_text())
        os.replace(tmp, p)


def _cached_cphi(k: int, prec: Fraction, method: str, cache: Optional[SeriesCache], verify: bool):
    """Returns (series, cache_status) with status in {none, hit, miss, verified, mismatch}."""
    if cache is None:
        return cphi_series(k, prec, method), "none"
    params = {"k": k, "method": method}
    hit = cache.get("cphi_series", params, prec)
    if hit is None:
        s = cphi_series(k, prec, method)
        cache.put("cphi_series", params, prec, s)
        return s, "miss"
    if verify:
        fresh = cphi_series(k, prec, method)
        same = fresh.to_text() == cache.path("cphi_series", params, prec).read_text()
        return fresh, "verified" if same else "mismatch"
    return hit, "hit"


# ---------------------------------------------------------------------------
# rendering


def _emit_value(k: int, n: int, value, fmt: str, out) -> None:
    if fmt == "text":
        out.write(f"{value}\n")
    else:
        _emit([{"k": k, "n": n, "value": str(value)}], fmt, ["k", "n", "value"], out)


def _emit(rows: List[dict], fmt: str, columns: List[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2, sort_keys=True) + "\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=columns, lineterminator="\n")
        w.writeheader()
        for r in rows:
            w.writerow({c: r.get(c, "") for c in columns})
    else:
        for r in rows:
            out.write(" ".join(str(r[c]) for c in columns) + "\n")


# ---------------------------------------------------------------------------
# commands


def cmd_compute(args, cfg: CliConfig, out) -> int:
    k = args.k
    if k < 1:
        raise UsageError("k must be at least 1")
    if args.method == "enumerate":
        if args.series or args.n is None:
            raise UsageError("--method enumerate computes single values; pass --n")
        if args.n < 0:
            raise UsageError("n must be nonnegative")
        estimate = int(cphi_series(k, args.n + 1).coefficient(args.n))
        if estimate > ENUMERATE_LIMIT:
            raise UsageError(f"enumeration would list {estimate} symbols (limit {ENUMERATE_LIMIT}); "
                             "use --method ct or lattice for this size")
        value = len(enumerate_symbols(k, args.n))
        _emit_value(k, args.n, value, cfg.fmt, out)
        return EXIT_OK
    if args.method == "lattice" and k == 1:
        raise UsageError("the lattice route needs k >= 2")
    if args.series:
        prec = cfg.precision if cfg.precision is not None else Fraction(harness.DEFAULT_PREC)
        s, status = _cached_cphi(k, prec, args.method, cfg.cache_dir and SeriesCache(cfg.cache_dir),
                                 args.verify_cache)
        rows = [{"n": str(e), "coefficient": str(c)} for e, c in s.terms()]
        if cfg.fmt == "text":
            out.write(f"# CPhi_{k} to O(q^{s.prec})\n")
        _emit(rows, cfg.fmt, ["n", "coefficient"], out)
        if status == "mismatch":
            sys.stderr.write("cache entry differs from recomputation\n")
            return EXIT_FAIL
        return EXIT_OK
    if args.n is None:
        raise UsageError("pass --n or --series")
    if args.n < 0:
        raise UsageError("n must be nonnegative")
    prec = Fraction(args.n + 1)
    if cfg.precision is not None and cfg.precision > prec:
        prec = cfg.precision
    s, status = _cached_cphi(k, prec, args.method, cfg.cache_dir and SeriesCache(cfg.cache_dir), args.verify_cache)
    value = s.coefficient(args.n)
    _emit_value(k, args.n, value, cfg.fmt, out)
    if status == "mismatch":
        sys.stderr.write("cache entry differs from recomputation\n")
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify(args, cfg: CliConfig, out) -> int:
    if not args.all and not args.id:
        raise UsageError("pass --id GLOB (repeatable) or --all")
    reg = harness.load_registry(args.registry)
    patterns = ["*"] if args.all else args.id
    unknown = [p for p in patterns if not reg.select(p)]
    if unknown:
        rows = [{"id": p, "status": "error", "message": "unknown id"} for p in unknown]
        if cfg.fmt == "json":
            out.write(json.dumps(rows, indent=2, sort_keys=True) + "\n")
        else:
            for p in unknown:
                out.write(f"unknown id: {p}\n")
        return EXIT_USAGE
    seen, results = set(), []
    for p in patterns:
        for r in harness.run_suite(p, cfg.precision, cfg.n_max, cfg.jobs, args.registry):
            if r.id not in seen:
                seen.add(r.id)
                results.append(r)
    if cfg.fmt == "json":
        text = harness.report_json(results, include_time=not args.no_time)
    elif cfg.fmt == "csv":
        text = harness.report_csv(results)
    else:
        text = harness.report_text(results)
    if args.output:
        Path(args.output).write_text(text)
    else:
        out.write(text)
    return EXIT_OK if all(r.status == "pass" for r in results) else EXIT_FAIL


def cmd_enumerate(args, cfg: CliConfig, out) -> int:
    if args.k < 1 or args.n < 0:
        raise UsageError("need k >= 1 and n >= 0")
    estimate = int(cphi_series(args.k, args.n + 1).coefficient(args.n))
    if estimate > ENUMERATE_LIMIT:
        raise UsageError(f"{estimate} symbols exceeds the listing limit {ENUMERATE_LIMIT}")
    if args.refined:
        rc = refined_counts(args.k, args.n)
        table = refined_cphi_ct(args.k, args.n).row(args.n)
        body = {
            "k": args.k, "n": args.n, "total": str(rc.cphi),
            "by_difference": {str(m): str(c) for m, c in rc.by_difference.items()},
            "by_difference_engine": {str(m): str(c) for m, c in table.items()},
            "by_order": {str(o): str(c) for o, c in rc.psi.items()},
            "full_order_by_class": {str(j): str(c) for j, c in rc.residue_classes.items()},
        }
        if cfg.fmt == "json":
            out.write(json.dumps(body, indent=2, sort_keys=True) + "\n")
        elif cfg.fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            w.writerow(["m", "count"])
            for m, c in rc.by_difference.items():
                w.writerow([m, c])
        else:
            hist = ", ".join(f"{m}: {c}" for m, c in rc.by_difference.items())
            out.write(f"total {rc.cphi}\n")
            out.write("m-histogram {" + hist + "}\n")
            out.write("by order " + " ".join(f"{o}:{c}" for o, c in rc.psi.items()) + "\n")
            out.write("full order by class " + " ".join(f"{j}:{c}" for j, c in rc.residue_classes.items()) + "\n")
        return EXIT_OK
    rows = [{"symbol": s.render(), "order": symbol_order(s), "difference": color_difference(s)}
            for s in enumerate_symbols(args.k, args.n)]
    if cfg.fmt == "text":
        for r in rows:
            out.write(f"{r['symbol']}  order {r['order']}  m {r['difference']}\n")
        out.write(f"{len(rows)} symbols\n")
    else:
        _emit(rows, cfg.fmt, ["symbol", "order", "difference"], out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _positive_fraction(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"), default="text")
    common.add_argument("--prec", type=_positive_fraction, default=None,
                        help="series precision in q-units (default 120, minimum 10)")
    common.add_argument("--n-max", type=int, default=None, help="congruence scan bound (default 400)")
    common.add_argument("--cache-dir", default=None, help=f"series cache directory (or ${CACHE_ENV})")
    common.add_argument("--jobs", type=int, default=1, help="parallel checks")

    p = argparse.ArgumentParser(prog="cphi", description="k-colored generalized Frobenius partitions")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compute", parents=[common], help="cphi_k(n) or the series CPhi_k")
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--n", type=int)
    c.add_argument("--series", action="store_true", help="print the series to --prec")
    c.add_argument("--method", choices=("ct", "lattice", "enumerate"), default="ct")
    c.add_argument("--verify-cache", action="store_true", help="recompute and compare with the cached record")

    v = sub.add_parser("verify", parents=[common], help="run registry checks")
    v.add_argument("--id", action="append", help="id or glob; repeatable")
    v.add_argument("--all", action="store_true")
    v.add_argument("--registry", default=None, help="alternative registry file")
    v.add_argument("--output", default=None, help="write the report here instead of stdout")
    v.add_argument("--no-time", action="store_true", help="omit wall times from JSON (byte-stable output)")

    e = sub.add_parser("enumerate", parents=[common], help="list symbols with order and color difference")
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--refined", action="store_true", help="histogram by color difference")
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cache = args.cache_dir or os.environ.get(CACHE_ENV)
        cfg = CliConfig(args.prec, args.n_max, args.fmt, Path(cache) if cache else None, args.jobs)
        handler = {"compute": cmd_compute, "verify": cmd_verify, "enumerate": cmd_enumerate}[args.command]
        return handler(args, cfg, out)
    except (UsageError, InvalidInput, OutOfPrecision, harness.UnknownCheck) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
