"""Search for Ramanujan-type congruences cphi_k(m n + r) = 0 (mod M).

For every k, m, r in range, reports the largest modulus M (among the given
candidates) dividing all cphi_k(m n + r) with m n + r <= n_max.  Prints CSV.
"""
import argparse
import csv
import sys
from dataclasses import dataclass, field
from math import gcd
from typing import List

from cphi.engine import cphi_values


@dataclass
class ScanConfig:
    ks: List[int] = field(default_factory=lambda: list(range(2, 18)))
    moduli: List[int] = field(default_factory=lambda: [2, 3, 5, 7, 11, 13, 17])
    max_power: int = 8
    n_max: int = 400
    min_terms: int = 20


def progression_gcd(vals: List[int], m: int, r: int) -> int:
    g = 0
    for n in range(r, len(vals), m):
        g = gcd(g, vals[n])
        if g == 1:
            break
    return g


def scan(cfg: ScanConfig):
    for k in cfg.ks:
        vals = cphi_values(k, cfg.n_max)
        for m in cfg.moduli:
            for r in range(m):
                if (cfg.n_max - r) // m + 1 < cfg.min_terms:
                    continue
                g = progression_gcd(vals, m, r)
                for p in cfg.moduli:
                    e = 0
                    while e < cfg.max_power and g % p ** (e + 1) == 0:
                        e += 1
                    if e:
                        yield k, m, r, p, e


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k", type=int, nargs="+")
    ap.add_argument("--n-max", type=int, default=400)
    ap.add_argument("--max-power", type=int, default=8)
    a = ap.parse_args()
    cfg = ScanConfig(n_max=a.n_max, max_power=a.max_power)
    if a.k:
        cfg.ks = a.k
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(["k", "step", "residue", "prime", "power"])
    for row in scan(cfg):
        w.writerow(row)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
