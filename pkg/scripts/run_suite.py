"""Run registry checks and write JSON plus text reports.

    python scripts/run_suite.py --pattern 'CPHI*' --prec 120 --out results/
"""
import argparse
import logging
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from cphi.harness import report_json, report_text, run_suite

log = logging.getLogger("run_suite")


@dataclass
class SuiteConfig:
    pattern: str = "*"
    prec: Optional[int] = None
    n_max: Optional[int] = None
    jobs: int = 1
    out: Path = Path("results")


def parse_args() -> SuiteConfig:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--pattern", default="*")
    ap.add_argument("--prec", type=int)
    ap.add_argument("--n-max", type=int)
    ap.add_argument("--jobs", type=int, default=1)
    ap.add_argument("--out", type=Path, default=Path("results"))
    a = ap.parse_args()
    return SuiteConfig(a.pattern, a.prec, a.n_max, a.jobs, a.out)


def main(cfg: SuiteConfig) -> int:
    log.info("config %s", asdict(cfg))
    results = run_suite(cfg.pattern, cfg.prec, cfg.n_max, cfg.jobs)
    cfg.out.mkdir(parents=True, exist_ok=True)
    (cfg.out / "report.json").write_text(report_json(results))
    (cfg.out / "report.txt").write_text(report_text(results))
    failed = [r for r in results if r.status != "pass"]
    for r in failed:
        log.warning("%s %s at q^%s: %s", r.id, r.status, r.first_mismatch and r.first_mismatch[0],
                    r.known_issue or r.message or "")
    log.info("%d checks, %d not passing; reports in %s", len(results), len(failed), cfg.out)
    return 1 if failed else 0


if __name__ == "__main__":
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    raise SystemExit(main(parse_args()))
