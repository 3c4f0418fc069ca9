"""Run every law suite over several seeds and print a pass-count table.

    python3 scripts/law_sweep.py --seeds 0 1 2 --samples 100
"""
import argparse
import time
from collections import Counter

from treelaw.suites import SUITES, dist_law_reports, monad_law_reports


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seeds", type=int, nargs="+", default=[0])
    ap.add_argument("--samples", type=int, default=50)
    args = ap.parse_args()
    runs = {f"monad {m}": (lambda n, s, m=m: monad_law_reports(m, n, s)) for m in ("R", "T", "Tx", "U")}
    runs.update({f"dist {m}": (lambda n, s, m=m: dist_law_reports(m, n, s)) for m in ("R", "T", "Tx")})
    runs.update({f"suite {k}": fn for k, fn in SUITES.items()})
    for seed in args.seeds:
        for name, fn in runs.items():
            start = time.perf_counter()
            reports = fn(args.samples, seed)
            total, passed = Counter(), Counter()
            for r in reports:
                total[r.axiom] += 1
                passed[r.axiom] += r.passed
            bad = {a: total[a] - passed[a] for a in total if passed[a] < total[a]}
            print(f"seed {seed:>3}  {name:<12} {sum(passed.values()):>5}/{sum(total.values()):<5} "
                  f"{time.perf_counter() - start:6.2f}s  {bad or ''}")


if __name__ == "__main__":
    main()
