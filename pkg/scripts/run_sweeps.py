"""Run a batch of conjecture sweeps and store the outcomes as JSON.

Each line of the plan is ``target n m mode samples``; the default plan covers
every sweep target at sizes that finish in a few minutes on one core.
"""
from __future__ import annotations

import argparse
import json
import logging
import time
from pathlib import Path

from fairrep.lab import SweepConfig, run_sweep

PLAN = """
treesconj0 10 3 exhaustive 0
path-total 10 3 exhaustive 0
cycle-exact 10 3 exhaustive 0
cycle-individual 10 4 exhaustive 0
power-cycle 16 2 exhaustive 0
dhw 9 3 exhaustive 0
rigidity 5 2 exhaustive 0
exact-count 4 2 exhaustive 0
equirep00 4 3 exhaustive 0
stein 3 3 exhaustive 0
three 4 3 exhaustive 0
three 6 3 random 2000
rainbow 5 5 random 2000
underrep 4 3 random 1000
prefix 4 3 random 1000
"""


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--plan", help="file with one sweep per line (default: built-in plan)")
    ap.add_argument("--out", default="results/sweeps.json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    text = Path(args.plan).read_text() if args.plan else PLAN
    results = []
    for line in text.strip().splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        target, n, m, mode, samples = line.split()
        cfg = SweepConfig(target, int(n), int(m), mode, int(samples), seed=args.seed,
                          workers=args.workers)
        t = time.time()
        out = run_sweep(cfg)
        blob = out.to_json()
        blob["seconds"] = round(time.time() - t, 2)
        results.append(blob)
        print(f"{target:<17} n={n:<3} m={m:<2} {mode:<10} tested={out.tested:<7} "
              f"skipped={out.skipped:<6} counterexamples={len(out.counterexamples):<4} {blob['seconds']}s")
    path = Path(args.out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(results, indent=1) + "\n")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
