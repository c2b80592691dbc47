"""Route statistics of the rainbow-triangle resolution.

Builds triples where the first permutation has deficits (1, -2, 1) and
the second is the first composed with a 3-cycle, then biases the cells
around the rows fixed in part Z so that plain transpositions fail. Prints
how often each case of the analysis was used.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "tests"))

from fairrep.bipartite3 import deficits, is_good, resolve_triangle_traced  # noqa: E402
from test_bipartite3 import adversarial  # noqa: E402


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--trials", type=int, default=5000)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    routes = Counter()
    for _ in range(args.trials):
        made = adversarial(rng)
        if made is None:
            continue
        A, k, trio = made
        d = [deficits(A, k, p) for p in trio]
        if not (d[0][0] == 1 and d[0][1] == -2 and d[1][1] == 1):
            continue
        perm, route = resolve_triangle_traced(A, k, *trio)
        assert is_good(deficits(A, k, perm))
        routes[route] += 1
    for route, c in routes.most_common():
        print(f"{route:<14} {c}")
    return 1 if routes["safety-net"] else 0


if __name__ == "__main__":
    raise SystemExit(main())
