"""Rebuild the fixture instances and show observed vs expected verdicts.

Expected blocks already on disk are kept as they are; only the instances
and descriptions are rewritten. New fixtures start with an empty block.
"""
from __future__ import annotations

import argparse
import json

from fairrep import lab


def zn(n):
    return [[(i + j) % n + 1 for j in range(n)] for i in range(n)]


def stein(n):
    M = [[i] * n for i in range(1, n + 1)]
    for i in range(1, n):
        M[i - 1][n - 1] = i + 1
    M[n - 1][n - 1] = 1
    return M


def remark_path():
    # stretch i is i * i * i with the stars filled by 5 and i+1 (4 wraps to 1)
    return sum(([i, 5, i, i % 4 + 1, i] for i in range(1, 5)), [])


def three_c4():
    def c4(c):
        return {1: [2 * c - 1, 2 * c - 1], 2: [2 * c, 2 * c - 1], 3: [2 * c, 2 * c], 4: [2 * c - 1, 2 * c]}
    A = {c: c4(c) for c in (1, 2, 3)}
    return [[A[1][1], A[1][3], A[3][1]], [A[1][2], A[1][4], A[3][3]],
            [A[2][1], A[2][3], A[3][2]], [A[2][2], A[2][4], A[3][4]]]


FIXTURES = {
    "p4_example": dict(check="path", description="P_4 with V_1 = {v1, v2, v4}, V_2 = {v3}",
                       instance={"kind": "path", "n": 4, "classes": [1, 1, 2, 1]}),
    "remark_path20": dict(check="path",
                          description="20-vertex path 1*1*1-2*2*2-3*3*3-4*4*4 with the stars filled as "
                                      "5,i+1 in stretch i (4 wraps to 1); five classes of size 4",
                          instance={"kind": "path", "n": 20, "classes": remark_path()}),
    "rigid6": dict(check="rigidity", description="n = 6, F = [3]x[3] plus {4,5,6}x{4,5,6}",
                   probe_counts=[3],
                   instance={"n": 6, "m": 2, "colors": [[1 if (i < 3) == (j < 3) else 2 for j in range(6)]
                                                        for i in range(6)]}),
    "rigid2_diag": dict(check="rigidity", description="n = 2, F a perfect matching", probe_counts=[1],
                        instance={"n": 2, "m": 2, "colors": [[1, 2], [2, 1]]}),
    "z4_table": dict(check="transversal", description="addition table of Z_4, symbols as parts",
                     instance={"n": 4, "m": 4, "colors": zn(4)}),
    "z6_table": dict(check="transversal", description="addition table of Z_6, symbols as parts",
                     instance={"n": 6, "m": 6, "colors": zn(6)}),
    "stein4": dict(check="transversal", description="m_ij = i (j < n), m_in = i + 1 (i < n), m_nn = 1; n = 4",
                   instance={"n": 4, "m": 4, "colors": stein(4)}),
    "stein5": dict(check="transversal", description="same construction, n = 5",
                   instance={"n": 5, "m": 5, "colors": stein(5)}),
    "three_c4": dict(check="rainbow", description="three disjoint 4-cycles, four edge sets of size 3",
                     instance={"kind": "edge_sets", "sets": three_c4()}),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--write", action="store_true", help="rewrite the JSON files")
    args = ap.parse_args(argv)
    status = 0
    for name, body in FIXTURES.items():
        path = lab.FIXTURE_DIR / f"{name}.json"
        old = json.loads(path.read_text()) if path.exists() else {}
        blob = {"name": name, **body, "expected": old.get("expected", {})}
        if args.write:
            path.write_text(json.dumps(blob, indent=1) + "\n")
        elif old.get("instance") != body["instance"]:
            print(f"{name}: instance on disk differs (use --write)")
            status = 1
        if path.exists():
            res = lab.run_fixture(name)
            print(f"{'PASS' if res.passed else 'FAIL'}  {name}  {json.dumps(res.observed)}")
            status |= not res.passed
    return status


if __name__ == "__main__":
    raise SystemExit(main())
