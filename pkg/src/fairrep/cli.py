"""Command-line front end.

    fairrep solve path|cycle|power-cycle|dhw|bipartite2|bipartite3 --in FILE
    fairrep check rigidity|treesconj0|equirep00|stein|rainbow|underrep|prefix --in FILE
    fairrep sweep --conjecture ID --n N --m M [--mode exhaustive|random]
    fairrep fixtures list|run [NAME ...]
    fairrep oracle --in FILE

Exit codes: 0 success or verdict true, 1 verdict false, 2 usage or input
error, 3 internal invariant violation (a bug).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bipartite2, bipartite3, interval, lab
from .core import (BudgetExceeded, CapExceeded, ColorMatrix, CountInfeasible, FairnessReport,
                   FairRepError, InternalInvariantViolation, InvalidInstance, Kind,
                   PreconditionViolation, RigidInfeasible, VertexPartition, fairness_report,
                   perm_to_json, set_to_json)
from .matching import all_perms, perm_counts

log = logging.getLogger("fairrep")

EXIT_OK, EXIT_FALSE, EXIT_USAGE, EXIT_BUG = 0, 1, 2, 3


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _cell(x) -> str:
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return str(x)


def render_report(report: FairnessReport, fmt: str = "json") -> str:
    """JSON (sorted keys) or an aligned table of class, size, count, quota, deficit."""
    if fmt == "json":
        return json.dumps(report.to_json(), indent=2, sort_keys=True)
    if fmt != "table":
        raise ValueError(f"unknown format {fmt!r}")
    head = ("class", "size", "count", "quota", "deficit")
    rows = [head] + [(str(i + 1), str(z), str(c), _cell(q), _cell(d))
                     for i, (z, c, q, d) in enumerate(zip(report.sizes, report.counts,
                                                          report.quotas, report.deficits))]
    widths = [max(len(r[t]) for r in rows) for t in range(len(head))]
    lines = ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in rows]
    lines.append(f"total deficit: {_cell(report.total_deficit)}")
    return "\n".join(lines)


def _plain(x):
    if isinstance(x, Fraction):
        return _cell(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, dict):
        return {k: _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def _table(payload: dict) -> str:
    lines = []
    report = payload.get("report")
    for key, val in payload.items():
        if key == "report":
            continue
        if isinstance(val, (dict, list)) and key in ("counterexamples", "disk"):
            lines.append(f"{key}: {len(val)} entries")
        else:
            lines.append(f"{key}: {json.dumps(_plain(val))}")
    if isinstance(report, FairnessReport):
        lines.append(render_report(report, "table"))
    return "\n".join(lines)


def _emit(payload: dict, args) -> None:
    if args.format == "table":
        text = _table(payload)
    else:
        body = {k: (v.to_json() if isinstance(v, FairnessReport) else v) for k, v in payload.items()}
        text = json.dumps(_plain(body), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# input
# ---------------------------------------------------------------------------

def _read_input(args) -> dict:
    if getattr(args, "instance", None):
        text = args.instance
    elif args.infile == "-":
        text = sys.stdin.read()
    elif args.infile:
        path = Path(args.infile)
        if not path.exists():
            if args.infile in lab.fixture_names():
                return lab.load_fixture(args.infile)
            raise UsageError(f"no such file: {args.infile}")
        text = path.read_text()
    else:
        raise UsageError("an instance is required (--in FILE, --in - or --instance JSON)")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise UsageError(f"instance is not valid JSON: {e}") from e


def _load(args, want=None):
    inst = lab.load_instance(_read_input(args))
    if want is not None and not isinstance(inst, want):
        raise UsageError(f"expected a {want.__name__} instance, got {type(inst).__name__}")
    return inst


def _want_kind(inst, kind: Kind) -> VertexPartition:
    if not isinstance(inst, VertexPartition) or inst.kind is not kind:
        raise UsageError(f"expected a {kind.value} instance")
    return inst


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as e:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from e


# ---------------------------------------------------------------------------
# verbs
# ---------------------------------------------------------------------------

def cmd_solve(args) -> int:
    inst = _load(args)
    target = args.target
    if target == "path":
        inst = _want_kind(inst, Kind.PATH)
        members, report = interval.solve_path_total(inst)
        _emit({"set": set_to_json(members), "report": report}, args)
    elif target == "cycle":
        inst = _want_kind(inst, Kind.CYCLE)
        if args.targets or args.exact:
            targets = _int_list(args.targets) if args.targets else None
            members = interval.solve_cycle_exact(inst, targets)
            report = fairness_report(inst, members)
        else:
            avoid = None if args.avoid is None else args.avoid - 1
            members, report = interval.solve_cycle_individual(inst, avoid)
        _emit({"set": set_to_json(members), "report": report}, args)
    elif target == "power-cycle":
        inst = _want_kind(inst, Kind.POWER_CYCLE)
        if args.targets:
            members = interval.exact_counts(inst.classes, _int_list(args.targets), inst.s)
            if members is None:
                _emit({"set": None, "targets": _int_list(args.targets)}, args)
                return EXIT_FALSE
        else:
            members = interval.solve_power_cycle(inst)
        _emit({"set": set_to_json(members), "report": fairness_report(inst, members)}, args)
    elif target == "dhw":
        inst = _want_kind(inst, Kind.CYCLE)
        S1, S2 = interval.solve_dhw(inst)
        _emit({"sets": [set_to_json(S1), set_to_json(S2)]}, args)
    elif target == "bipartite2":
        inst = _matrix(inst, 2)
        if args.count is not None:
            try:
                perm = bipartite2.exact_count_matching(inst.mask(0), args.count)
            except (RigidInfeasible, CountInfeasible) as e:
                _emit({"perm": None, "count": e.count, "achievable": list(e.achievable),
                       "reason": type(e).__name__}, args)
                return EXIT_FALSE
        else:
            perm = bipartite2.almost_fair_two(inst.mask(0))
        _emit({"perm": perm_to_json(perm), "report": fairness_report(inst, perm)}, args)
    elif target == "bipartite3":
        inst = _matrix(inst, 3)
        run = bipartite3.solve_three_traced(inst, keep_disk=bool(args.emit_disk))
        if args.emit_disk:
            disk = run.disk.to_json() if run.disk is not None else {"vertices": [], "triangles": [], "arcs": []}
            Path(args.emit_disk).write_text(json.dumps(disk) + "\n")
        _emit({"perm": perm_to_json(run.perm), "route": run.route, "strategy": run.strategy,
               "report": run.report}, args)
    return EXIT_OK


def _matrix(inst, m: int) -> ColorMatrix:
    if not isinstance(inst, ColorMatrix) or inst.m != m:
        raise UsageError(f"expected a bipartite instance with m={m}")
    return inst


def cmd_check(args) -> int:
    what = args.target
    inst = _load(args)
    if what == "rigidity":
        inst = _matrix(inst, 2)
        cert = bipartite2.check_rigidity(inst.mask(0))
        out = {"rigid": cert.rigid, "K": [k + 1 for k in cert.K], "L": [l + 1 for l in cert.L]}
        if cert.rigid:
            out["achievable"] = list(bipartite2.rigid_achievable(inst.n, len(cert.K), len(cert.L)))
            out["parity"] = "even" if cert.parity == 0 else "odd"
        else:
            out["witness"] = [perm_to_json(p) for p in cert.witness]
        _emit(out, args)
        return EXIT_OK if cert.rigid else EXIT_FALSE
    if what == "treesconj0":
        verdict = lab.check_treesconj0(_want_kind(inst, Kind.PATH))
    elif what == "equirep00":
        if not isinstance(inst, ColorMatrix):
            raise UsageError("expected a bipartite instance")
        verdict = lab.check_equirep00(inst, None if args.j is None else args.j - 1)
    elif what == "stein":
        if not isinstance(inst, ColorMatrix):
            raise UsageError("expected a bipartite instance")
        verdict = lab.check_stein(inst)
    elif what in ("rainbow", "underrep"):
        if not isinstance(inst, lab.EdgeSets):
            raise UsageError("expected an edge_sets instance")
        fn = lab.check_rainbow if what == "rainbow" else lab.check_underrep
        verdict = fn(inst, args.budget)
        if what == "rainbow":
            verdict.detail["note"] = lab.SIMPLE_HOST_NOTE
    else:
        if not isinstance(inst, lab.LabeledEdges):
            raise UsageError("expected a labeled_edges instance")
        verdict = lab.check_prefix_fair(inst, args.budget)
    _emit(verdict.to_json(), args)
    return EXIT_OK if verdict.holds else EXIT_FALSE


def cmd_sweep(args) -> int:
    cfg = lab.SweepConfig(
        conjecture=args.conjecture, n=args.n, m=args.m, mode=args.mode, samples=args.samples,
        seed=args.seed, budget=args.budget, workers=args.workers, s=args.s,
        sizes=tuple(_int_list(args.sizes)) if args.sizes else None)
    out = lab.run_sweep(cfg)
    _emit(out.to_json(), args)
    return EXIT_OK if out.clean else EXIT_FALSE


def cmd_fixtures(args) -> int:
    names = lab.fixture_names()
    if args.action == "list":
        rows = [{"name": n, "check": lab.load_fixture(n)["check"],
                 "description": lab.load_fixture(n).get("description", "")} for n in names]
        if args.format == "table":
            text = "\n".join(f"{r['name']:<16} {r['check']:<12} {r['description']}" for r in rows)
            print(text) if not args.out else Path(args.out).write_text(text + "\n")
        else:
            _emit({"fixtures": rows}, args)
        return EXIT_OK
    chosen = args.names or names
    unknown = [n for n in chosen if n not in names]
    if unknown:
        raise UsageError(f"unknown fixtures: {unknown}")
    results = [lab.run_fixture(n) for n in chosen]
    if args.format == "table":
        text = "\n".join(f"{'PASS' if r.passed else 'FAIL'}  {r.name}" for r in results)
        print(text) if not args.out else Path(args.out).write_text(text + "\n")
    else:
        _emit({"results": [r.to_json() for r in results]}, args)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FALSE


def cmd_oracle(args) -> int:
    inst = _load(args)
    if isinstance(inst, VertexPartition):
        members, total = interval.oracle_interval(inst)
        _emit({"set": set_to_json(members), "optimum_total_deficit": total,
               "report": fairness_report(inst, members)}, args)
        return EXIT_OK
    if isinstance(inst, ColorMatrix):
        if inst.n > lab.PERM_CAP:
            raise CapExceeded(f"n={inst.n} above the permutation enumeration cap {lab.PERM_CAP}")
        counts = perm_counts(np.array(inst.colors), inst.m)
        vectors = sorted({tuple(int(x) for x in row) for row in counts})
        bounds = bipartite3.theorem_bounds(inst.sizes, inst.n)
        floors = np.array(inst.sizes) // inst.n
        ok = np.flatnonzero((counts >= floors).all(axis=1))
        _emit({"count_vectors": [list(v) for v in vectors],
               "fair_perm": perm_to_json(tuple(int(x) for x in all_perms(inst.n)[ok[0]])) if len(ok) else None,
               "bounds": [list(b) for b in bounds]}, args)
        return EXIT_OK
    raise UsageError("oracle supports interval and bipartite instances")


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--budget", type=int, default=lab.SEARCH_BUDGET)
    common.add_argument("-v", "--verbose", action="store_true")

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument("--in", dest="infile", help="instance JSON file, '-' for stdin, or a fixture name")
    source.add_argument("--instance", help="inline instance JSON")

    p = argparse.ArgumentParser(prog="fairrep", description="Fair representation solvers and checkers.")
    sub = p.add_subparsers(dest="verb", required=True)

    s = sub.add_parser("solve", parents=[common, source], help="run a constructive solver")
    s.add_argument("target", choices=("path", "cycle", "power-cycle", "dhw", "bipartite2", "bipartite3"))
    s.add_argument("--targets", help="exact per-class counts r1,r2,... (cycle, power-cycle)")
    s.add_argument("--exact", action="store_true", help="cycle: exact counts with the default targets")
    s.add_argument("--avoid", type=int, help="cycle: vertex (1-based) the set must not contain")
    s.add_argument("--count", type=int, help="bipartite2: exact number of part-1 edges")
    s.add_argument("--emit-disk", help="bipartite3: write the triangulated disk here")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("check", parents=[common, source], help="decide a statement on one instance")
    c.add_argument("target", choices=("rigidity", "treesconj0", "equirep00", "stein", "rainbow",
                                      "underrep", "prefix"))
    c.add_argument("--j", type=int, help="equirep00: the part allowed one less (default: every part)")
    c.set_defaults(func=cmd_check)

    w = sub.add_parser("sweep", parents=[common], help="sweep a family of small instances")
    w.add_argument("--conjecture", required=True, choices=sorted(lab.TARGETS))
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--m", type=int, default=2)
    w.add_argument("--mode", choices=("exhaustive", "random"), default="random")
    w.add_argument("--samples", type=int, default=1000)
    w.add_argument("--s", type=int, default=4, help="spacing for power-cycle sweeps")
    w.add_argument("--sizes", help="fixed class/part sizes, comma separated")
    w.set_defaults(func=cmd_sweep, budget=5_000_000)

    f = sub.add_parser("fixtures", parents=[common], help="list or run the bundled fixtures")
    f.add_argument("action", choices=("list", "run"))
    f.add_argument("names", nargs="*")
    f.set_defaults(func=cmd_fixtures)

    o = sub.add_parser("oracle", parents=[common, source], help="brute-force an instance")
    o.set_defaults(func=cmd_oracle)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except InternalInvariantViolation as e:
        print(f"internal invariant violated (bug): {e}", file=sys.stderr)
        return EXIT_BUG
    except (UsageError, InvalidInstance, PreconditionViolation, CapExceeded, BudgetExceeded,
            FairRepError, ValueError, KeyError, TypeError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
