from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fairrep import lab
from fairrep.cli import main, render_report
from fairrep.core import interval_report, path


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, blob, name="inst.json"):
    p = tmp_path / name
    p.write_text(json.dumps(blob))
    return str(p)


def test_render_report_table_and_json(p4):
    rep = interval_report(p4, [0, 2])
    table = render_report(rep, "table")
    lines = table.splitlines()
    assert lines[0].split() == ["class", "size", "count", "quota", "deficit"]
    assert lines[1].split() == ["1", "3", "1", "1", "1/2"]
    assert lines[-1] == "total deficit: 1/2"
    blob = json.loads(render_report(rep, "json"))
    assert blob["total_deficit"] == "1/2"
    with pytest.raises(ValueError):
        render_report(rep, "xml")


def test_solve_path_fixture(capsys):
    code, out, _ = run(capsys, "solve", "path", "--in", "p4_example")
    assert code == 0
    blob = json.loads(out)
    assert blob["report"]["total_deficit"] == "1/2"


def test_solve_path_table(capsys):
    code, out, _ = run(capsys, "solve", "path", "--instance",
                       '{"kind": "path", "classes": [1, 1, 2, 1]}', "--format", "table")
    assert code == 0 and "total deficit: 1/2" in out


def test_solve_cycle_modes(capsys, tmp_path):
    f = write(tmp_path, {"kind": "cycle", "classes": [1, 2, 3, 1, 2, 3, 1, 2]})
    code, out, _ = run(capsys, "solve", "cycle", "--in", f, "--exact")
    assert code == 0 and json.loads(out)["report"]["counts"] == [1, 1, 1]
    code, out, _ = run(capsys, "solve", "cycle", "--in", f, "--avoid", "1")
    assert code == 0 and 1 not in json.loads(out)["set"]
    code, _, err = run(capsys, "solve", "cycle", "--in", f, "--targets", "1,1")
    assert code == 2 and "PreconditionViolation" in err


def test_solve_power_cycle_and_dhw(capsys, tmp_path):
    f = write(tmp_path, {"kind": "power_cycle", "s": 4, "classes": [1] * 11 + [2] * 6})
    code, out, _ = run(capsys, "solve", "power-cycle", "--in", f)
    assert code == 0 and json.loads(out)["report"]["counts"] == [2, 1]
    g = write(tmp_path, {"kind": "cycle", "classes": [1, 2, 3] * 3}, "c9.json")
    code, out, _ = run(capsys, "solve", "dhw", "--in", g)
    assert code == 0 and len(json.loads(out)["sets"]) == 2


def test_bipartite2_count_exit_codes(capsys):
    code, out, _ = run(capsys, "solve", "bipartite2", "--in", "rigid6", "--count", "3")
    assert code == 1
    blob = json.loads(out)
    assert blob["achievable"] == [0, 2, 4, 6] and blob["reason"] == "RigidInfeasible"
    code, out, _ = run(capsys, "solve", "bipartite2", "--in", "rigid6", "--count", "4")
    assert code == 0 and json.loads(out)["report"]["counts"][0] == 4


def test_bipartite3_with_disk(capsys, tmp_path):
    rows = [[1, 2, 3, 1, 2], [3, 1, 2, 1, 2], [2, 3, 1, 1, 2], [1, 2, 3, 1, 1], [2, 1, 3, 2, 2]]
    f = write(tmp_path, {"colors": rows})
    disk = tmp_path / "disk.json"
    code, out, _ = run(capsys, "solve", "bipartite3", "--in", f, "--emit-disk", str(disk))
    assert code == 0
    assert set(json.loads(disk.read_text())) == {"vertices", "triangles", "arcs"}
    assert "route" in json.loads(out)


def test_check_verbs(capsys, tmp_path):
    code, out, _ = run(capsys, "check", "rigidity", "--in", "rigid6")
    assert code == 0 and json.loads(out)["K"] == [1, 2, 3]
    code, _, _ = run(capsys, "check", "stein", "--in", "z4_table")
    assert code == 0
    code, out, _ = run(capsys, "check", "rainbow", "--in", "three_c4")
    assert code == 1 and json.loads(out)["holds"] is False
    code, _, _ = run(capsys, "check", "treesconj0", "--in", "p4_example")
    assert code == 0
    f = write(tmp_path, {"kind": "labeled_edges", "k": 2, "edges": [[1, 1, 1], [2, 2, 2], [1, 2, 1]]})
    code, _, _ = run(capsys, "check", "prefix", "--in", f)
    assert code == 0
    code, _, err = run(capsys, "check", "prefix", "--in", "p4_example")
    assert code == 2


def test_sweep_and_fixtures(capsys, tmp_path):
    out_file = tmp_path / "sweep.json"
    code, _, _ = run(capsys, "sweep", "--conjecture", "treesconj0", "--n", "6", "--m", "2",
                     "--mode", "exhaustive", "--out", str(out_file))
    assert code == 0
    blob = json.loads(out_file.read_text())
    assert blob["tested"] == lab.stirling2(6, 2)
    code, out, _ = run(capsys, "fixtures", "run", "--format", "table")
    assert code == 0 and out.count("PASS") == len(lab.fixture_names())
    code, out, _ = run(capsys, "fixtures", "list")
    assert code == 0 and len(json.loads(out)["fixtures"]) == len(lab.fixture_names())
    code, _, _ = run(capsys, "fixtures", "run", "nope")
    assert code == 2


def test_oracle(capsys):
    code, out, _ = run(capsys, "oracle", "--in", "p4_example")
    assert code == 0 and json.loads(out)["optimum_total_deficit"] == "1/2"
    code, out, _ = run(capsys, "oracle", "--in", "z4_table")
    assert code == 0 and json.loads(out)["fair_perm"] is None


def test_usage_errors(capsys, tmp_path):
    assert run(capsys, "solve", "path", "--in", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "solve", "path")[0] == 2
    assert run(capsys, "solve", "path", "--instance", "{not json")[0] == 2
    assert run(capsys, "bogus")[0] == 2
    assert run(capsys, "solve", "path", "--in", "rigid6")[0] == 2


@pytest.mark.parametrize("name", lab.fixture_names())
def test_fixture_instances_round_trip(name, tmp_path, capsys):
    data = lab.load_fixture(name)
    inst = lab.load_instance(data)
    again = lab.load_instance(json.loads(json.dumps(lab.dump_instance(inst))))
    assert again == inst
    f = write(tmp_path, lab.dump_instance(inst))
    verb = {"path": ("oracle",), "rigidity": ("check", "rigidity"),
            "transversal": ("check", "equirep00"), "rainbow": ("check", "rainbow")}[data["check"]]
    code, out, _ = run(capsys, *verb, "--in", f)
    assert code in (0, 1)
    json.loads(out)


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "fairrep", "fixtures", "list", "--format", "table"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and "p4_example" in res.stdout
