from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairrep.core import (
    ColorMatrix, DimensionMismatch, FairnessReport, InvalidInstance, InvalidSolution, Kind,
    bipartite_report, check_perm, color_matrix, compose, cycle, fairness_report, from_cycles,
    hamming_distance, identity, instance_from_json, instance_to_json, interval_report, inverse,
    path, perm_from_json, perm_to_json, power_cycle, sim, subset_matrix,
)

from conftest import color_rows, perms, surjective_labels


def test_p4_report(p4):
    rep = interval_report(p4, [0, 2])
    assert rep.counts == (1, 1)
    assert rep.sizes == (3, 1)
    assert rep.deficits == (Fraction(1, 2), Fraction(0))
    assert rep.total_deficit == Fraction(1, 2)
    assert rep.quotas == (1, 0)


def test_report_rejects_adjacent(p4):
    with pytest.raises(InvalidSolution):
        interval_report(p4, [0, 1])


def test_single_class_path_alternate():
    inst = path([0] * 7)
    rep = interval_report(inst, [0, 2, 4, 6])
    assert rep.total_deficit == 0


def test_cycle_wraps():
    inst = cycle([0, 1, 0, 1, 0])
    assert inst.adjacent(0, 4)
    assert not inst.is_independent([0, 4])
    assert inst.is_independent([0, 2])


def test_power_cycle_adjacency():
    inst = power_cycle([0] * 8, 4)
    assert inst.beta == 4
    assert inst.adjacent(0, 3) and inst.adjacent(0, 5)
    assert not inst.adjacent(0, 4)
    assert inst.is_independent([0, 4])


def test_all_one_matrix_is_exact():
    A = color_matrix([[0] * 4 for _ in range(4)])
    rep = bipartite_report(A, identity(4))
    assert rep.counts == (4,)
    assert rep.deficits == (0,)
    assert rep.total_deficit == 0


def test_hamming_examples():
    n = 5
    assert hamming_distance(identity(n), from_cycles(n, [0, 1])) == 2
    a = from_cycles(n, [0, 1, 2])
    b = from_cycles(n, [0, 2, 1])
    assert hamming_distance(a, b) == 3
    assert sim(a, b)
    assert not sim(identity(4), from_cycles(4, [0, 1], [2, 3]))


def test_hamming_length_mismatch():
    with pytest.raises(DimensionMismatch):
        hamming_distance((0, 1), (0, 1, 2))


@given(perms(), st.data())
def test_hamming_is_a_metric_never_one(p, data):
    n = len(p)
    q = tuple(data.draw(st.permutations(range(n))))
    r = tuple(data.draw(st.permutations(range(n))))
    assert hamming_distance(p, p) == 0
    assert hamming_distance(p, q) == hamming_distance(q, p)
    assert hamming_distance(p, q) != 1
    assert hamming_distance(p, r) <= hamming_distance(p, q) + hamming_distance(q, r)


@given(perms())
def test_inverse_and_compose(p):
    assert compose(p, inverse(p)) == identity(len(p))
    assert compose(inverse(p), p) == identity(len(p))


def test_check_perm_rejects():
    with pytest.raises(InvalidSolution):
        check_perm([0, 0, 1])
    with pytest.raises(DimensionMismatch):
        check_perm([0, 1], 3)


@given(color_rows(m=2, max_n=5), st.data())
def test_bipartite_deficits_sum_to_zero(rows, data):
    A = color_matrix(rows, 2, allow_empty=True)
    p = tuple(data.draw(st.permutations(range(A.n))))
    rep = bipartite_report(A, p)
    assert sum(rep.counts) == A.n
    assert sum(rep.deficits) == 0


def test_invalid_instances():
    with pytest.raises(InvalidInstance):
        path([])
    with pytest.raises(InvalidInstance):
        path([0, 2])  # class 1 empty
    with pytest.raises(InvalidInstance):
        color_matrix([[0, 1], [1]])
    with pytest.raises(InvalidInstance):
        ColorMatrix(((0, 0), (0, 0)), 2)
    with pytest.raises(InvalidInstance):
        ColorMatrix(((0, 3), (0, 0)), 2)
    with pytest.raises(InvalidInstance):
        instance_from_json({"foo": 1})
    with pytest.raises(InvalidInstance):
        instance_from_json({"kind": "path", "n": 3, "classes": [1, 1]})


def test_subset_matrix_allows_empty():
    A = subset_matrix([[0, 0], [0, 0]])
    assert A.sizes == (0, 4)


@given(surjective_labels(max_n=12))
def test_interval_json_round_trip(labels):
    for inst in (path(labels), cycle(labels), power_cycle(labels, 4)):
        blob = json.loads(json.dumps(instance_to_json(inst)))
        assert instance_from_json(blob) == inst
        assert instance_from_json({"instance": blob}) == inst


@given(color_rows(max_n=5))
def test_matrix_json_round_trip(rows):
    A = color_matrix(rows, 3)
    blob = json.loads(json.dumps(instance_to_json(A)))
    assert instance_from_json(blob) == A
    assert min(min(r) for r in blob["colors"]) >= 1


@given(perms())
def test_perm_json_round_trip(p):
    assert perm_from_json(perm_to_json(p), len(p)) == p


def test_report_json_uses_strings_for_fractions(p4):
    blob = fairness_report(p4, [0, 2]).to_json()
    assert blob["total_deficit"] == "1/2"
    assert blob["deficits"] == ["1/2", 0]
    assert isinstance(fairness_report(color_matrix([[0, 1], [1, 0]]), (0, 1)), FairnessReport)


def test_fairness_report_type_error():
    with pytest.raises(TypeError):
        fairness_report("nope", [])


def test_kind_values():
    assert Kind("power_cycle") is Kind.POWER_CYCLE
    assert path([0]).kind is Kind.PATH
