import json

import pytest

from explaincp.constraints import GeqPlus
from explaincp.errors import SchemaError
from explaincp.problem import (
    conference_problem,
    load_problem,
    serialize_problem,
)
from explaincp.solver import Solution

MINIMAL = {
    "name": "tiny",
    "variables": [{"name": "x", "lower": 1, "upper": 3}],
    "hierarchy": {"code": "root", "label": "everything"},
    "views": [{"name": "default", "cut": ["root"]}],
}


def test_bundled_conference_inventory():
    problem = conference_problem()
    assert len(problem.variables) == 4
    assert len(problem.constraints) == 14
    assert len(problem.tree.nodes) == 8
    assert len(problem.views) == 4
    assert [v.name for v in problem.variables] == ["Am", "Pm", "Ma", "Mp"]
    assert list(problem.constraints) == [f"c{i}" for i in range(1, 15)]


def test_minimal_problem_loads_and_solves():
    problem = load_problem(json.dumps(MINIMAL))
    outcome = problem.fresh_solver().solve()
    assert isinstance(outcome, Solution)
    assert outcome.assignment == {"x": 1}


def test_gt_is_sugar_for_geq_plus_one():
    problem = conference_problem()
    c6 = problem.constraints["c6"]
    assert isinstance(c6, GeqPlus)
    assert (c6.x, c6.y, c6.k) == ("Ma", "Am", 1)


def test_parse_error_is_a_schema_error():
    with pytest.raises(SchemaError):
        load_problem("{not json")


def test_schema_violation_carries_a_path():
    raw = dict(MINIMAL, variables=[{"name": "x", "lower": 1}])
    with pytest.raises(SchemaError) as exc:
        load_problem(json.dumps(raw))
    assert "variables" in str(exc.value)


def test_duplicate_constraint_id_is_named():
    raw = json.loads(json.dumps(MINIMAL))
    raw["hierarchy"]["constraints"] = [
        {"id": "dup", "kind": "neq_const", "args": ["x", 1]},
        {"id": "dup", "kind": "neq_const", "args": ["x", 2]},
    ]
    with pytest.raises(SchemaError) as exc:
        load_problem(json.dumps(raw))
    assert "dup" in str(exc.value)


def test_unknown_variable_in_constraint_args():
    raw = json.loads(json.dumps(MINIMAL))
    raw["hierarchy"]["constraints"] = [{"id": "c", "kind": "neq_const", "args": ["ghost", 1]}]
    with pytest.raises(SchemaError) as exc:
        load_problem(json.dumps(raw))
    assert "ghost" in str(exc.value)


def test_unary_constant_outside_domain_bounds():
    raw = json.loads(json.dumps(MINIMAL))
    raw["hierarchy"]["constraints"] = [{"id": "c", "kind": "eq_const", "args": ["x", 99]}]
    with pytest.raises(SchemaError) as exc:
        load_problem(json.dumps(raw))
    assert "99" in str(exc.value)


def test_invalid_cut_is_rejected_at_load():
    raw = json.loads(json.dumps(MINIMAL))
    raw["hierarchy"]["children"] = [
        {
            "code": "leaf",
            "label": "leaf",
            "constraints": [{"id": "c", "kind": "neq_const", "args": ["x", 1]}],
        }
    ]
    raw["views"] = [{"name": "bad", "cut": ["missing"]}]
    with pytest.raises(SchemaError):
        load_problem(json.dumps(raw))


def test_duplicate_box_code_rejected():
    raw = json.loads(json.dumps(MINIMAL))
    raw["hierarchy"]["children"] = [
        {"code": "root", "label": "again"},
    ]
    with pytest.raises(SchemaError) as exc:
        load_problem(json.dumps(raw))
    assert "root" in str(exc.value)


def test_serialization_round_trips():
    problem = conference_problem()
    clone = load_problem(serialize_problem(problem))
    assert clone.name == problem.name
    assert clone.variables == problem.variables
    assert list(clone.constraints) == list(problem.constraints)
    for cid, constraint in problem.constraints.items():
        other = clone.constraints[cid]
        assert type(other) is type(constraint)
        assert str(other) == str(constraint)
        assert other.owner_box == constraint.owner_box
    assert clone.tree.boxes() == problem.tree.boxes()
    assert {n: v.boxes for n, v in clone.views.items()} == {
        n: v.boxes for n, v in problem.views.items()
    }
    # gt sugar is normalized, so a second round trip is byte-identical
    assert serialize_problem(clone) == serialize_problem(problem)
