import pytest

from explaincp.constraints import NeqConst
from explaincp.errors import InputError, StateError
from explaincp.hierarchy import BoxSpec, Cut, RelaxPolicy, build_hierarchy
from explaincp.oracle import is_infeasible
from explaincp.problem import Problem
from explaincp.session import Conflict, Idle, Refused, Restored, Session, Solved, start_session
from explaincp.store import VariableDecl


def make_problem(variables, hierarchy, views):
    tree, ordered = build_hierarchy(hierarchy)
    return Problem(
        name="synthetic",
        variables=variables,
        tree=tree,
        constraints={c.id: c for c in ordered},
        views={name: Cut(name=name, boxes=frozenset(codes)) for name, codes in views.items()},
    )


def test_start_session_is_idle(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    assert isinstance(session.status, Idle)
    assert session.relaxed == {}


def test_start_session_rejects_unknown_views_and_bad_cuts(conference):
    with pytest.raises(InputError):
        start_session(conference, "nobody", RelaxPolicy.ALL)
    bad = Cut(name="bad", boxes=frozenset({"N4D"}))
    with pytest.raises(InputError):
        Session(conference.fresh_solver(), conference.tree, bad, RelaxPolicy.ALL)


def test_run_projects_the_conflict_onto_the_view(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    status = session.run()
    assert isinstance(status, Conflict)
    codes = [item.code for item in status.items]
    assert codes == ["IC", "PAB", "N4D", "NPA"]
    assert [item.index for item in status.items] == [1, 2, 3, 4]
    # the raw explanation expands to an infeasible constraint set
    members = [conference.constraints[cid] for cid in status.explanation]
    assert is_infeasible(conference.variables, members)


def test_run_without_constraints_is_solved():
    problem = make_problem(
        [VariableDecl("x", 1, 2)],
        BoxSpec(code="root", label="all"),
        {"default": ["root"]},
    )
    session = start_session(problem, "default", RelaxPolicy.ALL)
    assert isinstance(session.run(), Solved)


def test_relax_requires_a_conflict(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    with pytest.raises(StateError):
        session.relax(1)


def test_relax_zero_declines(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    before = session.run()
    outcome = session.relax(0)
    assert outcome.removed == ()
    assert session.status is before


def test_relax_out_of_range_raises(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    session.run()
    with pytest.raises(InputError):
        session.relax(99)


def test_relax_all_retracts_the_whole_box_and_ledgers_it(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    status = session.run()
    pab = next(i.index for i in status.items if i.code == "PAB")
    outcome = session.relax(pab)
    assert outcome.removed == ("c6", "c7", "c8", "c9")
    assert session.relaxed == {"PAB": ["c6", "c7", "c8", "c9"]}
    assert isinstance(session.status, Conflict)
    codes = [item.code for item in session.status.items]
    assert codes == ["IC", "N4D", "NPA"]
    members = [conference.constraints[cid] for cid in session.status.explanation]
    assert is_infeasible(conference.variables, members)


def test_relax_in_explanation_skips_uncited_constraints(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.IN_EXPLANATION)
    status = session.run()
    cited_pab = {c for c in status.explanation if c in {"c6", "c7", "c8", "c9"}}
    pab = next(i.index for i in status.items if i.code == "PAB")
    outcome = session.relax(pab)
    assert set(outcome.removed) == cited_pab


def test_example4_negotiation_path(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    status = session.run()
    pab = next(i.index for i in status.items if i.code == "PAB")
    assert isinstance(session.relax(pab, RelaxPolicy.ALL).status, Conflict)
    status = session.status
    n4d = next(i.index for i in status.items if i.code == "N4D")
    outcome = session.relax(n4d, RelaxPolicy.IN_EXPLANATION)
    assert isinstance(outcome.status, Solved)
    active = [c for c in session.solver.active_constraints() if not c.is_decision]
    assert all(c.evaluate(outcome.status.assignment) for c in active)
    # restoring PAB re-posts it cleanly (N4D was relaxed entirely)
    restore = session.restore("PAB")
    assert isinstance(restore, Restored)
    assert isinstance(session.status, Solved)
    active = [c for c in session.solver.active_constraints() if not c.is_decision]
    assert all(c.evaluate(session.status.assignment) for c in active)
    assert "PAB" not in session.relaxed


def test_restore_requires_a_relaxed_box(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    session.run()
    with pytest.raises(StateError):
        session.restore("PAB")


def two_box_problem():
    # x has two values; each box forbids one of them
    return make_problem(
        [VariableDecl("x", 1, 2)],
        BoxSpec(
            code="root",
            label="all",
            children=[
                BoxSpec(code="A", label="no one", constraints=[NeqConst(id="a1", x="x", k=1)]),
                BoxSpec(code="B", label="no two", constraints=[NeqConst(id="b1", x="x", k=2)]),
            ],
        ),
        {"default": ["A", "B"]},
    )


def test_restore_refused_when_only_fresh_boxes_conflict():
    problem = two_box_problem()
    session = start_session(problem, "default", RelaxPolicy.ALL)
    status = session.run()
    assert isinstance(status, Conflict)
    a_index = next(i.index for i in status.items if i.code == "A")
    assert isinstance(session.relax(a_index).status, Solved)
    pre_domains = session.solver.domains()
    pre_active = set(session.solver.active)
    outcome = session.restore("A")
    assert isinstance(outcome, Refused)
    assert outcome.conflict == ("A", "B")
    # fully rolled back
    assert session.relaxed == {"A": ["a1"]}
    assert session.solver.domains() == pre_domains
    assert set(session.solver.active) == pre_active
    assert isinstance(session.status, Solved)


def test_restore_concedes_constraints_of_other_relaxed_boxes():
    # P forbids x=1; Q forbids x=2 and y=1; R forbids y=2.  Relaxing Q
    # in-explanation retracts only q1, relaxing R solves; restoring R then
    # forces q2 (owned by still-relaxed Q) out.
    problem = make_problem(
        [VariableDecl("x", 1, 2), VariableDecl("y", 1, 2)],
        BoxSpec(
            code="root",
            label="all",
            children=[
                BoxSpec(code="P", label="p", constraints=[NeqConst(id="p1", x="x", k=1)]),
                BoxSpec(
                    code="Q",
                    label="q",
                    constraints=[
                        NeqConst(id="q1", x="x", k=2),
                        NeqConst(id="q2", x="y", k=1),
                    ],
                ),
                BoxSpec(code="R", label="r", constraints=[NeqConst(id="r1", x="y", k=2)]),
            ],
        ),
        {"default": ["P", "Q", "R"]},
    )
    session = start_session(problem, "default", RelaxPolicy.IN_EXPLANATION)
    status = session.run()
    q_index = next(i.index for i in status.items if i.code == "Q")
    session.relax(q_index)
    assert session.relaxed == {"Q": ["q1"]}
    status = session.status
    assert isinstance(status, Conflict)
    r_index = next(i.index for i in status.items if i.code == "R")
    assert isinstance(session.relax(r_index).status, Solved)

    outcome = session.restore("R")
    assert isinstance(outcome, Restored)
    assert outcome.extra == {"Q": ("q2",)}
    assert session.relaxed == {"Q": ["q1", "q2"]}
    assert isinstance(session.status, Solved)
    assert session.status.assignment == {"x": 2, "y": 1}


def test_relax_then_restore_round_trips_the_active_set(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    status = session.run()
    original_active = {
        cid for cid in session.solver.active if not session.solver.constraints[cid].is_decision
    }
    n4d = next(i.index for i in status.items if i.code == "N4D")
    session.relax(n4d)
    outcome = session.restore("N4D")
    assert isinstance(outcome, Restored)
    assert session.relaxed == {}
    restored_active = {
        cid for cid in session.solver.active if not session.solver.constraints[cid].is_decision
    }
    assert restored_active == original_active
    # the full problem is over-constrained again
    assert isinstance(session.status, Conflict)
    members = [conference.constraints[cid] for cid in session.status.explanation]
    assert is_infeasible(conference.variables, members)


def test_ledger_and_active_sets_partition_the_problem(conference):
    session = start_session(conference, "michael-code", RelaxPolicy.ALL)
    status = session.run()
    session.relax(next(i.index for i in status.items if i.code == "PAB"))
    ledgered = {cid for ids in session.relaxed.values() for cid in ids}
    active_problem = {
        cid for cid in session.solver.active if not session.solver.constraints[cid].is_decision
    }
    assert ledgered | active_problem == set(conference.constraints)
    assert ledgered & active_problem == set()
