from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from concplan import classical
from concplan.classical import ClassicalAction
from concplan.model import (
    ActionId,
    Atom,
    ConcurrentPlan,
    IllDefinedError,
    JointAction,
    LiteralSet,
    PlanningError,
    State,
    encode_joint,
    pos,
)
from concplan.pddl.plans import parse_concurrent_plan
from concplan.semantics import (
    constraint_holds,
    joint_applicable,
    joint_effect,
    replay,
    step,
    validate_concurrent,
)

from conftest import A1, A2, A3, A4, F, G, SIX_STEP_PLAN, small_example


def _states():
    for bits in itertools.product((False, True), repeat=2):
        yield frozenset(a for a, b in zip((F, G), bits) if b)


def test_constraint_holds(small):
    universe = small.action_ids()
    a1, a3 = small.action(A1), small.action(A3)
    assert not constraint_holds(a1, encode_joint([A1, A4], universe))
    assert constraint_holds(a1, encode_joint([A1, A3], universe))
    for members in ([A3], [A1, A3], [A2, A4], [A3, A2]):
        assert constraint_holds(a3, encode_joint(members, universe))


@pytest.mark.parametrize("atoms", list(_states()), ids=str)
def test_small_example_all_states(atoms):
    p = small_example(atoms)
    s = p.init
    assert not joint_applicable(s, JointAction([A1, A4]), p)
    assert joint_applicable(s, JointAction([A1, A3]), p)
    assert joint_effect(s, JointAction([A1, A3]), p) == LiteralSet([pos(G)])
    assert joint_effect(s, JointAction([A1]), p) == LiteralSet([pos(F)])
    assert joint_effect(s, JointAction([A2]), p) == LiteralSet()
    assert step(s, JointAction([A2]), p) == s


def test_singleton_failing_precondition(tm):
    a = JointAction([ActionId("putdown-floor", ("b1", "r1"), "a1")])
    assert not joint_applicable(tm.init, a, tm)


def test_agent_duplication():
    with pytest.raises(PlanningError):
        JointAction([A1, A2])
    with pytest.raises(PlanningError):
        JointAction([])


def test_first_joint_step(tm):
    a = JointAction([ActionId("to-table", ("r1", "s2"), "a1"), ActionId("pickup-floor", ("b1", "r1"), "a2")])
    s = step(tm.init, a, tm)
    added = s.true_atoms - tm.init.true_atoms
    removed = tm.init.true_atoms - s.true_atoms
    assert added == {Atom("at-side", ("a1", "s2")), Atom("holding", ("a2", "b1"))}
    assert removed == {
        Atom("handempty", ("a2",)),
        Atom("on-floor", ("b1",)),
        Atom("inroom", ("b1", "r1")),
    }


def test_six_step_plan_valid(tm, tm_plan):
    report = validate_concurrent(tm, tm_plan)
    assert report.valid, report.to_text()
    assert [len(a) for a in tm_plan] == [2, 1, 1, 2, 2, 1]


def test_empty_plan_goal_in_init(small):
    assert validate_concurrent(small, ConcurrentPlan()).valid
    p = small_example(goal=[pos(F)])
    report = validate_concurrent(p, ConcurrentPlan())
    assert not report.valid and report.failure.reason == "goal-unsatisfied"


def test_single_lift_breaks_plan(tm):
    broken = SIX_STEP_PLAN.replace("(lift-side a1 s2)(lift-side a2 s1)", "(lift-side a1 s2)")
    report = validate_concurrent(tm, parse_concurrent_plan(broken, tm))
    assert not report.valid
    assert report.failure.step >= 3


def test_ill_defined_effect_reported():
    # two agents setting f to opposite values at once
    from concplan.model import AtomicAction, ConditionalEffect, MapProblem, neg

    x, y = ActionId("on", (), "i"), ActionId("off", (), "j")
    acts = {
        "i": (AtomicAction(x, LiteralSet(), (ConditionalEffect(LiteralSet(), LiteralSet([pos(F)])),)),),
        "j": (AtomicAction(y, LiteralSet(), (ConditionalEffect(LiteralSet(), LiteralSet([neg(F)])),)),),
    }
    p = MapProblem(("i", "j"), frozenset({F}), acts, State(frozenset(), frozenset({F})), LiteralSet())
    with pytest.raises(IllDefinedError):
        joint_effect(p.init, JointAction([x, y]), p)
    report = validate_concurrent(p, [JointAction([x, y])])
    assert report.failure.reason == "ill-defined-effect"


def test_report_formats(tm, tm_plan):
    report = validate_concurrent(tm, tm_plan)
    records = report.to_records()
    assert len(records) == len(tm_plan) + 1
    assert records[-1]["verdict"] == "valid"
    assert "VALID" in report.to_text()
    import json

    lines = [json.loads(line) for line in report.to_json().splitlines()]
    assert lines[-1]["failure"] is None


def test_replay_digests(tm, tm_plan):
    report = validate_concurrent(tm, tm_plan)
    states = replay(tm, tm_plan)
    assert [s.digest() for s in states[:-1]] == [r.state_digest for r in report.steps]
    assert states[-1].digest() == report.final_digest


@pytest.mark.parametrize("cut", range(7))
def test_truncation_monotone(tm, tm_plan, cut):
    report = validate_concurrent(tm, tm_plan.steps[:cut])
    assert report.valid or report.failure.reason == "goal-unsatisfied"


def test_member_order_irrelevant(tm, tm_plan):
    s = tm.init
    for a in tm_plan:
        members = a.ordered()
        e1 = joint_effect(s, JointAction(members), tm)
        e2 = joint_effect(s, JointAction(list(reversed(members))), tm)
        assert e1 == e2
        s = step(s, a, tm)


@settings(max_examples=200, deadline=None)
@given(data=st.data())
def test_singletons_match_classical(tm, data):
    # actions without action atoms in conditions: joint step equals classical theta
    plain = [a for a in tm.all_actions() if not any(l.is_action for ce in a.cond_effects for l in ce.condition)
             and not any(l.is_action and l.positive for l in a.precondition)]
    act = data.draw(st.sampled_from(plain))
    fluents = sorted(tm.fluents)
    atoms = frozenset(data.draw(st.sets(st.sampled_from(fluents))))
    s = State(atoms, tm.fluents)
    ca = ClassicalAction(
        act.id, LiteralSet(l for l in act.precondition if not l.is_action), act.cond_effects
    )
    ja = JointAction([act.id])
    try:
        ok = joint_applicable(s, ja, tm)
    except IllDefinedError:
        return
    assert ok == classical.applicable(atoms, ca)
    if ok:
        try:
            expect = classical.apply(atoms, ca)
        except IllDefinedError:
            with pytest.raises(IllDefinedError):
                step(s, ja, tm)
            return
        assert step(s, ja, tm).true_atoms == expect
