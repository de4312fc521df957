from __future__ import annotations

import itertools

import pytest

from concplan.bench.generators import desk_suite, generate
from concplan.classical import ClassicalProblem
from concplan.compiler import compile_map
from concplan.grounding import GroundingError, ground, ground_classical
from concplan.model import ActionId, Atom
from concplan.pddl.parser import parse_domain, parse_problem
from concplan.search import SearchConfig, solve


def _ground(d, p, **kw):
    dom = parse_domain(d)
    return ground(dom, parse_problem(p, dom), **kw)


def test_lift_side_expansion(tm):
    act = tm.action(ActionId("lift-side", ("s1",), "a1"))
    neg_actions = sorted(str(l.atom) for l in act.precondition if l.is_action and not l.positive)
    assert neg_actions == [f"(lower-side {a} {s})" for a in ("a1", "a2") for s in ("s1", "s2")]
    # one conditional effect per (block, room, side) binding; 1 block x 2 rooms x 2 sides
    tipping = [ce for ce in act.cond_effects if ce.condition]
    assert len(tipping) == 4
    by_side = {}
    for ce in tipping:
        acts = [l for l in ce.condition if l.is_action]
        assert len(acts) == 2 and all(not l.positive for l in acts)
        sides = {l.atom.args[0] for l in acts}
        assert len(sides) == 1
        by_side.setdefault(sides.pop(), []).append(ce)
    assert sorted(by_side) == ["s1", "s2"]


def test_tablemover_example_counts(tm):
    assert len(tm.fluents) == 27
    assert {a: len(v) for a, v in tm.actions.items()} == {"a1": 24, "a2": 24}


def test_deterministic(tm_text):
    p1, r1 = _ground(*tm_text)
    p2, r2 = _ground(*tm_text)
    assert p1 == p2
    assert [a.id for a in p1.all_actions()] == [a.id for a in p2.all_actions()]
    assert r1.n_fluents == r2.n_fluents and r1.actions_per_agent == r2.actions_per_agent


def test_report_sums(tm_text):
    problem, report = _ground(*tm_text)
    assert report.n_actions == problem.n_actions() == sum(report.actions_per_agent.values())
    assert report.n_fluents == len(problem.fluents)
    assert report.pruned_by_statics >= 0


NO_OBJECTS = """\
(define (domain d)
  (:requirements :typing :multi-agent)
  (:types agent gadget - object)
  (:predicates (on ?g - gadget) (ready ?a - agent))
  (:action flip
   :agent ?a - agent
   :parameters (?g - gadget)
   :precondition (ready ?a)
   :effect (on ?g)))
"""


def test_schema_without_objects():
    prob = "(define (problem p) (:domain d) (:objects x - agent) (:init (ready x)) (:goal (and)))"
    problem, report = _ground(NO_OBJECTS, prob)
    assert problem.n_actions() == 0
    assert report.actions_per_agent == {"x": 0}


def test_unresolvable_action_atom():
    text = NO_OBJECTS.replace(":precondition (ready ?a)", ":precondition (and (ready ?a) (flip ?a ?a))")
    prob = "(define (problem p) (:domain d) (:objects x - agent g - gadget) (:init (ready x)) (:goal (and)))"
    with pytest.raises(GroundingError, match="matches no ground action"):
        _ground(text, prob)


CLASSICAL = """\
(define (domain c)
  (:requirements :strips :conditional-effects)
  (:predicates (p) (q) (r))
  (:action go
   :parameters ()
   :precondition (p)
   :effect (and (q) (when (q) (r)))))
"""


def test_classical_one_conditional_effect():
    dom = parse_domain(CLASSICAL)
    cp = ground_classical(dom, parse_problem("(define (problem x) (:domain c) (:init (p)) (:goal (r)))", dom))
    (act,) = cp.actions
    conditional = [ce for ce in act.cond_effects if ce.condition]
    assert len(conditional) == 1
    assert str(next(iter(conditional[0].effect))) == "(r)"


@pytest.mark.parametrize("goal,solvable", [("(and (p))", True), ("(and (q))", False), ("(and)", True)])
def test_empty_action_domain(goal, solvable):
    d = "(define (domain e) (:predicates (p) (q)))"
    dom = parse_domain(d)
    cp = ground_classical(dom, parse_problem(f"(define (problem x) (:domain e) (:init (p)) (:goal {goal}))", dom))
    assert isinstance(cp, ClassicalProblem) and not cp.actions
    assert solve(cp).solved is solvable


def _has_var(sym) -> bool:
    parts = (sym.predicate, *sym.args) if isinstance(sym, Atom) else (sym.schema, *sym.terms)
    return any(p.startswith("?") for p in parts)


@pytest.mark.parametrize("spec", desk_suite(), ids=lambda s: s.label)
def test_no_variables_after_grounding(spec):
    problem, _ = _ground(*generate(spec))
    for act in problem.all_actions():
        assert not _has_var(act.id)
        lits = list(act.precondition)
        for ce in act.cond_effects:
            lits += list(ce.condition) + list(ce.effect)
        assert not any(_has_var(l.atom) for l in lits)


def test_forall_exhaustive(tm_text):
    # recompute the (agent, side) bindings independently and compare
    problem, _ = _ground(*tm_text)
    agents, sides = ("a1", "a2"), ("s1", "s2")
    for a, s in itertools.product(agents, sides):
        act = problem.action(ActionId("lift-side", (s,), a))
        got = {l.atom for l in act.precondition if l.is_action}
        want = {ActionId("lower-side", (s2,), a2) for a2, s2 in itertools.product(agents, sides)}
        assert got == want


SMALL_SPECS = [s for s in desk_suite() if s.agents == 2][:5]


@pytest.mark.parametrize("spec", SMALL_SPECS, ids=lambda s: s.label)
def test_static_pruning_keeps_solvability(spec):
    d, p = generate(spec)
    verdicts = []
    for prune in (True, False):
        problem, _ = _ground(d, p, prune_statics=prune)
        verdicts.append(solve(compile_map(problem), SearchConfig(timeout=60)).status)
    assert verdicts[0] == verdicts[1]
