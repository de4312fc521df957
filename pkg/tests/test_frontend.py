from __future__ import annotations

import pytest

from concplan.classical import canonical_form
from concplan.grounding import ground_classical
from concplan.model import ActionId
from concplan.pddl.ast import And, Forall, Not, When
from concplan.pddl.parser import parse_domain, parse_problem
from concplan.pddl.plans import PlanFormatError, parse_plan, parse_plan_refs
from concplan.pddl.sexpr import ArityError, NameClashError, PddlError, PddlSyntaxError, UndeclaredNameError
from concplan.pddl.writer import Sidecar, emit_classical_pddl, relabel, sidecar

from conftest import FIRST_SEGMENT

LIFT_SIDE = """\
(define (domain lift)
  (:requirements :typing :multi-agent)
  (:types agent side block room - object)
  (:constants Table - object)
  (:predicates (down ?s - side) (up ?s - side) (handempty ?a - agent)
               (lifting ?a - agent ?s - side) (inroom ?x - object ?r - room)
               (on-table ?b - block) (on-floor ?b - block))
  (:action lower-side
   :agent ?a - agent
   :parameters (?s - side)
   :precondition (up ?s)
   :effect (down ?s))
  (:action lift-side
   :agent ?a - agent
   :parameters (?s - side)
   :precondition (and (down ?s) (handempty ?a)
                      (forall (?a2 - agent ?s2 - side) (not (lower-side ?a2 ?s2))))
   :effect (and (not (down ?s)) (lifting ?a ?s) (up ?s) (not (handempty ?a))
                (forall (?b - block ?r - room ?s2 - side)
                  (when (and (inroom Table ?r) (on-table ?b) (down ?s2)
                             (forall (?a2 - agent) (not (lift-side ?a2 ?s2))))
                        (and (on-floor ?b) (inroom ?b ?r) (not (on-table ?b))))))))
"""


def _walk(node):
    yield node
    for attr in ("parts", "body", "arg", "condition", "effect", "antecedent", "consequent"):
        child = getattr(node, attr, None)
        if isinstance(child, tuple):
            for c in child:
                yield from _walk(c)
        elif child is not None:
            yield from _walk(child)


def test_lift_side_schema_shape():
    dom = parse_domain(LIFT_SIDE)
    act = dom.actions["lift-side"]
    assert act.agent_param == ("?a", "agent")
    assert act.params == (("?s", "side"),)
    pre_nodes = list(_walk(act.precondition))
    foralls = [n for n in pre_nodes if isinstance(n, Forall)]
    assert len(foralls) == 1
    assert isinstance(foralls[0].body, Not) and foralls[0].body.arg.is_action
    whens = [n for n in _walk(act.effect) if isinstance(n, When)]
    assert len(whens) == 1
    inner = [n for n in _walk(whens[0].condition) if isinstance(n, Forall)]
    assert inner and isinstance(inner[0].body, Not) and inner[0].body.arg.is_action


def test_predicate_vs_action_atoms():
    dom = parse_domain(LIFT_SIDE)
    atoms = [n for n in _walk(dom.actions["lift-side"].precondition) if hasattr(n, "is_action")]
    kinds = {a.name: a.is_action for a in atoms}
    assert kinds == {"down": False, "handempty": False, "lower-side": True}


def test_every_node_has_span():
    dom = parse_domain(LIFT_SIDE)
    for act in dom.actions.values():
        for n in list(_walk(act.precondition)) + list(_walk(act.effect)):
            assert n.span.line >= 1


def test_empty_domain():
    dom = parse_domain("(define (domain d))")
    assert dom.name == "d"
    assert dom.actions == {}


def test_name_clash():
    text = LIFT_SIDE.replace("(on-floor ?b - block))", "(on-floor ?b - block) (lift-side ?a - agent ?s - side))")
    with pytest.raises(NameClashError):
        parse_domain(text)


def test_syntax_error_has_position():
    with pytest.raises(PddlSyntaxError) as ei:
        parse_domain("(define (domain d)\n  (:predicates (p)")
    assert ei.value.span is not None and ei.value.span.line >= 1
    assert ":" in str(ei.value)


def test_undeclared_predicate():
    text = LIFT_SIDE.replace(":precondition (up ?s)", ":precondition (nowhere ?s)")
    assert text != LIFT_SIDE
    with pytest.raises(UndeclaredNameError) as ei:
        parse_domain(text)
    assert ei.value.span is not None


def test_arity_mismatch():
    text = LIFT_SIDE.replace(":precondition (up ?s)", ":precondition (up ?s ?a)")
    with pytest.raises(ArityError):
        parse_domain(text)


def test_tablemover_example_problem(tm_text):
    d, p = tm_text
    dom = parse_domain(d)
    prob = parse_problem(p, dom)
    assert sorted(prob.agents) == ["a1", "a2"]
    assert prob.objects["b1"] == "block"


def test_empty_goal(tm_text):
    d, p = tm_text
    dom = parse_domain(d)
    text = p.replace("(:goal (and (inroom b1 r2) (not (dropped))))", "(:goal (and))")
    assert parse_problem(text, dom).goal == []


def test_init_undeclared_predicate(tm_text):
    d, p = tm_text
    dom = parse_domain(d)
    with pytest.raises(PddlError):
        parse_problem(p.replace("(down s1)", "(sideways s1)"), dom)


def test_unknown_object_in_goal(tm_text):
    d, p = tm_text
    dom = parse_domain(d)
    with pytest.raises(PddlError):
        parse_problem(p.replace("(inroom b1 r2)", "(inroom b9 r2)"), dom)


# emitted classical PDDL


def _reparse(cp):
    dom_text, prob_text = emit_classical_pddl(cp)
    dom = parse_domain(dom_text, "emitted-domain")
    again = ground_classical(dom, parse_problem(prob_text, dom, "emitted-problem"), prune_statics=False)
    return relabel(again, Sidecar(sidecar(cp)))


@pytest.mark.parametrize("which", ["tm_base", "tm_negsel"])
def test_emit_round_trip(which, request):
    cp = request.getfixturevalue(which)
    assert canonical_form(_reparse(cp)) == canonical_form(cp)


def test_parse_emit_parse_fixpoint(tm_base):
    once = _reparse(tm_base)
    twice = _reparse(once)
    assert canonical_form(once) == canonical_form(twice)


def test_emit_deterministic(tm_negsel):
    assert emit_classical_pddl(tm_negsel) == emit_classical_pddl(tm_negsel)


def test_emit_requirements(tm_negsel):
    dom_text, _ = emit_classical_pddl(tm_negsel)
    for req in (":typing", ":negative-preconditions", ":conditional-effects"):
        assert req in dom_text


def test_emit_empty_goal(small):
    from concplan.compiler import compile_map

    cp = compile_map(small)
    _, prob_text = emit_classical_pddl(cp)
    assert "(free)" in prob_text.split("(:goal", 1)[1]
    from concplan.classical import ClassicalProblem
    from concplan.model import LiteralSet

    bare = ClassicalProblem(cp.fluents, cp.actions, cp.init, LiteralSet(), cp.provenance)
    _, prob_text = emit_classical_pddl(bare)
    assert "(:goal (and ))" in prob_text


# plan files


def test_parse_first_segment_listing(tm_base):
    plan = parse_plan(FIRST_SEGMENT, tm_base)
    assert len(plan) == 10
    assert plan[0] == ActionId("select-phase")
    assert all(isinstance(a, ActionId) for a in plan)


def test_parse_plan_refs_listing():
    refs = parse_plan_refs(FIRST_SEGMENT)
    assert len(refs) == 10
    assert refs[4] == ("do-pickup-floor", ("a2", "b1", "r1"))


def test_parse_plan_empty():
    assert parse_plan("") == []
    assert parse_plan("; only a comment\n\n") == []


def test_parse_plan_unknown(tm_base):
    with pytest.raises(PlanFormatError) as ei:
        parse_plan("(do-fly a1 r1)\n", tm_base)
    assert ei.value.kind == "unknown-action"


def test_parse_plan_arity(tm_base):
    with pytest.raises(PlanFormatError) as ei:
        parse_plan("(do-pickup-floor a2 b1)\n", tm_base)
    assert ei.value.kind == "arity"


def test_parse_plan_mangled_names(tm_negsel):
    from concplan.pddl.writer import mangled_names

    side = Sidecar(sidecar(tm_negsel))
    names = mangled_names(tm_negsel)
    aid = ActionId("do-pickup-floor", ("a2", "b1", "r1"))
    text = f"({names[aid]})\n(select-phase )\n"
    assert parse_plan(text, tm_negsel, side) == [aid, ActionId("select-phase")]
