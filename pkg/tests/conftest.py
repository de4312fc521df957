from __future__ import annotations

import pytest

from concplan.bench.generators import tablemover_example
from concplan.compiler import CompileOptions, compile_map
from concplan.grounding import ground
from concplan.model import (
    ActionId,
    Atom,
    AtomicAction,
    ConditionalEffect,
    LiteralSet,
    MapProblem,
    State,
    neg,
    pos,
)
from concplan.pddl.parser import parse_domain, parse_problem
from concplan.pddl.plans import parse_concurrent_plan

SIX_STEP_PLAN = """\
(to-table a1 r1 s2)(pickup-floor a2 b1 r1)
(putdown-table a2 b1 r1)
(to-table a2 r1 s1)
(lift-side a1 s2)(lift-side a2 s1)
(move-table a1 r1 r2 s2)(move-table a2 r1 r2 s1)
(lower-side a1 s2)
"""

FIRST_SEGMENT = """\
(select-phase )
(select-to-table a1 r1 s2)
(select-pickup-floor a2 b1 r1)
(apply-phase )
(do-pickup-floor a2 b1 r1)
(do-to-table a1 r1 s2)
(reset-phase )
(end-to-table a1 r1 s2)
(end-pickup-floor a2 b1 r1)
(finish )
"""

F, G = Atom("f"), Atom("g")
A1, A2 = ActionId("a1", (), "ag1"), ActionId("a2", (), "ag1")
A3, A4 = ActionId("a3", (), "ag2"), ActionId("a4", (), "ag2")


def small_example(init=frozenset(), goal=()) -> MapProblem:
    """Two agents, A1={a1,a2}, A2={a3,a4}; pre(a1)={not a4}, a1: {not a3} |> {f}, a3: {} |> {g}."""
    empty = LiteralSet()
    acts = {
        "ag1": (
            AtomicAction(A1, LiteralSet([neg(A4)]), (ConditionalEffect(LiteralSet([neg(A3)]), LiteralSet([pos(F)])),)),
            AtomicAction(A2, empty),
        ),
        "ag2": (
            AtomicAction(A3, empty, (ConditionalEffect(empty, LiteralSet([pos(G)])),)),
            AtomicAction(A4, empty),
        ),
    }
    fl = frozenset({F, G})
    return MapProblem(("ag1", "ag2"), fl, acts, State(frozenset(init), fl), LiteralSet(goal), "small")


@pytest.fixture
def small():
    return small_example()


@pytest.fixture(scope="session")
def tm_text():
    return tablemover_example()


@pytest.fixture(scope="session")
def tm(tm_text):
    d, p = tm_text
    dom = parse_domain(d, "tablemover")
    problem, report = ground(dom, parse_problem(p, dom, "tm"))
    return problem


@pytest.fixture(scope="session")
def tm_plan(tm):
    return parse_concurrent_plan(SIX_STEP_PLAN, tm)


@pytest.fixture(scope="session")
def tm_base(tm):
    return compile_map(tm, CompileOptions())


@pytest.fixture(scope="session")
def tm_negsel(tm):
    return compile_map(tm, CompileOptions(neg_in_select=True))


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
