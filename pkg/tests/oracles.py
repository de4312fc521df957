"""Independent reference implementations used as test oracles."""

from __future__ import annotations

from collections import deque

from concplan import classical
from concplan.grounding import ground_classical
from concplan.model import IllDefinedError
from concplan.pddl.parser import parse_domain, parse_problem


def bfs_shortest(cp) -> int | None:
    """Shortest plan length by breadth-first search over frozensets, None if unsolvable."""
    start = frozenset(cp.init)
    if classical.goal_holds(start, cp.goal):
        return 0
    dist = {start: 0}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for act in cp.actions:
            if not classical.applicable(s, act):
                continue
            try:
                t = classical.apply(s, act)
            except IllDefinedError:
                continue
            if t in dist:
                continue
            dist[t] = dist[s] + 1
            if classical.goal_holds(t, cp.goal):
                return dist[t]
            queue.append(t)
    return None


def reachable(cp) -> int:
    start = frozenset(cp.init)
    seen = {start}
    queue = deque([start])
    while queue:
        s = queue.popleft()
        for act in cp.actions:
            if classical.applicable(s, act):
                try:
                    t = classical.apply(s, act)
                except IllDefinedError:
                    continue
                if t not in seen:
                    seen.add(t)
                    queue.append(t)
    return len(seen)


def _load(domain: str, problem: str):
    dom = parse_domain(domain)
    return ground_classical(dom, parse_problem(problem, dom))


# Five tiny classical problems; shortest lengths are known by hand and
# re-derived by bfs_shortest in the tests.

_CHAIN = """(define (domain chain) (:requirements :strips)
  (:predicates (p0) (p1) (p2) (p3))
  (:action s01 :parameters () :precondition (p0) :effect (and (p1) (not (p0))))
  (:action s12 :parameters () :precondition (p1) :effect (and (p2) (not (p1))))
  (:action s23 :parameters () :precondition (p2) :effect (and (p3) (not (p2)))))"""

_GRID = """(define (domain grid) (:requirements :typing)
  (:types cell)
  (:predicates (at ?c - cell) (adj ?a ?b - cell))
  (:action step :parameters (?a ?b - cell) :precondition (and (at ?a) (adj ?a ?b))
   :effect (and (not (at ?a)) (at ?b))))"""

_SWITCH = """(define (domain switch) (:requirements :negative-preconditions :conditional-effects)
  (:predicates (on) (armed) (done))
  (:action arm :parameters () :precondition (not (armed)) :effect (armed))
  (:action toggle :parameters () :precondition ()
   :effect (and (when (on) (not (on))) (when (not (on)) (on))))
  (:action fire :parameters () :precondition (and (armed) (on))
   :effect (and (done) (not (armed)))))"""

_TRAP = """(define (domain trap) (:requirements :negative-preconditions)
  (:predicates (free) (stuck) (goal))
  (:action fall :parameters () :precondition (free) :effect (and (stuck) (not (free))))
  (:action climb :parameters () :precondition (and (stuck) (not (stuck))) :effect (goal)))"""

TINY = {
    "chain": (_CHAIN, "(define (problem c) (:domain chain) (:init (p0)) (:goal (p3)))", 3),
    "grid": (
        _GRID,
        """(define (problem g) (:domain grid)
  (:objects c1 c2 c3 c4 - cell)
  (:init (at c1) (adj c1 c2) (adj c2 c1) (adj c2 c3) (adj c3 c2) (adj c3 c4) (adj c1 c4))
  (:goal (and (at c3))))""",
        2,
    ),
    "switch": (_SWITCH, "(define (problem s) (:domain switch) (:init) (:goal (and (done) (not (on)))))", 4),
    "trap": (_TRAP, "(define (problem t) (:domain trap) (:init (free)) (:goal (goal)))", None),
    "already": (_CHAIN, "(define (problem a) (:domain chain) (:init (p3)) (:goal (and (p3) (not (p0)))))", 0),
}


def tiny(name: str):
    d, p, length = TINY[name]
    return _load(d, p), length
