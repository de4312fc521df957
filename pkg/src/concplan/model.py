"""Symbolic core: atoms, literals, states, atomic/joint actions and problems.

Literal sets are frozensets of :class:`Literal`. A literal's ``atom`` is either
a fluent (:class:`Atom`) or an atomic action (:class:`ActionId`); the latter is
how concurrency constraints are written. States are closed-world: only the
true atoms are stored and every other atom of the universe is false.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, NamedTuple, Union


class PlanningError(Exception):
    """Base class for all errors raised by this package."""


class IllDefinedError(PlanningError):
    """A literal set assigns both polarities to the same atom."""

    def __init__(self, atom, kind: str = "literal-set", context: str = ""):
        self.atom = atom
        self.kind = kind
        self.context = context
        msg = f"ill-defined {kind}: conflicting values for {atom}"
        if context:
            msg += f" ({context})"
        super().__init__(msg)


class Atom(NamedTuple):
    """A ground fluent ``(predicate arg ...)``."""

    predicate: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        return "(" + " ".join((self.predicate, *self.args)) + ")"


class ActionId(NamedTuple):
    """A ground action.

    For atomic actions of a multiagent problem ``agent`` is the acting agent
    and ``args`` excludes it. Classical (compiled) actions have ``agent=None``.
    """

    schema: str
    args: tuple[str, ...] = ()
    agent: str | None = None

    @property
    def terms(self) -> tuple[str, ...]:
        if self.agent is None:
            return self.args
        return (self.agent, *self.args)

    def sort_key(self) -> tuple:
        return (self.agent or "", self.schema, self.args)

    def __str__(self) -> str:
        # Same layout as common planner output: "(name a b)" / "(name )".
        return f"({self.schema} {' '.join(self.terms)})"


Symbol = Union[Atom, ActionId]


class Literal(NamedTuple):
    atom: Symbol
    positive: bool = True

    @property
    def is_action(self) -> bool:
        return isinstance(self.atom, ActionId)

    def negate(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self) -> str:
        return str(self.atom) if self.positive else f"(not {self.atom})"


def pos(atom: Symbol) -> Literal:
    return Literal(atom, True)


def neg(atom: Symbol) -> Literal:
    return Literal(atom, False)


class LiteralSet(frozenset):
    """A well-defined set of literals (never contains both ``x`` and ``not x``).

    The same class serves for literal sets over fluents and over fluents and
    actions; :func:`project` separates the two parts.
    """

    def __new__(cls, literals: Iterable[Literal] = ()):
        self = super().__new__(cls, literals)
        seen: dict = {}
        for lit in self:
            other = seen.get(lit.atom)
            if other is not None and other != lit.positive:
                raise IllDefinedError(lit.atom)
            seen[lit.atom] = lit.positive
        return self

    def positives(self) -> frozenset:
        return frozenset(l.atom for l in self if l.positive)

    def negatives(self) -> frozenset:
        return frozenset(l.atom for l in self if not l.positive)

    def atoms(self) -> frozenset:
        return frozenset(l.atom for l in self)

    def union(self, *others: Iterable[Literal]) -> "LiteralSet":
        return LiteralSet(frozenset.union(self, *others))

    def sorted(self) -> list[Literal]:
        return sorted(self, key=literal_sort_key)

    def __repr__(self) -> str:
        return "{" + ", ".join(str(l) for l in self.sorted()) + "}"


ExtLiteralSet = LiteralSet


def literal_sort_key(lit: Literal) -> tuple:
    a = lit.atom
    if isinstance(a, ActionId):
        return (1, a.sort_key(), not lit.positive)
    return (0, (a.predicate, a.args), not lit.positive)


def complement(L: Iterable[Literal]) -> LiteralSet:
    return LiteralSet(l.negate() for l in L)


def project(L: Iterable[Literal], part: str) -> LiteralSet:
    """Keep only the fluent part (``"F"``) or the action part (``"A"``)."""
    if part == "F":
        return LiteralSet(l for l in L if not l.is_action)
    if part == "A":
        return LiteralSet(l for l in L if l.is_action)
    raise ValueError(f"unknown part {part!r}; expected 'F' or 'A'")


def encode_joint(members: Iterable[ActionId], all_actions: Iterable[ActionId]) -> LiteralSet:
    """Total literal set over ``all_actions`` encoding which ones are in the joint action."""
    members = frozenset(members)
    universe = frozenset(all_actions)
    missing = members - universe
    if missing:
        raise PlanningError(f"joint action members not in the action set: {sorted(map(str, missing))}")
    return LiteralSet(Literal(a, a in members) for a in universe)


@dataclass(frozen=True)
class State:
    """Total assignment over ``universe``; atoms outside ``true_atoms`` are false."""

    true_atoms: frozenset
    universe: frozenset = field(repr=False, compare=False)

    def __post_init__(self):
        extra = self.true_atoms - self.universe
        if extra:
            raise PlanningError(f"state atoms outside the fluent set: {sorted(map(str, extra))}")

    def holds(self, lit: Literal) -> bool:
        return (lit.atom in self.true_atoms) == lit.positive

    def satisfies(self, L: Iterable[Literal]) -> bool:
        t = self.true_atoms
        return all((l.atom in t) == l.positive for l in L)

    def digest(self) -> str:
        return state_digest(self.true_atoms)

    def __contains__(self, atom) -> bool:
        return atom in self.true_atoms

    def __len__(self) -> int:
        return len(self.true_atoms)

    def __iter__(self) -> Iterator[Atom]:
        return iter(self.true_atoms)


def state_digest(atoms: Iterable[Atom]) -> str:
    # Order-independent: hash the sorted rendering.
    h = hashlib.blake2b(digest_size=8)
    for a in sorted(atoms):
        h.update(str(a).encode())
        h.update(b"\0")
    return h.hexdigest()


def apply_effect(s: State, E: Iterable[Literal]) -> State:
    """theta(s, E): make positive literals of E true and negative ones false."""
    E = LiteralSet(E)
    adds = E.positives()
    dels = E.negatives()
    outside = (adds | dels) - s.universe
    if outside:
        raise PlanningError(f"effect mentions atoms outside the fluent set: {sorted(map(str, outside))}")
    return State((s.true_atoms - dels) | adds, s.universe)


@dataclass(frozen=True)
class ConditionalEffect:
    """``condition |> effect``; the effect only mentions fluents."""

    condition: LiteralSet
    effect: LiteralSet

    def __post_init__(self):
        for lit in self.effect:
            if lit.is_action:
                raise PlanningError(f"effects may only mention fluents, got {lit}")

    def __str__(self) -> str:
        return f"{self.condition!r} |> {self.effect!r}"


@dataclass(frozen=True)
class AtomicAction:
    id: ActionId
    precondition: LiteralSet
    cond_effects: tuple[ConditionalEffect, ...] = ()

    @property
    def agent(self) -> str:
        return self.id.agent

    def __str__(self) -> str:
        return str(self.id)


class JointAction(frozenset):
    """Nonempty set of atomic action ids, at most one per agent."""

    def __new__(cls, members: Iterable[ActionId]):
        self = super().__new__(cls, members)
        if not self:
            raise PlanningError("a joint action must contain at least one atomic action")
        agents: dict[str, ActionId] = {}
        for m in self:
            if m.agent is None:
                raise PlanningError(f"{m} is not an agent action")
            if m.agent in agents:
                raise PlanningError(
                    f"agent {m.agent} contributes two actions: {agents[m.agent]} and {m}"
                )
            agents[m.agent] = m
        return self

    def ordered(self) -> list[ActionId]:
        return sorted(self, key=ActionId.sort_key)

    def __str__(self) -> str:
        return "".join(str(m) for m in self.ordered())

    def __repr__(self) -> str:
        return f"JointAction({self})"


@dataclass(frozen=True)
class MapProblem:
    """Multiagent problem <N, F, {A^i}, I, G>."""

    agents: tuple[str, ...]
    fluents: frozenset
    actions: Mapping[str, tuple[AtomicAction, ...]]
    init: State
    goal: LiteralSet
    name: str = "map"
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        index = self._index
        for agent in self.agents:
            for act in self.actions.get(agent, ()):
                if act.id.agent != agent:
                    raise PlanningError(f"{act.id} listed under agent {agent}")
                if act.id in index:
                    raise PlanningError(f"duplicate action {act.id}")
                index[act.id] = act
        unknown = set(self.actions) - set(self.agents)
        if unknown:
            raise PlanningError(f"actions for undeclared agents: {sorted(unknown)}")
        stray = self.goal.atoms() - self.fluents
        if stray:
            raise PlanningError(f"goal atoms outside F: {sorted(map(str, stray))}")
        if self.init.universe != self.fluents:
            raise PlanningError("initial state universe differs from F")

    def action(self, aid: ActionId) -> AtomicAction:
        try:
            return self._index[aid]
        except KeyError:
            raise PlanningError(f"unknown action {aid}") from None

    def has_action(self, aid: ActionId) -> bool:
        return aid in self._index

    def all_actions(self) -> list[AtomicAction]:
        return [a for agent in self.agents for a in self.actions.get(agent, ())]

    def action_ids(self) -> frozenset:
        return frozenset(self._index)

    def n_actions(self) -> int:
        return len(self._index)

    def lookup(self, name: str, terms: Iterable[str]) -> ActionId:
        """Resolve ``(name agent arg ...)`` as written in plan files."""
        terms = tuple(terms)
        if not terms:
            raise PlanningError(f"({name}) has no agent argument")
        aid = ActionId(name, terms[1:], terms[0])
        if aid not in self._index:
            raise PlanningError(f"unknown action {aid}")
        return aid


@dataclass(frozen=True)
class ConcurrentPlan:
    steps: tuple[JointAction, ...] = ()

    def __len__(self) -> int:
        return len(self.steps)

    def __iter__(self) -> Iterator[JointAction]:
        return iter(self.steps)

    def __getitem__(self, i):
        return self.steps[i]

    @property
    def makespan(self) -> int:
        return len(self.steps)

    def n_atomic(self) -> int:
        return sum(len(s) for s in self.steps)

    def __str__(self) -> str:
        return "\n".join(str(s) for s in self.steps)
