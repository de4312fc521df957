"""Grounded classical problems with conditional effects and their transition function."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .model import (
    ActionId,
    Atom,
    ConditionalEffect,
    IllDefinedError,
    LiteralSet,
    PlanningError,
)


@dataclass(frozen=True)
class Provenance:
    """Where a classical action came from.

    kind is one of ``phase``, ``select``, ``do``, ``end``, ``joint`` (naive
    compilation) or ``plain`` (parsed from a classical domain).
    """

    kind: str
    source: ActionId | None = None
    counter: int | None = None
    members: tuple[ActionId, ...] = ()


@dataclass(frozen=True)
class ClassicalAction:
    name: ActionId
    precondition: LiteralSet
    cond_effects: tuple[ConditionalEffect, ...] = ()

    def __str__(self) -> str:
        return str(self.name)


@dataclass(frozen=True)
class ClassicalProblem:
    fluents: tuple[Atom, ...]
    actions: tuple[ClassicalAction, ...]
    init: frozenset
    goal: LiteralSet
    provenance: Mapping[ActionId, Provenance] = field(default_factory=dict)
    name: str = "classical"
    # Counter fluents count-0..count-C in order, when the compilation is bounded.
    counters: tuple[Atom, ...] = ()
    _index: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        for act in self.actions:
            if act.name in self._index:
                raise PlanningError(f"duplicate classical action {act.name}")
            self._index[act.name] = act
        fl = frozenset(self.fluents)
        if len(fl) != len(self.fluents):
            raise PlanningError("duplicate fluents")
        if not self.init <= fl:
            raise PlanningError(f"init atoms outside F': {sorted(map(str, self.init - fl))[:5]}")
        if not self.goal.atoms() <= fl:
            raise PlanningError("goal atoms outside F'")

    @property
    def fluent_set(self) -> frozenset:
        return frozenset(self.fluents)

    def action(self, name: ActionId) -> ClassicalAction:
        try:
            return self._index[name]
        except KeyError:
            raise PlanningError(f"unknown classical action {name}") from None

    def has_action(self, name: ActionId) -> bool:
        return name in self._index


def triggered_effect(atoms: frozenset, action: ClassicalAction) -> LiteralSet:
    """Union of the effects whose condition holds in ``atoms``."""
    lits: set = set()
    for ce in action.cond_effects:
        if all((l.atom in atoms) == l.positive for l in ce.condition):
            lits.update(ce.effect)
    try:
        return LiteralSet(lits)
    except IllDefinedError as e:
        raise IllDefinedError(e.atom, "effect", str(action.name)) from None


def applicable(atoms: frozenset, action: ClassicalAction) -> bool:
    return all((l.atom in atoms) == l.positive for l in action.precondition)


def apply(atoms: frozenset, action: ClassicalAction) -> frozenset:
    eff = triggered_effect(atoms, action)
    return (atoms - eff.negatives()) | eff.positives()


def goal_holds(atoms: frozenset, goal: Iterable) -> bool:
    return all((l.atom in atoms) == l.positive for l in goal)


def canonical_form(cp: ClassicalProblem) -> tuple:
    """Structure used to compare problems up to effect grouping and action order.

    Unconditional effects are merged into one set and conditional effects are
    compared as a set, so a problem and its re-parsed emission compare equal.
    """
    acts = []
    for a in cp.actions:
        uncond = frozenset(l for ce in a.cond_effects if not ce.condition for l in ce.effect)
        conds = frozenset((ce.condition, ce.effect) for ce in a.cond_effects if ce.condition)
        acts.append((a.name, frozenset(a.precondition), uncond, conds))
    return (frozenset(cp.fluents), frozenset(acts), cp.init, frozenset(cp.goal))
