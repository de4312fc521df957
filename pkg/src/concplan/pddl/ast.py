"""Schema-level structures for (multiagent) PDDL domains and problems."""

from __future__ import annotations

from dataclasses import dataclass, field

from .sexpr import Span

Param = tuple[str, str]  # (variable or object name, type)


@dataclass(frozen=True)
class AtomF:
    """``(name term ...)``; ``is_action`` marks references to action schemas."""

    name: str
    terms: tuple[str, ...]
    is_action: bool
    span: Span


@dataclass(frozen=True)
class Eq:
    left: str
    right: str
    span: Span


@dataclass(frozen=True)
class Not:
    arg: object
    span: Span


@dataclass(frozen=True)
class And:
    parts: tuple
    span: Span


@dataclass(frozen=True)
class Forall:
    variables: tuple[Param, ...]
    body: object
    span: Span


@dataclass(frozen=True)
class When:
    condition: object
    effect: object
    span: Span


@dataclass(frozen=True)
class Imply:
    antecedent: object
    consequent: object
    span: Span


@dataclass(frozen=True)
class SchemaAction:
    name: str
    agent_param: Param | None
    params: tuple[Param, ...]
    precondition: object | None
    effect: object | None
    span: Span

    @property
    def all_params(self) -> tuple[Param, ...]:
        if self.agent_param is None:
            return self.params
        return (self.agent_param, *self.params)


@dataclass
class DomainAst:
    name: str
    requirements: tuple[str, ...] = ()
    # type -> parent type; "object" is the implicit root
    types: dict[str, str] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)
    predicates: dict[str, tuple[Param, ...]] = field(default_factory=dict)
    actions: dict[str, SchemaAction] = field(default_factory=dict)
    span: Span = Span(1, 1)

    @property
    def multiagent(self) -> bool:
        return any(a.agent_param is not None for a in self.actions.values())

    def is_subtype(self, t: str, ancestor: str) -> bool:
        seen = set()
        while t not in seen:
            if t == ancestor:
                return True
            seen.add(t)
            if t == "object":
                return False
            t = self.types.get(t, "object")
        return False


@dataclass
class ProblemAst:
    name: str
    domain_name: str
    objects: dict[str, str] = field(default_factory=dict)
    init: list[AtomF] = field(default_factory=list)
    # list of (atom, positive)
    goal: list[tuple[AtomF, bool]] = field(default_factory=list)
    agents: list[str] = field(default_factory=list)
    span: Span = Span(1, 1)
