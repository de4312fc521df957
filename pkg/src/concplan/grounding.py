"""Instantiate schema actions over typed objects.

``forall`` is compiled away by exhaustive expansion, ``when`` clauses become
conditional effects, and static predicates (those no action ever changes) are
evaluated against the initial state and removed. ``imply`` is accepted when
its antecedent only mentions statics and equality, so it is resolved here and
never reaches the ground model.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

from .classical import ClassicalAction, ClassicalProblem, Provenance
from .model import (
    ActionId,
    Atom,
    AtomicAction,
    ConditionalEffect,
    IllDefinedError,
    Literal,
    LiteralSet,
    MapProblem,
    PlanningError,
    State,
)
from .pddl.ast import And, AtomF, DomainAst, Eq, Forall, Imply, Not, ProblemAst, SchemaAction, When
from .pddl.sexpr import UnsupportedError


class GroundingError(PlanningError):
    pass


@dataclass
class GroundingReport:
    n_fluents: int = 0
    actions_per_agent: dict[str, int] = field(default_factory=dict)
    pruned_by_statics: int = 0
    pruned_unsatisfiable: int = 0
    seconds: float = 0.0

    @property
    def n_actions(self) -> int:
        return sum(self.actions_per_agent.values())

    def rows(self) -> list[tuple[str, str]]:
        rows = [("fluents", str(self.n_fluents)), ("actions", str(self.n_actions))]
        rows += [(f"actions[{a}]", str(n)) for a, n in self.actions_per_agent.items()]
        rows += [
            ("pruned by statics", str(self.pruned_by_statics)),
            ("pruned unsatisfiable", str(self.pruned_unsatisfiable)),
            ("seconds", f"{self.seconds:.3f}"),
        ]
        return rows

    def table(self) -> str:
        w = max(len(k) for k, _ in self.rows())
        return "\n".join(f"{k:<{w}}  {v}" for k, v in self.rows())


class _Unsat(Exception):
    """Raised internally when a condition instantiates to false."""


def _effect_predicates(f, out: set):
    if f is None:
        return
    if isinstance(f, AtomF):
        out.add(f.name)
    elif isinstance(f, Not):
        _effect_predicates(f.arg, out)
    elif isinstance(f, And):
        for p in f.parts:
            _effect_predicates(p, out)
    elif isinstance(f, Forall):
        _effect_predicates(f.body, out)
    elif isinstance(f, When):
        _effect_predicates(f.effect, out)


def _conjuncts(f):
    if f is None:
        return
    if isinstance(f, And):
        for p in f.parts:
            yield from _conjuncts(p)
    else:
        yield f


def _vars_of(f) -> set[str]:
    if isinstance(f, AtomF):
        return {t for t in f.terms if t.startswith("?")}
    if isinstance(f, Eq):
        return {t for t in (f.left, f.right) if t.startswith("?")}
    if isinstance(f, Not):
        return _vars_of(f.arg)
    return set()


class _Grounder:
    def __init__(self, domain: DomainAst, problem: ProblemAst, prune_statics: bool = True):
        self.domain = domain
        self.problem = problem
        self.objects: dict[str, str] = dict(domain.constants)
        self.objects.update(problem.objects)
        self._by_type: dict[str, tuple[str, ...]] = {}
        fluent_preds: set[str] = set()
        for act in domain.actions.values():
            _effect_predicates(act.effect, fluent_preds)
        # imply antecedents are always evaluated against init; pruning only
        # controls whether static atoms stay in preconditions
        self.static_preds = set(domain.predicates) - fluent_preds
        self.statics = self.static_preds if prune_statics else set()
        self.static_facts: set[tuple[str, tuple[str, ...]]] = {
            (a.name, a.terms) for a in problem.init if a.name in self.static_preds
        }
        self.report = GroundingReport()

    def objects_of(self, t: str) -> tuple[str, ...]:
        objs = self._by_type.get(t)
        if objs is None:
            objs = tuple(sorted(o for o, ot in self.objects.items() if self.domain.is_subtype(ot, t)))
            self._by_type[t] = objs
        return objs

    def _object_set(self, t: str) -> frozenset:
        key = ("set", t)
        objs = self._by_type.get(key)
        if objs is None:
            objs = self._by_type[key] = frozenset(self.objects_of(t))
        return objs

    # -- conditions -------------------------------------------------------

    def _term(self, t: str, env: dict[str, str]) -> str:
        return env[t] if t.startswith("?") else t

    def _atom_literal(self, f: AtomF, env, positive: bool, static_only: bool = False) -> Literal | None:
        """Literal for an atom; None when it is a true static, _Unsat when a false one."""
        args = tuple(self._term(t, env) for t in f.terms)
        if f.is_action:
            schema = self.domain.actions[f.name]
            for arg, (_, t) in zip(args, schema.all_params):
                if arg not in self._object_set(t):
                    raise GroundingError(
                        f"{f.span}: action atom ({f.name} {' '.join(args)}) matches no ground action:"
                        f" {arg} is not of type {t}"
                    )
            if schema.agent_param is not None:
                aid = ActionId(f.name, args[1:], args[0])
            else:
                aid = ActionId(f.name, args)
            return Literal(aid, positive)
        if f.name in self.statics or (static_only and f.name in self.static_preds):
            if ((f.name, args) in self.static_facts) == positive:
                return None
            raise _Unsat
        return Literal(Atom(f.name, args), positive)

    def condition(self, f, env, out: list, static_only: bool = False):
        """Append the literals of condition ``f`` under ``env``; raise _Unsat if false."""
        if f is None:
            return
        if isinstance(f, And):
            for p in f.parts:
                self.condition(p, env, out, static_only)
        elif isinstance(f, AtomF):
            lit = self._atom_literal(f, env, True, static_only)
            if lit is not None:
                if static_only:
                    raise UnsupportedError("imply antecedent must only use static predicates and equality", f.span)
                out.append(lit)
        elif isinstance(f, Eq):
            if self._term(f.left, env) != self._term(f.right, env):
                raise _Unsat
        elif isinstance(f, Not):
            inner = f.arg
            if isinstance(inner, Eq):
                if self._term(inner.left, env) == self._term(inner.right, env):
                    raise _Unsat
            else:
                lit = self._atom_literal(inner, env, False, static_only)
                if lit is not None:
                    if static_only:
                        raise UnsupportedError(
                            "imply antecedent must only use static predicates and equality", inner.span
                        )
                    out.append(lit)
        elif isinstance(f, Forall):
            for binding in self._bindings(f.variables):
                inner_env = dict(env)
                inner_env.update(binding)
                self.condition(f.body, inner_env, out, static_only)
        elif isinstance(f, Imply):
            try:
                self.condition(f.antecedent, env, [], static_only=True)
            except _Unsat:
                return
            self.condition(f.consequent, env, out, static_only)
        else:
            raise UnsupportedError(f"unsupported condition {type(f).__name__}", getattr(f, "span", None))

    def _bindings(self, variables):
        names = [v for v, _ in variables]
        domains = [self.objects_of(t) for _, t in variables]
        for combo in itertools.product(*domains):
            yield dict(zip(names, combo))

    # -- effects ----------------------------------------------------------

    def effect(self, f, env, uncond: list, conds: list):
        if f is None:
            return
        if isinstance(f, And):
            for p in f.parts:
                self.effect(p, env, uncond, conds)
        elif isinstance(f, AtomF):
            uncond.append(Literal(Atom(f.name, tuple(self._term(t, env) for t in f.terms)), True))
        elif isinstance(f, Not):
            a = f.arg
            uncond.append(Literal(Atom(a.name, tuple(self._term(t, env) for t in a.terms)), False))
        elif isinstance(f, Forall):
            for binding in self._bindings(f.variables):
                inner_env = dict(env)
                inner_env.update(binding)
                self.effect(f.body, inner_env, uncond, conds)
        elif isinstance(f, When):
            cond: list = []
            try:
                self.condition(f.condition, env, cond)
            except _Unsat:
                return
            eff: list = []
            nested: list = []
            self.effect(f.effect, env, eff, nested)
            if nested:
                raise UnsupportedError("nested when", f.span)
            conds.append((cond, eff))
        else:
            raise UnsupportedError(f"unsupported effect {type(f).__name__}", getattr(f, "span", None))

    # -- schemas ----------------------------------------------------------

    def _static_filters(self, schema: SchemaAction):
        """Top-level static/equality conjuncts of the precondition, keyed by the last param they need."""
        order = [v for v, _ in schema.all_params]
        pos_of = {v: i for i, v in enumerate(order)}
        filters: dict[int, list] = {}
        for c in _conjuncts(schema.precondition):
            base = c.arg if isinstance(c, Not) else c
            if isinstance(base, Eq) or (isinstance(base, AtomF) and not base.is_action and base.name in self.statics):
                vs = _vars_of(c)
                if not vs <= set(pos_of):
                    continue
                k = max((pos_of[v] for v in vs), default=0)
                filters.setdefault(k, []).append(c)
        return order, filters

    def _passes(self, c, env) -> bool:
        try:
            self.condition(c, env, [])
        except _Unsat:
            return False
        return True

    def schema_bindings(self, schema: SchemaAction):
        order, filters = self._static_filters(schema)
        domains = [self.objects_of(t) for _, t in schema.all_params]
        env: dict[str, str] = {}

        def rec(k: int):
            if k == len(order):
                yield dict(env)
                return
            for o in domains[k]:
                env[order[k]] = o
                if all(self._passes(c, env) for c in filters.get(k, ())):
                    yield from rec(k + 1)
                else:
                    self.report.pruned_by_statics += 1
            env.pop(order[k], None)

        if not order:
            for c in filters.get(0, ()):
                if not self._passes(c, env):
                    self.report.pruned_by_statics += 1
                    return
            yield {}
            return
        yield from rec(0)

    def ground_schema(self, schema: SchemaAction):
        for env in self.schema_bindings(schema):
            args = tuple(env[v] for v, _ in schema.params)
            agent = env[schema.agent_param[0]] if schema.agent_param else None
            aid = ActionId(schema.name, args, agent)
            pre: list = []
            try:
                self.condition(schema.precondition, env, pre)
            except _Unsat:
                self.report.pruned_by_statics += 1
                continue
            try:
                pre_set = LiteralSet(pre)
            except IllDefinedError:
                self.report.pruned_unsatisfiable += 1
                continue
            uncond: list = []
            conds: list = []
            self.effect(schema.effect, env, uncond, conds)
            effects: list = []
            if uncond:
                effects.append((frozenset(), uncond))
            effects.extend(conds)
            yield aid, pre_set, effects

    def build_effects(self, aid, effects) -> list[ConditionalEffect]:
        out: list[ConditionalEffect] = []
        seen = set()
        for cond, eff in effects:
            try:
                cset = LiteralSet(cond)
            except IllDefinedError:
                continue  # condition can never hold
            # (and (not (p)) (p)) inside one effect: the add wins, as in PDDL
            added = {l.atom for l in eff if l.positive}
            eset = LiteralSet(l for l in eff if l.positive or l.atom not in added)
            ce = ConditionalEffect(cset, eset)
            if ce not in seen:
                seen.add(ce)
                out.append(ce)
        return out


def _resolve_action_literals(raw: dict, existing_kinds=None):
    """Drop references to ground actions that do not exist, to a fixpoint.

    A negative reference to a missing action is trivially true; a positive one
    can never hold, which removes the action (precondition) or the effect.
    Returns {aid: (pre LiteralSet, [ConditionalEffect])}.
    """
    current = dict(raw)
    while True:
        existing = set(current)
        nxt = {}
        changed = False
        for aid, (pre, effects) in current.items():
            new_pre = []
            dead = False
            for l in pre:
                if l.is_action and l.atom == aid and not l.positive:
                    dead = True  # excludes itself: never applicable
                    break
                if l.is_action and l.atom not in existing:
                    if l.positive:
                        dead = True
                        break
                    changed = True
                    continue
                new_pre.append(l)
            if dead:
                changed = True
                continue
            new_effects = []
            for ce in effects:
                cond = []
                ok = True
                for l in ce.condition:
                    if l.is_action and l.atom not in existing:
                        if l.positive:
                            ok = False
                            break
                        continue
                    cond.append(l)
                if not ok:
                    changed = True
                    continue
                if len(cond) != len(ce.condition):
                    changed = True
                    ce = ConditionalEffect(LiteralSet(cond), ce.effect)
                new_effects.append(ce)
            nxt[aid] = (LiteralSet(new_pre), new_effects)
        current = nxt
        if not changed:
            return current


def _mentioned_atoms(pre, effects) -> set:
    out = {l.atom for l in pre if not l.is_action}
    for ce in effects:
        out.update(l.atom for l in ce.condition if not l.is_action)
        out.update(l.atom for l in ce.effect)
    return out


def _goal_and_init(g: _Grounder):
    init = {Atom(a.name, a.terms) for a in g.problem.init if a.name not in g.statics}
    goal = []
    for a, positive in g.problem.goal:
        if a.name in g.statics:
            if ((a.name, a.terms) in g.static_facts) == positive:
                continue
        goal.append(Literal(Atom(a.name, a.terms), positive))
    return init, LiteralSet(goal)


def ground(domain: DomainAst, problem: ProblemAst, prune_statics: bool = True) -> tuple[MapProblem, GroundingReport]:
    """Ground a multiagent domain/problem pair into a MapProblem."""
    t0 = time.perf_counter()
    g = _Grounder(domain, problem, prune_statics)
    agents = tuple(problem.agents)
    raw: dict = {}
    for schema in domain.actions.values():
        if schema.agent_param is None:
            raise GroundingError(f"action {schema.name} has no :agent slot in a multiagent domain")
        for aid, pre, effects in g.ground_schema(schema):
            built = g.build_effects(aid, effects)
            raw[aid] = (pre, built)
    resolved = _resolve_action_literals(raw)
    g.report.pruned_unsatisfiable += len(raw) - len(resolved)
    init, goal = _goal_and_init(g)
    fluents = set(init) | goal.atoms()
    per_agent: dict[str, list[AtomicAction]] = {a: [] for a in agents}
    for aid in sorted(resolved, key=ActionId.sort_key):
        pre, effects = resolved[aid]
        for l in pre:
            if l.is_action and l.atom.agent not in per_agent:
                raise GroundingError(f"{aid} refers to {l.atom} of a non-agent")
        fluents |= _mentioned_atoms(pre, effects)
        if aid.agent not in per_agent:
            raise GroundingError(f"{aid}: {aid.agent} is not an agent")
        per_agent[aid.agent].append(AtomicAction(aid, pre, tuple(effects)))
    F = frozenset(fluents)
    mp = MapProblem(
        agents=agents,
        fluents=F,
        actions={a: tuple(v) for a, v in per_agent.items()},
        init=State(frozenset(init), F),
        goal=goal,
        name=problem.name,
    )
    g.report.n_fluents = len(F)
    g.report.actions_per_agent = {a: len(per_agent[a]) for a in agents}
    g.report.seconds = time.perf_counter() - t0
    return mp, g.report


def ground_classical(domain: DomainAst, problem: ProblemAst, prune_statics: bool = True) -> ClassicalProblem:
    """Ground a classical (agent-free) domain/problem pair."""
    if domain.multiagent:
        raise GroundingError("domain uses :agent; use ground() for multiagent problems")
    g = _Grounder(domain, problem, prune_statics)
    actions = []
    fluents: set = set()
    for schema in domain.actions.values():
        for aid, pre, effects in g.ground_schema(schema):
            if any(l.is_action for l in pre) or any(l.is_action for c, _ in effects for l in c):
                raise GroundingError(f"{aid}: action atoms are not allowed in classical domains")
            built = g.build_effects(aid, effects)
            fluents |= _mentioned_atoms(pre, built)
            actions.append(ClassicalAction(aid, pre, tuple(built)))
    init, goal = _goal_and_init(g)
    fluents |= set(init) | goal.atoms()
    actions.sort(key=lambda a: a.name.sort_key())
    return ClassicalProblem(
        fluents=tuple(sorted(fluents)),
        actions=tuple(actions),
        init=frozenset(init),
        goal=goal,
        provenance={a.name: Provenance("plain") for a in actions},
        name=problem.name,
    )
