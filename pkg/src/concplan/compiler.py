"""Compile a multiagent problem into a classical problem.

Each joint action is simulated in three phases. During *selection* agents
pick atomic actions (``select-a`` marks ``active-a``); during *application*
``do-a`` checks the concurrency constraints against the ``active-`` fluents
and applies the conditional effects; during *reset* ``end-a`` clears the
bookkeeping. ``finish`` closes the cycle once every agent is free again.

Two optional extensions: negative constraints checked at selection time
(``req-neg-`` fluents), and a bound C on the number of selected actions
(``count-j`` fluents, one select/end variant per counter value).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

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
    neg,
    pos,
)
from .semantics import _constraints_hold, joint_precondition

INF = math.inf
PHASES = ("select-phase", "apply-phase", "reset-phase", "finish")


@dataclass(frozen=True)
class CompileOptions:
    neg_in_select: bool = False
    bound: float = INF  # math.inf or a positive int

    def __post_init__(self):
        if self.bound != INF:
            if int(self.bound) != self.bound or self.bound < 1:
                raise ValueError(f"bound must be a positive integer or inf, got {self.bound}")
            object.__setattr__(self, "bound", int(self.bound))

    @property
    def bounded(self) -> bool:
        return self.bound != INF

    @property
    def label(self) -> str:
        v = "negsel" if self.neg_in_select else "base"
        b = "inf" if not self.bounded else str(self.bound)
        return f"{v}/C={b}"


DEFAULT_OPTIONS = CompileOptions(neg_in_select=True)


class Namer:
    """Names of the auxiliary fluents and compiled actions.

    All generated names carry an optional prefix; it grows (``mc-``, ``mc-mc-``,
    ...) until nothing collides with a user predicate or action schema.
    """

    def __init__(self, problem: MapProblem):
        user_preds = {a.predicate for a in problem.fluents}
        schemas = {a.id.schema for a in problem.all_actions()}
        self.prefix = ""
        while self._collides(user_preds, schemas):
            self.prefix += "mc-"

    def _collides(self, preds: set, schemas: set) -> bool:
        p = self.prefix
        fixed = {p + n for n in ("free", "select", "apply", "reset", "free-agent", "busy-agent", "done-agent")}
        if preds & fixed:
            return True
        stems = tuple(p + s for s in ("active-", "req-neg-", "count-"))
        if any(x.startswith(stems) for x in preds):
            return True
        # a schema called "phase" would compile to select-phase
        return "phase" in schemas

    def phase(self, name: str) -> Atom:
        return Atom(self.prefix + name)

    def agent_fluent(self, kind: str, agent: str) -> Atom:
        return Atom(f"{self.prefix}{kind}-agent", (agent,))

    def active(self, aid: ActionId) -> Atom:
        return Atom(f"{self.prefix}active-{aid.schema}", aid.terms)

    def req_neg(self, aid: ActionId) -> Atom:
        return Atom(f"{self.prefix}req-neg-{aid.schema}", aid.terms)

    def count(self, j: int) -> Atom:
        return Atom(f"{self.prefix}count-{j}")

    def phase_action(self, name: str) -> ActionId:
        return ActionId(self.prefix + name, ())

    def compiled(self, kind: str, aid: ActionId, counter: int | None = None) -> ActionId:
        args = aid.terms if counter is None else (*aid.terms, f"n{counter}")
        return ActionId(f"{self.prefix}{kind}-{aid.schema}", args)


def _action_part_to_active(lits, namer: Namer, only_positive: bool = False) -> list[Literal]:
    out = []
    for l in lits:
        if l.is_action:
            if only_positive and not l.positive:
                continue
            out.append(Literal(namer.active(l.atom), l.positive))
    return out


def compile_map(problem: MapProblem, opts: CompileOptions = CompileOptions()) -> ClassicalProblem:
    """Compile ``problem``; the result has |A'| linear in the number of atomic actions."""
    namer = Namer(problem)
    free, select, apply_, reset = (namer.phase(n) for n in ("free", "select", "apply", "reset"))
    agents = problem.agents
    atomic = problem.all_actions()

    fluents: list[Atom] = sorted(problem.fluents)
    fluents += [free, select, apply_, reset]
    for i in agents:
        fluents += [namer.agent_fluent(k, i) for k in ("free", "busy", "done")]
    fluents += [namer.active(a.id) for a in atomic]
    if opts.neg_in_select:
        fluents += [namer.req_neg(a.id) for a in atomic]
    counters: list[Atom] = []
    if opts.bounded:
        counters = [namer.count(j) for j in range(opts.bound + 1)]
        fluents += counters

    init = set(problem.init.true_atoms) | {free} | {namer.agent_fluent("free", i) for i in agents}
    if opts.bounded:
        init.add(counters[0])
    goal = problem.goal.union([pos(free)])

    actions: list[ClassicalAction] = []
    prov: dict[ActionId, Provenance] = {}

    def add(name: ActionId, pre, effects, p: Provenance):
        try:
            pre_set = LiteralSet(pre)
        except IllDefinedError as e:
            raise IllDefinedError(e.atom, "precondition", str(name)) from None
        actions.append(ClassicalAction(name, pre_set, tuple(effects)))
        prov[name] = p

    def uncond(lits) -> ConditionalEffect:
        return ConditionalEffect(LiteralSet(), LiteralSet(lits))

    add(namer.phase_action("select-phase"), [pos(free)], [uncond([neg(free), pos(select)])], Provenance("phase"))
    add(namer.phase_action("apply-phase"), [pos(select)], [uncond([neg(select), pos(apply_)])], Provenance("phase"))
    add(namer.phase_action("reset-phase"), [pos(apply_)], [uncond([neg(apply_), pos(reset)])], Provenance("phase"))
    finish_pre = [pos(reset)] + [pos(namer.agent_fluent("free", i)) for i in agents]
    if opts.bounded:
        finish_pre.append(pos(counters[0]))
    add(namer.phase_action("finish"), finish_pre, [uncond([neg(reset), pos(free)])], Provenance("phase"))

    for a in atomic:
        aid, i = a.id, a.agent
        free_i, busy_i, done_i = (namer.agent_fluent(k, i) for k in ("free", "busy", "done"))
        active = namer.active(aid)
        pre_f = [l for l in a.precondition if not l.is_action]
        negs = sorted((l.atom for l in a.precondition if l.is_action and not l.positive), key=ActionId.sort_key)

        sel_pre = [pos(select), pos(free_i), *pre_f]
        sel_eff = [pos(busy_i), neg(free_i), pos(active)]
        if opts.neg_in_select:
            sel_pre.append(neg(namer.req_neg(aid)))
            sel_pre += [neg(namer.active(b)) for b in negs]
            sel_eff += [pos(namer.req_neg(b)) for b in negs]

        do_pre = [pos(apply_), pos(busy_i), pos(active)]
        do_pre += _action_part_to_active(a.precondition, namer, only_positive=opts.neg_in_select)
        do_effects = [uncond([pos(done_i), neg(busy_i)])]
        for ce in a.cond_effects:
            cond = [l for l in ce.condition if not l.is_action] + _action_part_to_active(ce.condition, namer)
            do_effects.append(ConditionalEffect(LiteralSet(cond), ce.effect))

        end_pre = [pos(reset), pos(done_i), pos(active)]
        end_eff = [pos(free_i), neg(done_i), neg(active)]
        if opts.neg_in_select:
            end_eff += [neg(namer.req_neg(b)) for b in negs]

        if not opts.bounded:
            add(namer.compiled("select", aid), sel_pre, [uncond(sel_eff)], Provenance("select", aid))
        else:
            # No variant leaves count-C, so at most C actions are selected.
            for j in range(opts.bound):
                add(
                    namer.compiled("select", aid, j),
                    sel_pre + [pos(counters[j])],
                    [uncond(sel_eff + [neg(counters[j]), pos(counters[j + 1])])],
                    Provenance("select", aid, j),
                )
        add(namer.compiled("do", aid), do_pre, do_effects, Provenance("do", aid))
        if not opts.bounded:
            add(namer.compiled("end", aid), end_pre, [uncond(end_eff)], Provenance("end", aid))
        else:
            for j in range(1, opts.bound + 1):
                add(
                    namer.compiled("end", aid, j),
                    end_pre + [pos(counters[j])],
                    [uncond(end_eff + [neg(counters[j]), pos(counters[j - 1])])],
                    Provenance("end", aid, j),
                )

    return ClassicalProblem(
        fluents=tuple(fluents),
        actions=tuple(actions),
        init=frozenset(init),
        goal=goal,
        provenance=prov,
        name=f"{problem.name}-compiled",
        counters=tuple(counters),
    )


# short alias; ``compile`` would shadow the builtin inside this module
compile = compile_map


def expected_sizes(problem: MapProblem, opts: CompileOptions) -> tuple[int, int]:
    """(|F'|, |A'|) predicted by the size formulas for this variant."""
    n = len(problem.agents)
    nA = problem.n_actions()
    nF = len(problem.fluents) + 4 + 3 * n + nA
    if opts.neg_in_select:
        nF += nA
    if opts.bounded:
        nF += opts.bound + 1
        nA_prime = 4 + nA * (2 * opts.bound + 1)
    else:
        nA_prime = 4 + 3 * nA
    return nF, nA_prime


def _joint_name(members: list[AtomicAction]) -> ActionId:
    return ActionId("joint", tuple("_".join((m.id.schema, *m.id.terms)) for m in members))


def naive_compile(problem: MapProblem, max_size: int | None = None) -> ClassicalProblem:
    """One classical action per constraint-admissible joint action of size <= max_size.

    Exponential in the number of agents; only meant as a baseline.
    """
    n = len(problem.agents)
    if max_size is None:
        max_size = n
    if max_size > n:
        raise PlanningError(f"max_size {max_size} exceeds the number of agents {n}")
    per_agent = [problem.actions.get(i, ()) for i in problem.agents]
    actions: list[ClassicalAction] = []
    prov: dict[ActionId, Provenance] = {}
    for k in range(1, max_size + 1):
        for agent_idx in itertools.combinations(range(n), k):
            for combo in itertools.product(*(per_agent[i] for i in agent_idx)):
                ids = frozenset(m.id for m in combo)
                if not all(_constraints_hold(m, ids) for m in combo):
                    continue
                try:
                    pre = joint_precondition(combo)
                except IllDefinedError:
                    continue
                effects = []
                for m in combo:
                    for ce in m.cond_effects:
                        ok = all((l.atom in ids) == l.positive for l in ce.condition if l.is_action)
                        if ok:
                            cond = LiteralSet(l for l in ce.condition if not l.is_action)
                            effects.append(ConditionalEffect(cond, ce.effect))
                name = _joint_name(list(combo))
                actions.append(ClassicalAction(name, pre, tuple(effects)))
                prov[name] = Provenance("joint", members=tuple(m.id for m in combo))
    return ClassicalProblem(
        fluents=tuple(sorted(problem.fluents)),
        actions=tuple(actions),
        init=problem.init.true_atoms,
        goal=problem.goal,
        provenance=prov,
        name=f"{problem.name}-naive",
    )


def count_naive(problem: MapProblem, max_size: int | None = None) -> int:
    """Number of actions naive_compile would emit, without building them."""
    n = len(problem.agents)
    max_size = n if max_size is None else max_size
    per_agent = [problem.actions.get(i, ()) for i in problem.agents]
    total = 0
    for k in range(1, max_size + 1):
        for agent_idx in itertools.combinations(range(n), k):
            for combo in itertools.product(*(per_agent[i] for i in agent_idx)):
                ids = frozenset(m.id for m in combo)
                if not all(_constraints_hold(m, ids) for m in combo):
                    continue
                try:
                    joint_precondition(combo)
                except IllDefinedError:
                    continue
                total += 1
    return total
