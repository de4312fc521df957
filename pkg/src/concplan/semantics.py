"""Joint-action semantics and concurrent plan validation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Iterable

from .model import (
    AtomicAction,
    ConcurrentPlan,
    IllDefinedError,
    JointAction,
    LiteralSet,
    MapProblem,
    PlanningError,
    State,
    apply_effect,
)

FAILURE_REASONS = (
    "agent-duplication",
    "fluent-precondition",
    "concurrency-constraint",
    "ill-defined-precondition",
    "ill-defined-effect",
    "goal-unsatisfied",
    "unknown-action",
)


def constraint_holds(action: AtomicAction, joint_literals: Iterable) -> bool:
    """True iff the action part of the precondition is contained in L(a)."""
    L = joint_literals if isinstance(joint_literals, frozenset) else frozenset(joint_literals)
    return all(l in L for l in action.precondition if l.is_action)


def _constraints_hold(action: AtomicAction, members: frozenset) -> bool:
    # Same test as constraint_holds against the implicit total encoding.
    for l in action.precondition:
        if l.is_action and (l.atom in members) != l.positive:
            return False
    return True


def _condition_holds(cond: LiteralSet, atoms: frozenset, members: frozenset) -> bool:
    for l in cond:
        present = (l.atom in members) if l.is_action else (l.atom in atoms)
        if present != l.positive:
            return False
    return True


def joint_precondition(members: Iterable[AtomicAction]) -> LiteralSet:
    """Union of the fluent preconditions; raises IllDefinedError on conflict."""
    lits: set = set()
    for m in members:
        lits.update(l for l in m.precondition if not l.is_action)
    try:
        return LiteralSet(lits)
    except IllDefinedError as e:
        raise IllDefinedError(e.atom, "precondition") from None


def _members(a: JointAction, problem: MapProblem) -> list[AtomicAction]:
    return [problem.action(m) for m in a.ordered()]


def joint_applicable(s: State, a: JointAction, problem: MapProblem) -> bool:
    members = _members(a, problem)
    pre = joint_precondition(members)
    if not s.satisfies(pre):
        return False
    ids = frozenset(a)
    return all(_constraints_hold(m, ids) for m in members)


def joint_effect(s: State, a: JointAction, problem: MapProblem) -> LiteralSet:
    """Union of the effects triggered in the extended state s + L(a)."""
    ids = frozenset(a)
    lits: set = set()
    for m in _members(a, problem):
        for ce in m.cond_effects:
            if _condition_holds(ce.condition, s.true_atoms, ids):
                lits.update(ce.effect)
    try:
        return LiteralSet(lits)
    except IllDefinedError as e:
        raise IllDefinedError(e.atom, "effect", str(a)) from None


def step(s: State, a: JointAction, problem: MapProblem) -> State:
    if not joint_applicable(s, a, problem):
        raise PlanningError(f"joint action {a} is not applicable")
    return apply_effect(s, joint_effect(s, a, problem))


@dataclass
class StepRecord:
    index: int
    state_digest: str
    action: str
    effect: list[str] = field(default_factory=list)


@dataclass
class Failure:
    step: int
    reason: str
    detail: str = ""


@dataclass
class ValidationReport:
    valid: bool
    steps: list[StepRecord] = field(default_factory=list)
    failure: Failure | None = None
    final_digest: str = ""

    @property
    def verdict(self) -> str:
        return "valid" if self.valid else "invalid"

    def to_records(self) -> list[dict]:
        recs = [asdict(s) for s in self.steps]
        recs.append(
            {
                "verdict": self.verdict,
                "final_digest": self.final_digest,
                "failure": asdict(self.failure) if self.failure else None,
            }
        )
        return recs

    def to_json(self) -> str:
        return "\n".join(json.dumps(r, sort_keys=True) for r in self.to_records())

    def to_text(self) -> str:
        lines = []
        for r in self.steps:
            eff = " ".join(r.effect) if r.effect else "-"
            lines.append(f"{r.index:4d} [{r.state_digest}] {r.action}  => {eff}")
        if self.failure:
            f = self.failure
            lines.append(f"INVALID at step {f.step}: {f.reason}" + (f" ({f.detail})" if f.detail else ""))
        else:
            lines.append(f"VALID, final state [{self.final_digest}]")
        return "\n".join(lines)


def _check_step(s: State, a: JointAction, problem: MapProblem) -> Failure | str:
    members = _members(a, problem)
    try:
        pre = joint_precondition(members)
    except IllDefinedError as e:
        return Failure(-1, "ill-defined-precondition", str(e.atom))
    unmet = [l for l in pre.sorted() if not s.holds(l)]
    if unmet:
        return Failure(-1, "fluent-precondition", " ".join(map(str, unmet)))
    ids = frozenset(a)
    for m in members:
        if not _constraints_hold(m, ids):
            bad = [str(l) for l in m.precondition.sorted() if l.is_action and (l.atom in ids) != l.positive]
            return Failure(-1, "concurrency-constraint", f"{m.id}: {' '.join(bad)}")
    return "ok"


def validate_concurrent(problem: MapProblem, plan: ConcurrentPlan | Iterable) -> ValidationReport:
    """Simulate ``plan`` from the initial state and check the goal."""
    report = ValidationReport(valid=False)
    s = problem.init
    for i, raw in enumerate(plan):
        try:
            a = raw if isinstance(raw, JointAction) else JointAction(raw)
        except PlanningError as e:
            report.failure = Failure(i, "agent-duplication", str(e))
            return report
        unknown = [m for m in a if not problem.has_action(m)]
        if unknown:
            report.failure = Failure(i, "unknown-action", " ".join(map(str, unknown)))
            return report
        check = _check_step(s, a, problem)
        if isinstance(check, Failure):
            check.step = i
            report.failure = check
            return report
        try:
            eff = joint_effect(s, a, problem)
        except IllDefinedError as e:
            report.failure = Failure(i, "ill-defined-effect", str(e.atom))
            return report
        report.steps.append(StepRecord(i, s.digest(), str(a), [str(l) for l in eff.sorted()]))
        s = apply_effect(s, eff)
    report.final_digest = s.digest()
    unmet = [l for l in problem.goal.sorted() if not s.holds(l)]
    if unmet:
        report.failure = Failure(len(report.steps), "goal-unsatisfied", " ".join(map(str, unmet)))
        return report
    report.valid = True
    return report


def replay(problem: MapProblem, plan: Iterable[JointAction]) -> list[State]:
    """States s_0..s_n visited by the plan (no goal check)."""
    states = [problem.init]
    for a in plan:
        states.append(step(states[-1], JointAction(a), problem))
    return states


def is_action_free(action: AtomicAction) -> bool:
    """No concurrency constraints in the precondition or any condition."""
    return all(not l.is_action for ce in action.cond_effects for l in ce.condition) and all(
        not l.is_action for l in action.precondition
    )

