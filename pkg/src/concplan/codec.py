"""Translate between classical plans over the compilation and concurrent plans.

``decode`` turns a classical plan into one joint action per
select-phase ... finish segment; ``encode`` does the reverse. Both rely on
the provenance map recorded by the compiler.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import classical
from .classical import ClassicalProblem
from .compiler import CompileOptions
from .model import (
    ActionId,
    ConcurrentPlan,
    IllDefinedError,
    JointAction,
    MapProblem,
    PlanningError,
    State,
    apply_effect,
    state_digest,
)
from .semantics import Failure, StepRecord, ValidationReport, joint_applicable, joint_effect

ClassicalPlan = list  # list[ActionId] over the compiled problem


class DecodeError(PlanningError):
    """kind is ``malformed-segmentation``, ``member-mismatch``, ``interference`` or ``unknown-action``."""

    def __init__(self, kind: str, message: str, segment: int | None = None):
        self.kind = kind
        self.segment = segment
        where = f" (segment {segment})" if segment is not None else ""
        super().__init__(f"{kind}{where}: {message}")


class BoundExceededError(PlanningError):
    def __init__(self, step: int, size: int, bound: int):
        self.step, self.size, self.bound = step, size, bound
        super().__init__(f"joint action {step} has {size} members but the bound is C={bound}")


def _phase_of(cp: ClassicalProblem, name: ActionId):
    try:
        return cp.provenance[name]
    except KeyError:
        raise DecodeError("unknown-action", f"{name} is not an action of the compiled problem") from None


def segment(plan: Sequence[ActionId], cp: ClassicalProblem) -> list[tuple[list, list, list]]:
    """Split a classical plan into (selected, applied, reset) member lists per cycle."""
    segments = []
    i = 0
    n = len(plan)

    # phase actions may carry a collision-avoiding prefix
    def phase_kind(name):
        s = name.schema
        for k in ("select-phase", "apply-phase", "reset-phase", "finish"):
            if s.endswith(k):
                return k
        return s

    def expect_phase(k):
        nonlocal i
        if i >= n:
            raise DecodeError("malformed-segmentation", f"plan ends before {k}", len(segments))
        p = _phase_of(cp, plan[i])
        if p.kind != "phase" or phase_kind(plan[i]) != k:
            raise DecodeError("malformed-segmentation", f"expected {k}, found {plan[i]}", len(segments))
        i += 1

    def block(kind):
        nonlocal i
        out = []
        while i < n:
            p = _phase_of(cp, plan[i])
            if p.kind == "phase":
                break
            if p.kind != kind:
                raise DecodeError(
                    "malformed-segmentation", f"{plan[i]} ({p.kind}) inside the {kind} block", len(segments)
                )
            out.append(p.source)
            i += 1
        return out

    while i < n:
        expect_phase("select-phase")
        sel = block("select")
        expect_phase("apply-phase")
        app = block("do")
        expect_phase("reset-phase")
        res = block("end")
        expect_phase("finish")
        segments.append((sel, app, res))
    return segments


def decode(
    plan: Sequence[ActionId],
    problem: MapProblem | None,
    cp: ClassicalProblem,
    check_interference: bool = True,
) -> ConcurrentPlan:
    """Classical plan over ``cp`` -> concurrent plan over ``problem``.

    Segments that select nothing are dropped. With ``check_interference`` the
    compiled execution of every segment is compared with the joint semantics
    and any difference in the resulting state raises ``DecodeError``.
    """
    segs = segment(plan, cp)
    steps: list[JointAction] = []
    for k, (sel, app, res) in enumerate(segs):
        if not (sorted(sel) == sorted(app) == sorted(res)) or len(set(sel)) != len(sel):
            raise DecodeError(
                "member-mismatch",
                f"selected {sorted(map(str, sel))}, applied {sorted(map(str, app))}, reset {sorted(map(str, res))}",
                k,
            )
        if not sel:
            continue
        try:
            steps.append(JointAction(sel))
        except PlanningError as e:
            raise DecodeError("member-mismatch", str(e), k) from None
    result = ConcurrentPlan(tuple(steps))
    if check_interference and problem is not None:
        _check_interference(plan, problem, cp, segs)
    return result


def _check_interference(plan, problem: MapProblem, cp: ClassicalProblem, segs):
    F = problem.fluents
    atoms = cp.init
    s = problem.init
    pos = 0
    for k, (sel, app, res) in enumerate(segs):
        seg_len = len(sel) + len(app) + len(res) + 4
        for name in plan[pos : pos + seg_len]:
            act = cp.action(name)
            if not classical.applicable(atoms, act):
                raise DecodeError("interference", f"{name} is not applicable in the compiled execution", k)
            atoms = classical.apply(atoms, act)
        pos += seg_len
        if not sel:
            continue
        a = JointAction(sel)
        try:
            if not joint_applicable(s, a, problem):
                raise DecodeError("interference", f"{a} is not applicable under joint semantics", k)
            s = apply_effect(s, joint_effect(s, a, problem))
        except IllDefinedError as e:
            raise DecodeError("interference", str(e), k) from None
        compiled_part = atoms & F
        if compiled_part != s.true_atoms:
            only_c = sorted(map(str, compiled_part - s.true_atoms))
            only_j = sorted(map(str, s.true_atoms - compiled_part))
            raise DecodeError(
                "interference",
                f"compiled execution and joint semantics disagree: +{only_c} -{only_j}",
                k,
            )


def encode(plan: ConcurrentPlan | Iterable, problem: MapProblem, cp: ClassicalProblem, opts: CompileOptions) -> list[ActionId]:
    """Concurrent plan -> classical plan on ``cp`` (select, apply, reset each member)."""
    from .compiler import Namer

    namer = Namer(problem)
    out: list[ActionId] = []
    for t, a in enumerate(plan):
        a = a if isinstance(a, JointAction) else JointAction(a)
        members = a.ordered()
        if opts.bounded and len(members) > opts.bound:
            raise BoundExceededError(t, len(members), opts.bound)
        out.append(namer.phase_action("select-phase"))
        for j, m in enumerate(members):
            out.append(namer.compiled("select", m, j if opts.bounded else None))
        out.append(namer.phase_action("apply-phase"))
        out.extend(namer.compiled("do", m) for m in members)
        out.append(namer.phase_action("reset-phase"))
        k = len(members)
        for j, m in enumerate(members):
            out.append(namer.compiled("end", m, k - j if opts.bounded else None))
        out.append(namer.phase_action("finish"))
    for name in out:
        if not cp.has_action(name):
            raise PlanningError(f"{name} is not an action of the compiled problem (wrong options?)")
    return out


def validate_classical(cp: ClassicalProblem, plan: Sequence[ActionId]) -> ValidationReport:
    """Sequential simulation with conditional effects; checks G' at the end."""
    report = ValidationReport(valid=False)
    atoms = cp.init
    for i, name in enumerate(plan):
        if not cp.has_action(name):
            report.failure = Failure(i, "unknown-action", str(name))
            return report
        act = cp.action(name)
        unmet = [l for l in act.precondition.sorted() if (l.atom in atoms) != l.positive]
        if unmet:
            report.failure = Failure(i, "fluent-precondition", f"{name}: " + " ".join(map(str, unmet)))
            return report
        try:
            eff = classical.triggered_effect(atoms, act)
        except IllDefinedError as e:
            report.failure = Failure(i, "ill-defined-effect", str(e.atom))
            return report
        report.steps.append(StepRecord(i, state_digest(atoms), str(name), [str(l) for l in eff.sorted()]))
        atoms = (atoms - eff.negatives()) | eff.positives()
    report.final_digest = state_digest(atoms)
    unmet = [l for l in cp.goal.sorted() if (l.atom in atoms) != l.positive]
    if unmet:
        report.failure = Failure(len(plan), "goal-unsatisfied", " ".join(map(str, unmet)))
        return report
    report.valid = True
    return report


def final_state(cp: ClassicalProblem, plan: Sequence[ActionId]) -> State:
    atoms = cp.init
    for name in plan:
        atoms = classical.apply(atoms, cp.action(name))
    return State(atoms, cp.fluent_set)


def decode_naive(plan: Sequence[ActionId], cp: ClassicalProblem) -> ConcurrentPlan:
    """Plan over a naive (one action per joint action) compilation -> concurrent plan."""
    steps = []
    for k, name in enumerate(plan):
        p = _phase_of(cp, name)
        if p.kind != "joint":
            raise DecodeError("malformed-segmentation", f"{name} is not a joint action", k)
        steps.append(JointAction(p.members))
    return ConcurrentPlan(tuple(steps))
