"""Plan files.

Classical plans: one ``(name arg ...)`` per line, ``;`` comments ignored.
Concurrent plans: one line per step holding the concatenated atomic actions,
e.g. ``(lift-side a1 s2)(lift-side a2 s1)``.
"""

from __future__ import annotations

from typing import Iterable

from ..classical import ClassicalProblem
from ..model import ActionId, ConcurrentPlan, JointAction, MapProblem, PlanningError
from .sexpr import PddlError, PddlSyntaxError, SList, Span, Sym, read


class PlanFormatError(PddlError):
    """kind is ``syntax``, ``unknown-action`` or ``arity``."""

    def __init__(self, kind: str, message: str, span: Span | None = None, source: str = ""):
        self.kind = kind
        super().__init__(message, span, source)


def _strip_comments(text: str) -> str:
    return "\n".join(line.split(";", 1)[0] for line in text.splitlines())


def _refs(text: str, source: str) -> list[tuple[str, tuple[str, ...], Span]]:
    try:
        forms = read(_strip_comments(text), source)
    except PddlSyntaxError as e:
        raise PlanFormatError("syntax", e.message, e.span, source) from None
    out = []
    for f in forms:
        if not isinstance(f, SList) or f.head() is None:
            span = f.span
            raise PlanFormatError("syntax", "expected (name arg ...)", span, source)
        args = []
        for x in f.items[1:]:
            if not isinstance(x, Sym):
                raise PlanFormatError("syntax", "nested list in plan step", x.span, source)
            args.append(x.text)
        out.append((f.head(), tuple(args), f.span))
    return out


def parse_plan_refs(text: str, source: str = "") -> list[tuple[str, tuple[str, ...]]]:
    """Raw (name, args) pairs without resolution."""
    return [(n, a) for n, a, _ in _refs(text, source)]


def parse_plan(text: str, cp: ClassicalProblem | None = None, sidecar=None, source: str = "") -> list[ActionId]:
    """Classical plan text -> ActionIds.

    With ``cp`` every step must name an action of ``cp``; 0-ary mangled names
    from emitted PDDL are resolved through ``sidecar`` when one is given.
    """
    arities: dict[str, set[int]] = {}
    if cp is not None:
        for a in cp.actions:
            arities.setdefault(a.name.schema, set()).add(len(a.name.terms))
    plan = []
    for name, args, span in _refs(text, source):
        if sidecar is not None:
            aid = sidecar.resolve(name, args)
            if aid is not None:
                plan.append(aid)
                continue
        aid = ActionId(name, args)
        if cp is not None and not cp.has_action(aid):
            if name in arities and len(args) not in arities[name]:
                want = "/".join(map(str, sorted(arities[name])))
                raise PlanFormatError("arity", f"{name} takes {want} arguments, got {len(args)}", span, source)
            raise PlanFormatError("unknown-action", f"unknown action ({name} {' '.join(args)})", span, source)
        if cp is None and sidecar is not None:
            raise PlanFormatError("unknown-action", f"unknown action ({name} {' '.join(args)})", span, source)
        plan.append(aid)
    return plan


def format_plan(plan: Iterable[ActionId]) -> str:
    return "".join(f"{a}\n" for a in plan)


def parse_concurrent_plan(text: str, problem: MapProblem, source: str = "") -> ConcurrentPlan:
    """One joint action per non-empty line; members resolved against ``problem``."""
    steps = []
    for lineno, line in enumerate(text.splitlines(), 1):
        body = line.split(";", 1)[0].strip()
        if not body:
            continue
        refs = _refs(body, source)
        members = []
        for name, args, span in refs:
            span = Span(lineno, span.col)
            try:
                members.append(problem.lookup(name, args))
            except PlanningError as e:
                kind = "arity" if "argument" in str(e) else "unknown-action"
                raise PlanFormatError(kind, str(e), span, source) from None
        try:
            steps.append(JointAction(members))
        except PlanningError as e:
            raise PlanFormatError("syntax", str(e), Span(lineno, 1), source) from None
    return ConcurrentPlan(tuple(steps))


def format_concurrent_plan(plan: ConcurrentPlan | Iterable[JointAction]) -> str:
    steps = plan.steps if isinstance(plan, ConcurrentPlan) else plan
    return "".join("".join(str(m) for m in JointAction(a).ordered()) + "\n" for a in steps)
