"""Emit classical PDDL for grounded problems, plus the provenance sidecar.

Fluents keep their structure (``(active-lift-side a1 s2)``) with every
object declared as a domain constant. Each ground action becomes a 0-ary
schema whose name joins the action name and its arguments with ``-``; the
separator is doubled if that would make two names coincide. The sidecar maps
each mangled name back to the ground action and its provenance so that plans
from external planners stay decodable.
"""

from __future__ import annotations

import json
from typing import Iterable

from ..classical import ClassicalAction, ClassicalProblem, Provenance
from ..model import ActionId, Literal, LiteralSet

SIDECAR_FORMAT = "concplan-provenance/1"
REQUIREMENTS = (":typing", ":negative-preconditions", ":conditional-effects")


def _mangle_all(names: Iterable[ActionId], reserved: set[str]) -> dict[ActionId, str]:
    names = list(names)
    for sep in ("-", "--", "---", "-_-"):
        out = {n: sep.join((n.schema, *n.terms)) for n in names}
        taken = set(out.values())
        if len(taken) == len(out) and not taken & reserved:
            return out
    # unreachable for sane inputs; fall back to numbered names
    return {n: f"act-{k}" for k, n in enumerate(names)}


def mangled_names(cp: ClassicalProblem) -> dict[ActionId, str]:
    reserved = {a.predicate for a in cp.fluents}
    return _mangle_all((a.name for a in cp.actions), reserved)


def _lit(l: Literal) -> str:
    return str(l.atom) if l.positive else f"(not {l.atom})"


def _conj(lits: LiteralSet | Iterable[Literal]) -> str:
    lits = sorted(lits, key=lambda l: (str(l.atom), l.positive))
    return "(and " + " ".join(_lit(l) for l in lits) + ")" if lits else "(and)"


def _action_text(a: ClassicalAction, name: str) -> str:
    effs = []
    for ce in a.cond_effects:
        if not ce.condition:
            effs.extend(_lit(l) for l in sorted(ce.effect, key=lambda l: (str(l.atom), l.positive)))
        else:
            effs.append(f"(when {_conj(ce.condition)} {_conj(ce.effect)})")
    lines = [
        f"  (:action {name}",
        "    :parameters ()",
        f"    :precondition {_conj(a.precondition)}",
        "    :effect (and" + ("" if not effs else "\n      " + "\n      ".join(effs)) + "))",
    ]
    return "\n".join(lines)


def emit_classical_pddl(cp: ClassicalProblem, domain_name: str | None = None) -> tuple[str, str]:
    """(domain text, problem text); output is deterministic for a given problem."""
    dname = domain_name or f"{cp.name}-domain"
    names = mangled_names(cp)
    arity: dict[str, int] = {}
    objects: set[str] = set()
    for f in cp.fluents:
        arity.setdefault(f.predicate, len(f.args))
        objects.update(f.args)
    preds = "\n".join(
        f"    ({p}{''.join(f' ?x{i}' for i in range(n))}{' - object' if n else ''})" for p, n in sorted(arity.items())
    )
    consts = " ".join(sorted(objects))
    dom = [
        f"(define (domain {dname})",
        f"  (:requirements {' '.join(REQUIREMENTS)})",
    ]
    if consts:
        dom.append(f"  (:constants {consts} - object)")
    dom.append("  (:predicates\n" + preds + ")" if preds else "  (:predicates)")
    for a in sorted(cp.actions, key=lambda a: names[a.name]):
        dom.append(_action_text(a, names[a.name]))
    dom_text = "\n".join(dom) + "\n)\n"

    init = "\n".join(f"    {a}" for a in sorted(cp.init, key=str))
    goal = " ".join(_lit(l) for l in sorted(cp.goal, key=lambda l: (str(l.atom), l.positive)))
    prob = [f"(define (problem {cp.name})", f"  (:domain {dname})"]
    prob.append(f"  (:init\n{init})" if init else "  (:init)")
    prob.append(f"  (:goal (and {goal}))" if goal else "  (:goal (and ))")
    prob_text = "\n".join(prob) + "\n)\n"
    return dom_text, prob_text


def _aid_record(aid: ActionId | None) -> dict | None:
    if aid is None:
        return None
    return {"schema": aid.schema, "args": list(aid.args), "agent": aid.agent}


def _aid_from(rec: dict | None) -> ActionId | None:
    if rec is None:
        return None
    return ActionId(rec["schema"], tuple(rec["args"]), rec.get("agent"))


def sidecar(cp: ClassicalProblem) -> dict:
    """JSON-serializable map from mangled action names to ground actions and provenance."""
    names = mangled_names(cp)
    actions = {}
    for a in cp.actions:
        p = cp.provenance.get(a.name, Provenance("plain"))
        actions[names[a.name]] = {
            "action": _aid_record(a.name),
            "kind": p.kind,
            "source": _aid_record(p.source),
            "counter": p.counter,
            "members": [_aid_record(m) for m in p.members],
        }
    return {"format": SIDECAR_FORMAT, "problem": cp.name, "actions": dict(sorted(actions.items()))}


def sidecar_json(cp: ClassicalProblem) -> str:
    return json.dumps(sidecar(cp), indent=1, sort_keys=True) + "\n"


class Sidecar:
    """Loaded sidecar: resolves mangled or ground names to ActionIds and provenance."""

    def __init__(self, data: dict):
        if data.get("format") != SIDECAR_FORMAT:
            raise ValueError(f"unknown sidecar format {data.get('format')!r}")
        self.by_mangled: dict[str, ActionId] = {}
        self.provenance: dict[ActionId, Provenance] = {}
        for mangled, rec in data["actions"].items():
            aid = _aid_from(rec["action"])
            self.by_mangled[mangled] = aid
            self.provenance[aid] = Provenance(
                rec["kind"], _aid_from(rec["source"]), rec["counter"], tuple(_aid_from(m) for m in rec["members"])
            )
        self.by_ground = {(a.schema, a.terms): a for a in self.provenance}

    @classmethod
    def loads(cls, text: str) -> "Sidecar":
        return cls(json.loads(text))

    def resolve(self, name: str, args: tuple[str, ...]) -> ActionId | None:
        if not args and name in self.by_mangled:
            return self.by_mangled[name]
        return self.by_ground.get((name, tuple(args)))


def relabel(cp: ClassicalProblem, side: Sidecar) -> ClassicalProblem:
    """Rename the 0-ary actions of a re-parsed emitted problem back to their ground names."""
    actions = []
    prov = {}
    for a in cp.actions:
        aid = side.by_mangled[a.name.schema]
        actions.append(ClassicalAction(aid, a.precondition, a.cond_effects))
        prov[aid] = side.provenance[aid]
    return ClassicalProblem(
        fluents=cp.fluents, actions=tuple(actions), init=cp.init, goal=cp.goal, provenance=prov, name=cp.name
    )
