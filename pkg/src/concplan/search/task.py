"""Index-based view of a ClassicalProblem shared by both search kernels.

Fluents become integers in ``cp.fluents`` order and states become
little-endian bitsets stored as ``bytes``. Variable-length lists are stored
in CSR form (an offsets array plus a flat index array) using ``array('i')``
so the compiled kernel can read them through the buffer protocol.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from ..classical import ClassicalProblem
from ..model import ActionId


def _csr(rows: list[list[int]]) -> tuple[array, array]:
    off = array("i", [0])
    idx = array("i")
    for r in rows:
        idx.extend(r)
        off.append(len(idx))
    return off, idx


def action_order_key(name: ActionId) -> tuple:
    return (name.schema, name.terms)


@dataclass
class Task:
    n_fluents: int
    names: list[ActionId]
    fluent_index: dict
    # per action
    pre_pos: list[list[int]]
    pre_neg: list[list[int]]
    effects: list[list[tuple[list[int], list[int], list[int], list[int]]]]  # (cpos, cneg, add, del)
    goal_pos: list[int]
    goal_neg: list[int]
    init: bytes

    @property
    def n_actions(self) -> int:
        return len(self.names)

    @property
    def n_bytes(self) -> int:
        return (self.n_fluents + 7) // 8

    def encode(self, atoms) -> bytes:
        v = 0
        for a in atoms:
            v |= 1 << self.fluent_index[a]
        return v.to_bytes(self.n_bytes, "little")

    def decode(self, state: bytes, fluents) -> frozenset:
        v = int.from_bytes(state, "little")
        return frozenset(f for i, f in enumerate(fluents) if v >> i & 1)

    # -- derived tables ---------------------------------------------------

    def relaxed_ops(self) -> tuple[list[list[int]], list[list[int]]]:
        """Delete-relaxed sub-actions: one per conditional effect with adds."""
        pres, adds = [], []
        for a in range(self.n_actions):
            for cpos, _cneg, add, _del in self.effects[a]:
                if add:
                    pres.append(sorted(set(self.pre_pos[a]) | set(cpos)))
                    adds.append(sorted(set(add)))
        return pres, adds

    def triggers(self) -> tuple[list[list[int]], list[int]]:
        """Bucket each action under one positive precondition fluent.

        The chosen fluent is the least shared one, so expanding a state only
        looks at actions whose trigger is true. Actions with no positive
        precondition are always candidates.
        """
        use = [0] * self.n_fluents
        for pre in self.pre_pos:
            for f in pre:
                use[f] += 1
        buckets: list[list[int]] = [[] for _ in range(self.n_fluents)]
        always = []
        for a, pre in enumerate(self.pre_pos):
            if pre:
                f = min(pre, key=lambda g: (use[g], g))
                buckets[f].append(a)
            else:
                always.append(a)
        return buckets, always

    def flat(self) -> dict:
        """CSR arrays for the compiled kernel."""
        eff_rows = {k: [] for k in ("cpos", "cneg", "add", "del")}
        act_eff_off = array("i", [0])
        n_eff = 0
        for a in range(self.n_actions):
            for cpos, cneg, add, dl in self.effects[a]:
                eff_rows["cpos"].append(cpos)
                eff_rows["cneg"].append(cneg)
                eff_rows["add"].append(add)
                eff_rows["del"].append(dl)
                n_eff += 1
            act_eff_off.append(n_eff)
        pres, adds = self.relaxed_ops()
        by_fluent: list[list[int]] = [[] for _ in range(self.n_fluents)]
        for u, pre in enumerate(pres):
            for f in pre:
                by_fluent[f].append(u)
        buckets, always = self.triggers()
        out = {"act_eff_off": act_eff_off}
        for name, rows in (
            ("pre_pos", self.pre_pos),
            ("pre_neg", self.pre_neg),
            ("eff_cpos", eff_rows["cpos"]),
            ("eff_cneg", eff_rows["cneg"]),
            ("eff_add", eff_rows["add"]),
            ("eff_del", eff_rows["del"]),
            ("op_pre", pres),
            ("op_add", adds),
            ("fluent_ops", by_fluent),
            ("trig", buckets),
        ):
            out[name + "_off"], out[name + "_idx"] = _csr(rows)
        out["always"] = array("i", always)
        out["goal_pos"] = array("i", self.goal_pos)
        out["goal_neg"] = array("i", self.goal_neg)
        return out


def build_task(cp: ClassicalProblem) -> Task:
    index = {f: i for i, f in enumerate(cp.fluents)}
    acts = sorted(cp.actions, key=lambda a: action_order_key(a.name))

    def split(lits):
        p = sorted(index[l.atom] for l in lits if l.positive)
        n = sorted(index[l.atom] for l in lits if not l.positive)
        return p, n

    pre_pos, pre_neg, effects = [], [], []
    for a in acts:
        p, n = split(a.precondition)
        pre_pos.append(p)
        pre_neg.append(n)
        effs = []
        for ce in a.cond_effects:
            cp_, cn = split(ce.condition)
            add, dl = split(ce.effect)
            effs.append((cp_, cn, add, dl))
        effects.append(effs)
    gp, gn = split(cp.goal)
    task = Task(
        n_fluents=len(cp.fluents),
        names=[a.name for a in acts],
        fluent_index=index,
        pre_pos=pre_pos,
        pre_neg=pre_neg,
        effects=effects,
        goal_pos=gp,
        goal_neg=gn,
        init=b"",
    )
    task.init = task.encode(cp.init)
    return task
