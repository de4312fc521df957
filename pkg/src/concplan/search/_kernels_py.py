"""Pure-Python search kernel (fallback when the compiled one is unavailable).

States arrive as little-endian bitset ``bytes`` and are handled as ``int``
masks internally.
"""

from __future__ import annotations

import heapq
import math

from .task import Task

BACKEND = "python"


def _mask(idx) -> int:
    m = 0
    for i in idx:
        m |= 1 << i
    return m


class Kernel:
    def __init__(self, task: Task):
        self.task = task
        self.n_bytes = task.n_bytes
        self.pre_pos = [_mask(p) for p in task.pre_pos]
        self.pre_neg = [_mask(p) for p in task.pre_neg]
        self.effects = [
            [(_mask(cp), _mask(cn), _mask(ad), _mask(dl)) for cp, cn, ad, dl in effs] for effs in task.effects
        ]
        self.goal_pos = _mask(task.goal_pos)
        self.goal_neg = _mask(task.goal_neg)
        self.goal_pos_idx = list(task.goal_pos)
        buckets, always = task.triggers()
        self.buckets = buckets
        self.always = always
        pres, adds = task.relaxed_ops()
        self.op_pre_n = [len(p) for p in pres]
        self.op_add = adds
        self.fluent_ops: list[list[int]] = [[] for _ in range(task.n_fluents)]
        for u, p in enumerate(pres):
            for f in p:
                self.fluent_ops[f].append(u)
        self.free_ops = [u for u, p in enumerate(pres) if not p]

    def _int(self, state: bytes) -> int:
        return int.from_bytes(state, "little")

    def _bytes(self, v: int) -> bytes:
        return v.to_bytes(self.n_bytes, "little")

    def is_goal(self, state: bytes) -> bool:
        s = self._int(state)
        return s & self.goal_pos == self.goal_pos and not s & self.goal_neg

    def goal_count(self, state: bytes) -> int:
        s = self._int(state)
        return bin(self.goal_pos & ~s).count("1") + bin(self.goal_neg & s).count("1")

    def successors(self, state: bytes) -> list[tuple[int, bytes]]:
        """(action index, successor) for every applicable, well-defined action, by index."""
        s = self._int(state)
        cand = list(self.always)
        v = s
        i = 0
        buckets = self.buckets
        while v:
            if v & 1:
                cand.extend(buckets[i])
            v >>= 1
            i += 1
        cand.sort()
        out = []
        pre_pos, pre_neg, effects = self.pre_pos, self.pre_neg, self.effects
        for a in cand:
            pp = pre_pos[a]
            if s & pp != pp or s & pre_neg[a]:
                continue
            add = dl = 0
            for cp, cn, ad, de in effects[a]:
                if s & cp == cp and not s & cn:
                    add |= ad
                    dl |= de
            if add & dl:
                continue  # ill-defined effect in this state
            out.append((a, self._bytes((s & ~dl) | add)))
        return out

    def h_add(self, state: bytes) -> float:
        """Additive delete-relaxation estimate; math.inf if some goal is unreachable."""
        s = self._int(state)
        unsat_neg = bin(self.goal_neg & s).count("1")
        if s & self.goal_pos == self.goal_pos:
            return unsat_neg
        n = self.task.n_fluents
        INF = math.inf
        cost = [INF] * n
        heap = []
        for i in range(n):
            if s >> i & 1:
                cost[i] = 0
                heap.append((0, i))
        remaining = list(self.op_pre_n)
        acc = [0] * len(remaining)
        op_add = self.op_add
        for u in self.free_ops:
            for g in op_add[u]:
                if cost[g] > 1:
                    cost[g] = 1
                    heap.append((1, g))
        heapq.heapify(heap)
        goals_left = {g for g in self.goal_pos_idx if cost[g] != 0}
        fluent_ops = self.fluent_ops
        while heap and goals_left:
            c, f = heapq.heappop(heap)
            if c > cost[f]:
                continue
            goals_left.discard(f)
            for u in fluent_ops[f]:
                acc[u] += c
                remaining[u] -= 1
                if remaining[u] == 0:
                    nc = acc[u] + 1
                    for g in op_add[u]:
                        if nc < cost[g]:
                            cost[g] = nc
                            heapq.heappush(heap, (nc, g))
        total = 0
        for g in self.goal_pos_idx:
            if cost[g] == INF:
                return INF
            total += cost[g]
        return total + unsat_neg
