"""Greedy best-first search with FIFO tie-breaking.

Successors are generated in lexicographic action order, duplicates are
dropped at generation and the goal test also happens at generation. States
with infinite heuristic are not pruned but queued behind every finite one,
so an ``unsolvable`` verdict always means the reachable space was exhausted.
"""

from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import dataclass, field
from typing import Iterable

from ..classical import ClassicalProblem
from ..model import ActionId, PlanningError
from .task import Task, build_task

SOLVED, UNSOLVABLE, TIMEOUT = "solved", "unsolvable", "timeout"
HEURISTICS = ("gc", "add")


@dataclass(frozen=True)
class SearchConfig:
    heuristic: str = "add"
    node_cap: int = 1_000_000
    timeout: float = 300.0
    seed: int = 0  # reserved; search is deterministic
    kernel: type | None = None  # override the backend (benchmarks, tests)

    def __post_init__(self):
        if self.heuristic not in HEURISTICS:
            raise ValueError(f"heuristic must be one of {HEURISTICS}, got {self.heuristic!r}")


@dataclass
class SearchStats:
    expansions: int = 0
    generations: int = 0
    seconds: float = 0.0
    plan_length: int | None = None
    peak_open: int = 0
    peak_closed: int = 0
    backend: str = ""

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class SearchResult:
    status: str
    plan: list[ActionId] | None = None
    stats: SearchStats = field(default_factory=SearchStats)
    reason: str = ""

    @property
    def solved(self) -> bool:
        return self.status == SOLVED


def _kernel_for(task: Task, config: SearchConfig):
    if config.kernel is not None:
        return config.kernel(task)
    from . import Kernel

    return Kernel(task)


def _extract(parents: dict, state: bytes, names: list[ActionId]) -> list[ActionId]:
    plan = []
    while True:
        parent, a = parents[state]
        if parent is None:
            break
        plan.append(names[a])
        state = parent
    plan.reverse()
    return plan


def solve(cp: ClassicalProblem, config: SearchConfig = SearchConfig()) -> SearchResult:
    t0 = time.perf_counter()
    task = build_task(cp)
    kernel = _kernel_for(task, config)
    stats = SearchStats(backend=type(kernel).__module__.rsplit(".", 1)[-1])
    h = kernel.h_add if config.heuristic == "add" else kernel.goal_count

    def finish(status, plan=None, reason=""):
        stats.seconds = time.perf_counter() - t0
        if plan is not None:
            stats.plan_length = len(plan)
            from ..codec import validate_classical

            report = validate_classical(cp, plan)
            if not report.valid:
                raise PlanningError(f"internal error: search produced an invalid plan ({report.failure})")
        return SearchResult(status, plan, stats, reason)

    init = task.init
    parents: dict[bytes, tuple] = {init: (None, -1)}
    if kernel.is_goal(init):
        return finish(SOLVED, [])
    counter = itertools.count()
    open_list = [(h(init), next(counter), init)]
    deadline = t0 + config.timeout
    while open_list:
        _, _, state = heapq.heappop(open_list)
        stats.expansions += 1
        if stats.expansions & 255 == 0 and time.perf_counter() > deadline:
            return finish(TIMEOUT, reason=f"time limit {config.timeout}s")
        for a, succ in kernel.successors(state):
            stats.generations += 1
            if succ in parents:
                continue
            parents[succ] = (state, a)
            if kernel.is_goal(succ):
                stats.peak_closed = len(parents)
                return finish(SOLVED, _extract(parents, succ, task.names))
            hv = h(succ)
            heapq.heappush(open_list, (hv, next(counter), succ))
        if len(parents) > config.node_cap:
            stats.peak_closed = len(parents)
            return finish(TIMEOUT, reason=f"node cap {config.node_cap}")
        if len(open_list) > stats.peak_open:
            stats.peak_open = len(open_list)
    stats.peak_closed = len(parents)
    return finish(UNSOLVABLE, reason="reachable state space exhausted")


def heuristic(state: Iterable, cp: ClassicalProblem, kind: str = "add", kernel: type | None = None) -> float:
    """Heuristic value of ``state`` (a set of true atoms of ``cp``)."""
    if kind not in HEURISTICS:
        raise ValueError(f"heuristic must be one of {HEURISTICS}")
    task = build_task(cp)
    k = kernel(task) if kernel is not None else _kernel_for(task, SearchConfig())
    s = task.encode(state)
    return k.h_add(s) if kind == "add" else k.goal_count(s)


def reachable_states(cp: ClassicalProblem, limit: int = 1_000_000, kernel: type | None = None) -> int:
    """Breadth-first count of reachable states (oracle for exhaustion checks)."""
    from collections import deque

    task = build_task(cp)
    k = kernel(task) if kernel is not None else _kernel_for(task, SearchConfig())
    seen = {task.init}
    queue = deque([task.init])
    while queue:
        s = queue.popleft()
        for _, t in k.successors(s):
            if t not in seen:
                seen.add(t)
                if len(seen) > limit:
                    raise PlanningError(f"more than {limit} reachable states")
                queue.append(t)
    return len(seen)

