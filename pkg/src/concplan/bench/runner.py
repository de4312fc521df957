"""Benchmark matrix: instances x compilation variants.

Each cell runs ground -> compile -> solve -> decode -> validate. A plan that
fails validation aborts the whole run; timeouts are recorded and the run
continues.
"""

from __future__ import annotations

import csv
import io
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from ..codec import decode, decode_naive
from ..compiler import CompileOptions, compile_map, count_naive, naive_compile
from ..grounding import ground
from ..model import PlanningError
from ..pddl.parser import parse_domain, parse_problem
from ..search import SearchConfig, solve
from ..semantics import validate_concurrent
from .generators import BenchSpec, generate

NAIVE = "naive"
DEFAULT_VARIANTS = ("negsel/C=2", "negsel/C=4", "negsel/C=inf")


class BenchValidationError(PlanningError):
    pass


def parse_variant(label: str) -> CompileOptions | str:
    """``naive``, ``base``, ``negsel``, optionally suffixed with ``/C=<n|inf>``."""
    label = label.strip().lower()
    if label == NAIVE:
        return NAIVE
    kind, _, bound = label.partition("/")
    if kind not in ("base", "negsel"):
        raise ValueError(f"unknown variant {label!r}")
    b: float = math.inf
    if bound:
        if not bound.startswith("c="):
            raise ValueError(f"bad bound in {label!r}; expected /C=<n|inf>")
        v = bound[2:]
        b = math.inf if v in ("inf", "oo") else int(v)
    return CompileOptions(neg_in_select=kind == "negsel", bound=b)


def variant_label(v: CompileOptions | str) -> str:
    return v if isinstance(v, str) else v.label


@dataclass
class BenchRow:
    instance: str
    variant: str
    agents: int
    atomic_actions: int
    grounded_actions: int
    status: str
    seconds: float
    makespan: int | None = None
    plan_length: int | None = None
    expansions: int = 0


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)

    COLUMNS = ("instance", "variant", "agents", "atomic_actions", "grounded_actions", "status", "seconds",
               "makespan", "plan_length", "expansions")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.COLUMNS)
        for r in self.rows:
            d = asdict(r)
            w.writerow(["" if d[c] is None else (f"{d[c]:.3f}" if c == "seconds" else d[c]) for c in self.COLUMNS])
        return buf.getvalue()

    def to_text(self) -> str:
        if not self.rows:
            return "(no benchmark cells)\n"
        table = [self.COLUMNS] + [
            tuple("-" if v is None else (f"{v:.2f}" if isinstance(v, float) else str(v)) for v in asdict(r).values())
            for r in self.rows
        ]
        widths = [max(len(row[i]) for row in table) for i in range(len(self.COLUMNS))]
        return "".join("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n" for row in table)


def run_cell(spec: BenchSpec, variant: CompileOptions | str, config: SearchConfig, solve_it: bool = True) -> BenchRow:
    """One matrix cell. Raises BenchValidationError if a returned plan does not validate."""
    t0 = time.perf_counter()
    dom_text, prob_text = generate(spec)
    dom = parse_domain(dom_text, "domain")
    problem, _ = ground(dom, parse_problem(prob_text, dom, "problem"))
    label = variant_label(variant)
    if variant == NAIVE:
        cp = naive_compile(problem)
    else:
        cp = compile_map(problem, variant)
    row = BenchRow(spec.label, label, len(problem.agents), problem.n_actions(), len(cp.actions), "compiled", 0.0)
    if solve_it:
        res = solve(cp, config)
        row.status = res.status
        row.expansions = res.stats.expansions
        if res.solved:
            plan = decode_naive(res.plan, cp) if variant == NAIVE else decode(res.plan, problem, cp)
            report = validate_concurrent(problem, plan)
            if not report.valid:
                raise BenchValidationError(f"{spec.label} [{label}]: decoded plan invalid: {report.failure}")
            row.makespan = len(plan)
            row.plan_length = len(res.plan)
    row.seconds = time.perf_counter() - t0
    return row


def _cell(args):
    return run_cell(*args)


def run_bench(
    specs: list[BenchSpec],
    variants: list[CompileOptions | str],
    config: SearchConfig = SearchConfig(),
    jobs: int = 1,
    solve_it: bool = True,
) -> BenchReport:
    cells = [(s, v, config, solve_it) for s in specs for v in variants]
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_cell, cells))
    else:
        rows = [_cell(c) for c in cells]
    return BenchReport(rows)


def scaling_counts(agent_counts: list[int], naive_limit: int = 6) -> list[dict]:
    """Ground action counts of the maze-scaling instances: compiled vs naive.

    The naive count is only computed up to ``naive_limit`` agents.
    """
    out = []
    for n in agent_counts:
        spec = BenchSpec("maze-scaling", agents=n)
        dom_text, prob_text = generate(spec)
        dom = parse_domain(dom_text)
        t0 = time.perf_counter()
        problem, _ = ground(dom, parse_problem(prob_text, dom))
        cp = compile_map(problem, CompileOptions(bound=math.inf))
        secs = time.perf_counter() - t0
        naive = count_naive(problem) if n <= naive_limit else None
        out.append(
            {"agents": n, "atomic": problem.n_actions(), "compiled": len(cp.actions), "naive": naive,
             "compile_seconds": secs}
        )
    return out
