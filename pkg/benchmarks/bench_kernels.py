"""Compare the compiled and pure-Python search kernels.

Runs the full search on each desk-scale instance with both kernels, checks
they expand the same nodes, and reports wall time and speedup. A second
section times the raw kernel calls (successors, h_add) on a fixed sample of
reachable states.
"""

from __future__ import annotations

import argparse
import random
import statistics
import sys
import time

from concplan.bench.generators import desk_suite, generate
from concplan.bench.runner import parse_variant
from concplan.compiler import compile_map
from concplan.grounding import ground
from concplan.pddl.parser import parse_domain, parse_problem
from concplan.search import PyKernel, SearchConfig, compiled_kernel, solve
from concplan.search.task import build_task


def _compiled(spec, variant):
    d, p = generate(spec)
    dom = parse_domain(d)
    problem, _ = ground(dom, parse_problem(p, dom))
    return compile_map(problem, variant)


def _best_of(fn, repeat):
    times = []
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def _sample_states(task, kernel, n, rng):
    states, s = [], task.init
    while len(states) < n:
        succ = kernel.successors(s)
        if not succ or rng.random() < 0.05:
            s = task.init
            continue
        s = rng.choice(succ)[1]
        states.append(s)
    return states


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--variant", default="negsel/C=inf")
    ap.add_argument("--heuristic", choices=("gc", "add"), default="add")
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--states", type=int, default=500, help="states sampled for the micro benchmark")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    fast = compiled_kernel()
    if fast is None:
        print("compiled kernel not built; run `pip install -e . --no-build-isolation`", file=sys.stderr)
        return 1
    variant = parse_variant(args.variant)

    print(f"search, {args.variant}, h={args.heuristic}, best of {args.repeat}")
    print(f"{'instance':<26} {'exp':>6} {'python s':>9} {'cython s':>9} {'speedup':>8}")
    speedups = []
    for spec in desk_suite():
        cp = _compiled(spec, variant)
        t_py, r_py = _best_of(lambda: solve(cp, SearchConfig(heuristic=args.heuristic, kernel=PyKernel)), args.repeat)
        t_cy, r_cy = _best_of(lambda: solve(cp, SearchConfig(heuristic=args.heuristic, kernel=fast)), args.repeat)
        if (r_py.status, r_py.plan, r_py.stats.expansions) != (r_cy.status, r_cy.plan, r_cy.stats.expansions):
            print(f"{spec.label}: kernels disagree", file=sys.stderr)
            return 2
        speedups.append(t_py / t_cy)
        print(f"{spec.label:<26} {r_py.stats.expansions:>6} {t_py:>9.3f} {t_cy:>9.3f} {t_py / t_cy:>7.1f}x")
    print(f"geometric mean speedup {statistics.geometric_mean(speedups):.1f}x\n")

    print(f"kernel calls on {args.states} sampled states")
    print(f"{'instance':<26} {'succ py us':>10} {'succ cy us':>10} {'h py us':>8} {'h cy us':>8}")
    for spec in desk_suite()[::3]:
        task = build_task(_compiled(spec, variant))
        kp, kc = PyKernel(task), fast(task)
        states = _sample_states(task, kp, args.states, random.Random(args.seed))
        row = []
        for k in (kp, kc):
            t, _ = _best_of(lambda: [k.successors(s) for s in states], args.repeat)
            row.append(t)
        for k in (kp, kc):
            t, _ = _best_of(lambda: [k.h_add(s) for s in states], args.repeat)
            row.append(t)
        us = [1e6 * t / len(states) for t in row]
        print(f"{spec.label:<26} {us[0]:>10.1f} {us[1]:>10.1f} {us[2]:>8.1f} {us[3]:>8.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
