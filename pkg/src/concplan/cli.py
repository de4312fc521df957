"""Command line entry point: ``concplan <command> ...``.

Exit codes: 0 solved/valid, 1 invalid plan, 2 unsolvable, 3 timeout,
4 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path
from types import SimpleNamespace

from . import __version__
from .bench.generators import DOMAIN_NAMES, BenchSpec, SpecError, desk_suite, generate
from .bench.runner import DEFAULT_VARIANTS, NAIVE, parse_variant, run_bench, scaling_counts
from .codec import DecodeError, decode
from .compiler import CompileOptions, compile_map, expected_sizes
from .grounding import GroundingError, ground
from .model import PlanningError
from .pddl.parser import parse_domain, parse_problem
from .pddl.plans import format_concurrent_plan, format_plan, parse_concurrent_plan, parse_plan
from .pddl.sexpr import PddlError
from .pddl.writer import Sidecar, emit_classical_pddl, sidecar
from .search import BACKEND, SearchConfig, solve
from .semantics import validate_concurrent

EXIT_OK, EXIT_INVALID, EXIT_UNSOLVABLE, EXIT_TIMEOUT, EXIT_USAGE = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _bound(text: str) -> float:
    if text.lower() in ("inf", "oo", "infinity"):
        return math.inf
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bound must be a positive integer or 'inf', got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("bound must be at least 1")
    return v


def _options(args) -> CompileOptions:
    return CompileOptions(neg_in_select=args.variant == "negsel", bound=args.bound)


def _search_config(args) -> SearchConfig:
    return SearchConfig(heuristic=args.heuristic, node_cap=args.nodes, timeout=args.timeout, seed=args.seed)


def _load(domain_path: str, problem_path: str):
    dom = parse_domain(Path(domain_path).read_text(encoding="utf-8"), domain_path)
    prob = parse_problem(Path(problem_path).read_text(encoding="utf-8"), dom, problem_path)
    return dom, prob


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def cmd_compile(args) -> int:
    dom, prob = _load(args.domain, args.problem)
    problem, report = ground(dom, prob)
    opts = _options(args)
    cp = compile_map(problem, opts)
    dom_text, prob_text = emit_classical_pddl(cp, domain_name=f"{dom.name}-compiled")
    out = Path(args.output)
    d_path = out / f"{Path(args.domain).stem}-compiled.pddl"
    p_path = out / f"{Path(args.problem).stem}-compiled.pddl"
    s_path = out / f"{Path(args.problem).stem}-compiled.json"
    side = sidecar(cp)
    side["variant"] = opts.label
    _write(d_path, dom_text)
    _write(p_path, prob_text)
    _write(s_path, json.dumps(side, indent=1, sort_keys=True) + "\n")
    nF, nA = expected_sizes(problem, opts)
    print(report.table())
    print(f"variant              {opts.label}")
    print(f"compiled fluents     {len(cp.fluents)} (formula {nF})")
    print(f"compiled actions     {len(cp.actions)} (formula {nA})")
    print(f"wrote {d_path}, {p_path}, {s_path}")
    return EXIT_OK


def cmd_solve(args) -> int:
    dom, prob = _load(args.domain, args.problem)
    problem, _ = ground(dom, prob)
    opts = _options(args)
    cp = compile_map(problem, opts)
    res = solve(cp, _search_config(args))
    st = res.stats
    print(f"; {opts.label} backend={BACKEND} |A'|={len(cp.actions)} status={res.status} "
          f"expansions={st.expansions} time={st.seconds:.2f}s", file=sys.stderr)
    if res.status == "unsolvable":
        print("unsolvable")
        return EXIT_UNSOLVABLE
    if res.status == "timeout":
        print(f"timeout ({res.reason})")
        return EXIT_TIMEOUT
    plan = decode(res.plan, problem, cp)
    report = validate_concurrent(problem, plan)
    if not report.valid:  # pipeline self-check; should never happen
        print(report.to_text(), file=sys.stderr)
        return EXIT_INVALID
    text = format_concurrent_plan(plan)
    print(text, end="")
    print(f"; makespan {len(plan)}, classical length {len(res.plan)}", file=sys.stderr)
    if args.plan_out:
        _write(Path(args.plan_out), text)
    if args.classical_out:
        _write(Path(args.classical_out), format_plan(res.plan))
    return EXIT_OK


def cmd_validate(args) -> int:
    dom, prob = _load(args.domain, args.problem)
    problem, _ = ground(dom, prob)
    plan = parse_concurrent_plan(Path(args.plan).read_text(encoding="utf-8"), problem, args.plan)
    report = validate_concurrent(problem, plan)
    if args.format == "csv":
        print(_records_csv(report.to_records()), end="")
    else:
        print(report.to_text(), end="" if report.to_text().endswith("\n") else "\n")
    return EXIT_OK if report.valid else EXIT_INVALID


def _records_csv(records: list[dict]) -> str:
    import csv
    import io

    # one row per step, then the verdict row in the same columns
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "state_digest", "action", "effect", "verdict"])
    *steps, summary = records
    for r in steps:
        w.writerow([r["index"], r["state_digest"], r["action"], " ".join(r["effect"]), ""])
    failure = summary["failure"]
    detail = "" if failure is None else f"{failure['reason']} at step {failure['step']}: {failure['detail']}"
    w.writerow(["", summary["final_digest"], "", detail, summary["verdict"]])
    return buf.getvalue()


def cmd_decode(args) -> int:
    side_data = json.loads(Path(args.sidecar).read_text(encoding="utf-8"))
    side = Sidecar(side_data)
    text = Path(args.plan).read_text(encoding="utf-8")
    if args.domain and args.problem:
        dom, prob = _load(args.domain, args.problem)
        problem, _ = ground(dom, prob)
        variant = side_data.get("variant")
        opts = parse_variant(variant) if variant else _options(args)
        cp = compile_map(problem, opts)
        plan = parse_plan(text, cp, side, args.plan)
        try:
            cplan = decode(plan, problem, cp)
        except DecodeError as e:
            print(f"decode failed: {e}", file=sys.stderr)
            return EXIT_INVALID
        report = validate_concurrent(problem, cplan)
        print(format_concurrent_plan(cplan), end="")
        if not report.valid:
            print(report.to_text(), file=sys.stderr)
            return EXIT_INVALID
        return EXIT_OK
    plan = parse_plan(text, None, side, args.plan)
    try:
        cplan = decode(plan, None, SimpleNamespace(provenance=side.provenance))
    except DecodeError as e:
        print(f"decode failed: {e}", file=sys.stderr)
        return EXIT_INVALID
    print(format_concurrent_plan(cplan), end="")
    return EXIT_OK


def _spec_from(args, domain: str) -> BenchSpec:
    return BenchSpec(
        domain,
        agents=args.agents,
        width=args.width,
        height=args.height,
        rooms=args.rooms,
        blocks=args.blocks,
        sides=args.sides,
        boxes=tuple(int(b) for b in args.boxes.split(",")) if args.boxes else (1,),
        pallets=args.pallets,
        doors=args.doors,
        seed=args.seed,
    )


def cmd_generate(args) -> int:
    spec = _spec_from(args, args.domain)
    dom_text, prob_text = generate(spec)
    out = Path(args.output)
    _write(out / f"{spec.domain}-domain.pddl", dom_text)
    _write(out / f"{spec.label}.pddl", prob_text)
    print(f"wrote {out / f'{spec.domain}-domain.pddl'} and {out / f'{spec.label}.pddl'}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.scaling:
        counts = [int(x) for x in args.scaling.split(",") if x]
        rows = scaling_counts(counts, naive_limit=args.naive_limit)
        if args.format == "csv":
            print("agents,atomic,compiled,naive,compile_seconds")
            for r in rows:
                naive = "" if r["naive"] is None else r["naive"]
                print(f"{r['agents']},{r['atomic']},{r['compiled']},{naive},{r['compile_seconds']:.3f}")
        else:
            print(f"{'agents':>6}  {'atomic':>6}  {'compiled':>8}  {'naive':>8}  seconds")
            for r in rows:
                naive = "-" if r["naive"] is None else r["naive"]
                print(f"{r['agents']:>6}  {r['atomic']:>6}  {r['compiled']:>8}  {naive:>8}  {r['compile_seconds']:.3f}")
        return EXIT_OK
    specs = desk_suite()
    if args.domains:
        keep = set(args.domains.split(","))
        specs = [s for s in specs if s.domain in keep]
    variants = [parse_variant(v) for v in (args.variants.split(",") if args.variants else DEFAULT_VARIANTS)]
    report = run_bench(specs, variants, _search_config(args), jobs=args.jobs)
    print(report.to_csv() if args.format == "csv" else report.to_text(), end="")
    return EXIT_OK


def _add_compile_flags(p):
    p.add_argument("--variant", choices=("base", "negsel"), default="negsel",
                   help="check negative concurrency constraints at selection (negsel) or application (base)")
    p.add_argument("--bound", type=_bound, default=math.inf, metavar="C|inf",
                   help="maximum joint action size (default: inf)")


def _add_search_flags(p):
    p.add_argument("--heuristic", choices=("gc", "add"), default="add")
    p.add_argument("--timeout", type=float, default=300.0, help="seconds (default: 300)")
    p.add_argument("--nodes", type=int, default=1_000_000, help="node cap (default: 1e6)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="concplan", description="Concurrent multiagent planning via compilation to classical planning")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("compile", help="MA-PDDL -> classical PDDL plus provenance sidecar")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("-o", "--output", default=".", help="output directory")
    _add_compile_flags(p)
    p.set_defaults(func=cmd_compile)

    p = sub.add_parser("solve", help="compile, search, decode and validate; prints the concurrent plan")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("--plan-out", help="also write the concurrent plan here")
    p.add_argument("--classical-out", help="write the classical plan here")
    _add_compile_flags(p)
    _add_search_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("validate", help="check a concurrent plan file against a multiagent problem")
    p.add_argument("domain")
    p.add_argument("problem")
    p.add_argument("plan")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("decode", help="classical plan file + sidecar -> concurrent plan")
    p.add_argument("sidecar")
    p.add_argument("plan")
    p.add_argument("--domain", help="original domain, enables interference and validity checks")
    p.add_argument("--problem", help="original problem")
    _add_compile_flags(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("generate", help="write a benchmark instance")
    p.add_argument("domain", choices=DOMAIN_NAMES)
    p.add_argument("-o", "--output", default=".")
    p.add_argument("--agents", type=int, default=2)
    p.add_argument("--width", type=int, default=2)
    p.add_argument("--height", type=int, default=2)
    p.add_argument("--rooms", type=int, default=2)
    p.add_argument("--blocks", type=int, default=1)
    p.add_argument("--sides", type=int, default=2)
    p.add_argument("--boxes", default="1", help="comma separated box sizes (1-3)")
    p.add_argument("--pallets", type=int, default=1)
    p.add_argument("--doors", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run the desk-scale matrix or the maze scaling counts")
    p.add_argument("--domains", help="comma separated subset of domains")
    p.add_argument("--variants", help=f"comma separated, e.g. {','.join(DEFAULT_VARIANTS)},{NAIVE}")
    p.add_argument("--scaling", help="agent counts for the maze-scaling table, e.g. 2,4,6,50")
    p.add_argument("--naive-limit", type=int, default=6)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--format", choices=("text", "csv"), default="text")
    _add_search_flags(p)
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (PddlError, GroundingError, SpecError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except PlanningError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
