from __future__ import annotations

import math

import pytest

from concplan.bench.generators import DOMAIN_NAMES, BenchSpec, SpecError, desk_suite, tablemover_example, generate, with_seed
from concplan.bench.runner import (
    DEFAULT_VARIANTS,
    NAIVE,
    BenchReport,
    parse_variant,
    run_bench,
    scaling_counts,
)
from concplan.compiler import CompileOptions
from concplan.grounding import ground
from concplan.pddl.parser import parse_domain, parse_problem


def _ground(spec):
    d, p = generate(spec)
    dom = parse_domain(d)
    return ground(dom, parse_problem(p, dom))[0]


def test_generators_pure():
    for spec in desk_suite():
        assert generate(spec) == generate(spec)


def test_seed_changes_layout():
    spec = BenchSpec("maze", agents=2, width=3, height=3, seed=1)
    assert generate(spec) != generate(with_seed(spec, 2))


def test_tablemover_default_is_example():
    problem = _ground(BenchSpec("tablemover", agents=2, rooms=2, blocks=1))
    assert generate(BenchSpec("tablemover", agents=2, rooms=2, blocks=1)) == tablemover_example()
    assert problem.agents == ("a1", "a2")
    init = {str(a) for a in problem.init.true_atoms}
    assert {"(inroom a1 r1)", "(inroom a2 r1)", "(inroom b1 r1)", "(on-floor b1)", "(down s1)", "(down s2)"} <= init
    assert {str(l) for l in problem.goal} == {"(inroom b1 r2)", "(not (dropped))"}


def test_maze_scaling_layout():
    for n in (2, 4):
        problem = _ground(BenchSpec("maze-scaling", agents=n))
        init = {str(a) for a in problem.init.true_atoms}
        assert all(f"(at a{i} c00)" in init for i in range(1, n + 1))
        assert {str(l) for l in problem.goal} == {f"(at a{i} c22)" for i in range(1, n + 1)}
        schemas = {a.id.schema for a in problem.all_actions()}
        assert schemas == {"row", "cross-bridge"}


@pytest.mark.parametrize(
    "kw",
    [
        dict(domain="chess"),
        dict(domain="maze", agents=0),
        dict(domain="boxpushing", boxes=(4,)),
        dict(domain="maze", width=0),
    ],
)
def test_invalid_specs(kw):
    with pytest.raises(SpecError):
        generate(BenchSpec(**kw))


def test_domain_names():
    assert set(DOMAIN_NAMES) == {"maze", "tablemover", "workshop", "boxpushing", "maze-scaling"}


def test_desk_suite_shape():
    suite = desk_suite()
    assert len(suite) >= 10
    assert {s.domain for s in suite} >= {"maze", "tablemover", "workshop", "boxpushing"}
    assert all(s.agents <= 3 and s.width <= 3 and s.height <= 3 for s in suite)


@pytest.mark.parametrize(
    "label,expect",
    [
        ("naive", NAIVE),
        ("base", CompileOptions()),
        ("negsel/C=4", CompileOptions(neg_in_select=True, bound=4)),
        ("negsel/C=inf", CompileOptions(neg_in_select=True, bound=math.inf)),
    ],
)
def test_parse_variant(label, expect):
    assert parse_variant(label) == expect


def test_parse_variant_bad():
    for bad in ("fancy", "base/K=2", "negsel/C=x"):
        with pytest.raises(ValueError):
            parse_variant(bad)


def test_empty_matrix():
    report = run_bench([], [parse_variant(v) for v in DEFAULT_VARIANTS])
    assert report.rows == []
    assert report.to_csv().strip() == ",".join(BenchReport.COLUMNS)


def test_matrix_rows_and_invariants():
    specs = desk_suite()[:3]
    variants = [parse_variant(v) for v in DEFAULT_VARIANTS]
    report = run_bench(specs, variants)
    assert [(r.instance, r.variant) for r in report.rows] == [(s.label, v.label) for s in specs for v in variants]
    for r in report.rows:
        if r.status == "solved":
            assert r.makespan <= r.plan_length
    lines = report.to_csv().splitlines()
    assert len(lines) == 1 + len(report.rows)
    assert "instance" in report.to_text().splitlines()[0]


def test_naive_variant_in_matrix():
    report = run_bench([BenchSpec("maze-scaling", agents=2)], [NAIVE, parse_variant("negsel")])
    naive, comp = report.rows
    assert naive.status == comp.status == "solved"
    assert naive.grounded_actions != comp.grounded_actions


def test_parallel_matches_serial():
    specs = desk_suite()[:2]
    variants = [parse_variant("negsel/C=inf")]
    a = run_bench(specs, variants, jobs=1)
    b = run_bench(specs, variants, jobs=2)
    key = lambda r: (r.instance, r.variant, r.status, r.makespan, r.plan_length, r.expansions)
    assert list(map(key, a.rows)) == list(map(key, b.rows))


def test_scaling_counts():
    rows = scaling_counts([2, 4, 6, 8], naive_limit=6)
    assert [r["naive"] is None for r in rows] == [False, False, False, True]
    for r in rows:
        assert r["compiled"] == 4 + 3 * r["atomic"]
    naive = [r["naive"] for r in rows[:3]]
    assert naive == sorted(naive) and len(set(naive)) == 3
