from __future__ import annotations

import json
import subprocess
import sys

import pytest

from concplan.bench.generators import BenchSpec, tablemover_example, generate
from concplan.cli import main
from concplan.pddl.writer import SIDECAR_FORMAT

from conftest import SIX_STEP_PLAN


@pytest.fixture
def files(tmp_path):
    d, p = tablemover_example()
    (tmp_path / "tm-domain.pddl").write_text(d)
    (tmp_path / "tm.pddl").write_text(p)
    (tmp_path / "six.plan").write_text(SIX_STEP_PLAN)
    return tmp_path


def run(*args):
    return main([str(a) for a in args])


def test_compile_writes_files(files, capsys):
    assert run("compile", files / "tm-domain.pddl", files / "tm.pddl", "-o", files / "out") == 0
    out = files / "out"
    assert (out / "tm-compiled.pddl").exists() and (out / "tm-compiled.pddl").exists()
    side = json.loads((out / "tm-compiled.json").read_text())
    assert side["format"] == SIDECAR_FORMAT and side["variant"] == "negsel/C=inf"
    text = capsys.readouterr().out
    assert "compiled actions     148 (formula 148)" in text


def test_compile_bounded_base(files, capsys):
    assert run("compile", files / "tm-domain.pddl", files / "tm.pddl", "-o", files, "--variant", "base", "--bound", "2") == 0
    assert "compiled actions     244 (formula 244)" in capsys.readouterr().out


def test_solve_and_validate(files, capsys):
    plan = files / "found.plan"
    assert run("solve", files / "tm-domain.pddl", files / "tm.pddl", "--plan-out", plan, "--heuristic", "gc") == 0
    printed = capsys.readouterr().out
    assert printed == plan.read_text()
    assert run("validate", files / "tm-domain.pddl", files / "tm.pddl", plan) == 0


def test_validate_six_step_plan(files, capsys):
    assert run("validate", files / "tm-domain.pddl", files / "tm.pddl", files / "six.plan") == 0
    assert "VALID" in capsys.readouterr().out


def test_validate_invalid_exit_1(files, capsys):
    broken = files / "broken.plan"
    broken.write_text(SIX_STEP_PLAN.replace("(lift-side a1 s2)(lift-side a2 s1)", "(lift-side a1 s2)"))
    assert run("validate", files / "tm-domain.pddl", files / "tm.pddl", broken) == 1
    assert run("validate", files / "tm-domain.pddl", files / "tm.pddl", broken, "--format", "csv") == 1
    assert capsys.readouterr().out.splitlines()[-1].endswith(",invalid")


def test_unsolvable_exit_2(tmp_path, capsys):
    d, p = generate(BenchSpec("boxpushing", agents=3, width=3, height=1, boxes=(3,)))
    (tmp_path / "d.pddl").write_text(d)
    (tmp_path / "p.pddl").write_text(p)
    assert run("solve", tmp_path / "d.pddl", tmp_path / "p.pddl", "--bound", "2") == 2
    assert run("solve", tmp_path / "d.pddl", tmp_path / "p.pddl", "--bound", "4") == 0


def test_timeout_exit_3(files):
    assert run("solve", files / "tm-domain.pddl", files / "tm.pddl", "--nodes", "3") == 3


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["solve"],
        ["solve", "a", "b", "--bound", "zero"],
        ["solve", "a", "b", "--heuristic", "ff"],
        ["frobnicate"],
    ],
)
def test_usage_errors_exit_4(argv):
    with pytest.raises(SystemExit) as ei:
        main(argv)
    assert ei.value.code == 4


def test_parse_error_exit_4(files, capsys):
    (files / "bad.pddl").write_text("(define (domain x)\n (:predicates (p)")
    assert run("solve", files / "bad.pddl", files / "tm.pddl") == 4
    assert "error" in capsys.readouterr().err
    assert run("solve", files / "missing.pddl", files / "tm.pddl") == 4


def test_decode_external_plan(files, capsys):
    # classical plan in the emitted (mangled, 0-ary) names, as an external planner would print it
    from concplan.codec import encode
    from concplan.compiler import CompileOptions, compile_map
    from concplan.grounding import ground
    from concplan.pddl.parser import parse_domain, parse_problem
    from concplan.pddl.plans import parse_concurrent_plan
    from concplan.pddl.writer import mangled_names

    assert run("compile", files / "tm-domain.pddl", files / "tm.pddl", "-o", files / "out") == 0
    capsys.readouterr()
    dom = parse_domain((files / "tm-domain.pddl").read_text())
    problem, _ = ground(dom, parse_problem((files / "tm.pddl").read_text(), dom))
    opts = CompileOptions(neg_in_select=True)
    cp = compile_map(problem, opts)
    names = mangled_names(cp)
    classical = encode(parse_concurrent_plan(SIX_STEP_PLAN, problem), problem, cp, opts)
    (files / "ext.plan").write_text("".join(f"({names[a]})\n" for a in classical) + "; cost = 51\n")
    side = files / "out" / "tm-compiled.json"
    assert run("decode", side, files / "ext.plan") == 0
    assert capsys.readouterr().out == SIX_STEP_PLAN
    assert run("decode", side, files / "ext.plan", "--domain", files / "tm-domain.pddl", "--problem", files / "tm.pddl") == 0
    assert capsys.readouterr().out == SIX_STEP_PLAN
    # truncated plan: decodes structurally but does not reach the goal
    lines = (files / "ext.plan").read_text().splitlines()
    (files / "short.plan").write_text("\n".join(lines[:10]) + "\n")
    assert run("decode", side, files / "short.plan", "--domain", files / "tm-domain.pddl", "--problem", files / "tm.pddl") == 1


def test_generate_and_bench(tmp_path, capsys):
    assert run("generate", "boxpushing", "-o", tmp_path, "--agents", "2", "--boxes", "1,2") == 0
    assert (tmp_path / "boxpushing-domain.pddl").exists()
    assert run("bench", "--scaling", "2,4", "--format", "csv") == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-2:] == [l for l in out[-2:] if l.count(",") == 4]
    assert run("bench", "--domains", "tablemover", "--variants", "negsel/C=2", "--format", "csv") == 0
    rows = capsys.readouterr().out.strip().splitlines()
    assert len(rows) == 3 and all(",solved," in r for r in rows[1:])


def test_module_entry_point(files):
    r = subprocess.run(
        [sys.executable, "-m", "concplan.cli", "validate", files / "tm-domain.pddl", files / "tm.pddl", files / "six.plan"],
        capture_output=True,
        text=True,
    )
    assert r.returncode == 0 and "VALID" in r.stdout
