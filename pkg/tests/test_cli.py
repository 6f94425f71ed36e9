import json
import subprocess
import sys

import pytest

from helpers import chain, task, ten_task_trace, trace
from wfsynth.cli import main
from wfsynth.trace import dump_trace, serialize_trace


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture
def valid_trace(tmp_path):
    p = tmp_path / "t.json"
    dump_trace(ten_task_trace(), p)
    return p


def test_validate_ok(valid_trace, capsys):
    assert run("validate", valid_trace) == 0
    assert capsys.readouterr().out == ""


def test_validate_cycle(tmp_path, capsys):
    p = tmp_path / "c.json"
    dump_trace(trace(task("a", parents=["b"]), task("b", parents=["a"])), p)
    assert run("validate", p) == 1
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 1
    code, path, msg = lines[0].split("\t")
    assert code == "CYCLE" and path.startswith("/tasks/") and msg


def test_validate_syntax_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text('{"name": "w", "schemaVersion": "1.0", "tasks": [{"id": "a"}]}')
    assert run("validate", p) == 1
    assert capsys.readouterr().out.startswith("SYNTAX\t/tasks/0/runtimeSeconds\t")


def test_validate_missing_file(tmp_path):
    assert run("validate", tmp_path / "nope.json") == 3


def test_analyze(tmp_path, capsys):
    from wfsynth.recipes.generator import GenerationConfig, generate
    paths = []
    for seed in (1, 2):
        p = tmp_path / f"g{seed}.json"
        dump_trace(generate(GenerationConfig("seismology", 40, seed)), p)
        paths.append(p)
    out = tmp_path / "summary.json"
    assert run("analyze", *paths, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert set(doc["sG1IterDecon"]) == {"runtime", "inputSize", "outputSize"}


def test_analyze_constant_runtime_warns(tmp_path, capsys):
    p = tmp_path / "c.json"
    dump_trace(chain(5), p)
    assert run("analyze", p) == 0
    captured = capsys.readouterr()
    assert "runtime" in captured.err and "omitted" in captured.err
    assert "runtime" not in json.loads(captured.out)["t"]


def test_analyze_without_inputs_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("analyze")
    assert exc.value.code == 2


def test_generate_and_pipeline(tmp_path, capsys):
    t1, t2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run("generate", "--recipe", "seismology", "--max-tasks", 101, "--seed", 7, "--out", t1) == 0
    assert run("generate", "--recipe", "seismology", "--max-tasks", 101, "--seed", 7, "--out", t2) == 0
    assert t1.read_bytes() == t2.read_bytes()
    assert len(json.loads(t1.read_text())["tasks"]) == 101
    assert run("validate", t1) == 0
    r = tmp_path / "r.json"
    assert run("simulate", t1, "--out", r, "--csv", tmp_path / "r.csv") == 0
    assert json.loads(r.read_text())["makespanSec"] > 0
    assert (tmp_path / "r.csv").read_text().startswith("id,submit,start,completion\n")


def test_generate_bound_too_small(capsys):
    assert run("generate", "--recipe", "seismology", "--max-tasks", 1, "--seed", 1) == 4
    assert "at least 2" in capsys.readouterr().err


def test_generate_without_seed_reports_it(tmp_path, capsys):
    out = tmp_path / "t.json"
    assert run("generate", "--recipe", "montage", "--max-tasks", 30, "--out", out) == 0
    err = capsys.readouterr().err
    seed = int(err.strip().rsplit(" ", 1)[1])
    again = tmp_path / "again.json"
    assert run("generate", "--recipe", "montage", "--max-tasks", 30, "--seed", seed, "--out", again) == 0
    assert out.read_bytes() == again.read_bytes()


def test_generate_with_summary_override(tmp_path):
    from wfsynth.recipes.builtin import bundled_summaries_text
    doc = json.loads(bundled_summaries_text("seismology"))
    rt = doc["sG1IterDecon"]["runtime"]
    rt["min"] = rt["max"] = 3.0
    s = tmp_path / "s.json"
    s.write_text(json.dumps(doc))
    out = tmp_path / "t.json"
    assert run("generate", "--recipe", "seismology", "--max-tasks", 10, "--seed", 1,
               "--summaries", s, "--out", out) == 0
    tasks = json.loads(out.read_text())["tasks"]
    assert {t["runtimeSeconds"] for t in tasks if t["category"] == "sG1IterDecon"} == {3.0}
    assert run("generate", "--recipe", "seismology", "--max-tasks", 10, "--seed", 1,
               "--summaries", tmp_path / "missing.json") == 3


@pytest.mark.parametrize("tasks,expected", [
    ([task("a", 10)], 10.0),
    (list(chain(3).tasks), 30.0),
])
def test_simulate_examples(tmp_path, capsys, tasks, expected):
    p = tmp_path / "t.json"
    dump_trace(trace(*tasks), p)
    assert run("simulate", p) == 0
    assert json.loads(capsys.readouterr().out)["makespanSec"] == expected


def test_simulate_unschedulable(tmp_path, capsys):
    p = tmp_path / "t.json"
    dump_trace(trace(task("big", 1, cores=64)), p)
    assert run("simulate", p, "--cores", 48) == 4
    assert "big" in capsys.readouterr().err


def test_simulate_rejects_invalid_trace(tmp_path):
    p = tmp_path / "t.json"
    dump_trace(trace(task("a", parents=["ghost"])), p)
    assert run("simulate", p) == 1


def test_simulate_bad_platform_is_usage_error(valid_trace):
    assert run("simulate", valid_trace, "--cores", 0) == 2


def _results(tmp_path, specs):
    paths = []
    for i, (recipe, n, seed) in enumerate(specs):
        t, r = tmp_path / f"t{i}.json", tmp_path / f"r{i}.json"
        assert run("generate", "--recipe", recipe, "--max-tasks", n, "--seed", seed, "--out", t) == 0
        assert run("simulate", t, "--out", r) == 0
        paths.append(r)
    return paths


def test_compare_two_results(tmp_path, capsys):
    a, b = _results(tmp_path, [("seismology", 101, 1), ("seismology", 1000, 2)])
    capsys.readouterr()
    assert run("compare", a, b, "--ecdf-prefix", tmp_path / "e-") == 0
    report = json.loads(capsys.readouterr().out)
    assert report["normalizedCompletionRmse"] <= 0.10
    assert report["taskCounts"] == [101, 1000]
    assert (tmp_path / "e-a-completion-normalized.csv").read_text().startswith("value,probability\n")
    assert run("compare", a, a) == 0
    same = json.loads(capsys.readouterr().out)
    assert same["submitRmse"] == same["normalizedCompletionRmse"] == 0


def test_compare_runs_average(tmp_path, capsys):
    (ref,) = _results(tmp_path, [("seismology", 101, 1)])
    capsys.readouterr()
    assert run("compare", ref, "--runs", 3, "--recipe", "seismology", "--max-tasks", 500, "--seed", 10) == 0
    avg = json.loads(capsys.readouterr().out)
    from wfsynth.metrics import compare
    from wfsynth.recipes.generator import GenerationConfig, generate
    from wfsynth.sim import load_result, simulate
    reference = load_result(ref)
    singles = [compare(reference, simulate(generate(GenerationConfig("seismology", 500, 10 + i))))
               for i in range(3)]
    assert avg["completionRmse"] == pytest.approx(sum(r.completion_rmse for r in singles) / 3, rel=1e-12)


def test_compare_usage_errors(tmp_path):
    (ref,) = _results(tmp_path, [("montage", 30, 1)])
    assert run("compare", ref) == 2
    assert run("compare", ref, "--runs", 2) == 2
    assert run("compare", ref, tmp_path / "missing.json") == 3


def test_console_entry_point(tmp_path):
    out = subprocess.run([sys.executable, "-m", "wfsynth.cli", "generate", "--recipe", "soykb",
                          "--max-tasks", "50", "--seed", "3"], capture_output=True, text=True)
    assert out.returncode == 0
    from wfsynth.recipes.generator import GenerationConfig, generate
    assert out.stdout == serialize_trace(generate(GenerationConfig("soykb", 50, 3)))
