"""Small builders shared by the test modules."""

import json

from wfsynth.trace import FileLink, FileSpec, TaskSpec, WorkflowTrace


def task(tid, runtime=10.0, parents=(), files=(), cores=1, category="t"):
    return TaskSpec(id=tid, name=tid, category=category, runtime_seconds=runtime,
                    cores=cores, parents=tuple(parents), files=tuple(files))


def out_file(name, size=0):
    return FileSpec(name, size, FileLink.OUTPUT)


def in_file(name, size=0):
    return FileSpec(name, size, FileLink.INPUT)


def trace(*tasks, name="test"):
    return WorkflowTrace(name=name, tasks=tuple(tasks))


def chain(n, runtime=10.0, size=0):
    """t0 -> t1 -> ... with one data file per edge."""
    tasks = []
    for i in range(n):
        files = [out_file(f"f{i}", size)]
        if i:
            files.insert(0, in_file(f"f{i - 1}", size))
        tasks.append(task(f"t{i}", runtime, [f"t{i - 1}"] if i else [], files))
    return trace(*tasks)


def ten_task_trace():
    """Valid 10-task diamond-ish DAG with consistent data edges."""
    t = [task("a", files=[in_file("raw"), out_file("a.out", 5)])]
    for k in "bcd":
        t.append(task(k, parents=["a"], files=[in_file("a.out", 5), out_file(f"{k}.out", 3)]))
    for k, p in zip("efg", "bcd"):
        t.append(task(k, parents=[p], files=[in_file(f"{p}.out", 3), out_file(f"{k}.out", 2)]))
    t.append(task("h", parents=list("efg"),
                  files=[in_file(f"{k}.out", 2) for k in "efg"] + [out_file("h.out", 1)]))
    t.append(task("i", parents=["h"], files=[in_file("h.out", 1), out_file("i.out", 1)]))
    t.append(task("j", parents=["i"], files=[in_file("i.out", 1)]))
    return trace(*t)


def minimal_doc(tasks=()):
    return json.dumps({"name": "w", "schemaVersion": "1.0", "tasks": list(tasks)})


# one representative legal spec per family, plus a published-style skewnorm runtime summary
FAMILY_SPECS = {
    "alpha": (3.0, 1.0, 2.0),
    "argus": (1.5, -1.0, 4.0),
    "beta": (2.5, 1.5, 0.0, 3.0),
    "chi": (3.0, 0.5, 1.5),
    "chi2": (4.0, 0.0, 1.0),
    "cosine": (2.0, 1.5),
    "dweibull": (1.8, 5.0, 2.0),
    "fisk": (4.0, 0.0, 3.0),
    "gamma": (3.0, 0.0, 2.0),
    "levy": (0.0, 1.0),
    "pareto": (3.0, 0.0, 1.0),
    "rayleigh": (1.0, 2.0),
    "rdist": (3.0, 0.0, 2.0),
    "skewnorm": (4.0, 10.0, 3.0),
    "trapz": (0.2, 0.7, 1.0, 4.0),
    "triang": (0.3, 2.0, 5.0),
    "uniform": (2.0, 5.0),
    "wald": (0.5, 2.0),
}
EXAMPLE_RUNTIME = {
    "min": 48.846, "max": 192.232,
    "distribution": {"name": "skewnorm",
                     "params": [11115267.652937062, -2.9628504044929433e-05, 56.03957070238482]},
}


def recovers_family(family, samples, candidates):
    """Winner is ``family``, or a documented near-equivalent whose CDF agrees
    with ``family``'s own fit to within MSE 1e-4 over the sample."""
    from wfsynth.stats.fitting import NEAR_EQUIVALENT, cdf_gap
    best = min(candidates, key=lambda r: r.mse)
    if best.spec.family == family:
        return True
    own = next(r for r in candidates if r.spec.family == family)
    return (frozenset((family, best.spec.family)) in NEAR_EQUIVALENT
            and cdf_gap(best.spec, own.spec, samples) < 1e-4 and own.mse < 1e-3)
