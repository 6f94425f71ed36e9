"""Discrete-event execution of a trace on a homogeneous multicore cluster.

A task is submitted the instant its last parent completes (sources at 0).
Ready tasks are kept in (submit time, topological rank, id) order and, at
every event instant, each one that fits is started on the first node with
enough free cores, so no task waits while capacity it could use is idle.
A task occupies its cores for

    in_bytes / bw + latency * n_in + runtime / speed + out_bytes / bw + latency * n_out

Transfers are uncontended and happen in series with the compute phase.
"""

from __future__ import annotations

import bisect
import csv
import heapq
import io
import json
from dataclasses import dataclass

from wfsynth.trace import WorkflowTrace, topological_order

GBPS = 1.25e8  # bytes per second in one Gbit/s

DEFAULT_NODES = 1
DEFAULT_CORES = 48
DEFAULT_BANDWIDTH = 10 * GBPS
DEFAULT_SPEED = 1.0


class SimulationError(RuntimeError):
    pass


class UnschedulableTask(SimulationError):
    def __init__(self, task_id: str, cores: int, capacity: int):
        self.task_id = task_id
        super().__init__(f"task {task_id!r} needs {cores} cores but nodes have {capacity}")


@dataclass(frozen=True)
class PlatformSpec:
    node_count: int = DEFAULT_NODES
    cores_per_node: int = DEFAULT_CORES
    speed_factor: float = DEFAULT_SPEED
    fs_bandwidth_bytes_per_sec: float = DEFAULT_BANDWIDTH
    per_file_latency_sec: float = 0.0

    def __post_init__(self):
        if self.node_count < 1 or self.cores_per_node < 1:
            raise ValueError("node and core counts must be positive")
        if not self.speed_factor > 0 or not self.fs_bandwidth_bytes_per_sec > 0:
            raise ValueError("speed factor and bandwidth must be positive")
        if self.per_file_latency_sec < 0:
            raise ValueError("per-file latency must be non-negative")


@dataclass(frozen=True)
class TaskTimeline:
    task_id: str
    submit_sec: float
    start_sec: float
    completion_sec: float
    node: int | None = None


@dataclass(frozen=True)
class SimulationResult:
    timelines: tuple[TaskTimeline, ...]
    makespan_sec: float

    def to_dict(self) -> dict:
        return {
            "makespanSec": self.makespan_sec,
            "tasks": [{"id": t.task_id, "submitSec": t.submit_sec, "startSec": t.start_sec,
                       "completionSec": t.completion_sec} for t in self.timelines],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2, allow_nan=False) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["id", "submit", "start", "completion"])
        for t in self.timelines:
            w.writerow([t.task_id, repr(t.submit_sec), repr(t.start_sec), repr(t.completion_sec)])
        return buf.getvalue()

    @classmethod
    def from_dict(cls, d: dict) -> "SimulationResult":
        rows = tuple(TaskTimeline(r["id"], float(r["submitSec"]), float(r["startSec"]),
                                  float(r["completionSec"])) for r in d["tasks"])
        return cls(rows, float(d["makespanSec"]))

    @classmethod
    def from_json(cls, text: str) -> "SimulationResult":
        return cls.from_dict(json.loads(text))


def task_duration(task, platform: PlatformSpec) -> float:
    bw = platform.fs_bandwidth_bytes_per_sec
    lat = platform.per_file_latency_sec
    ins, outs = task.input_files, task.output_files
    return (sum(f.size_bytes for f in ins) / bw + lat * len(ins)
            + task.runtime_seconds / platform.speed_factor
            + sum(f.size_bytes for f in outs) / bw + lat * len(outs))


def simulate(trace: WorkflowTrace, platform: PlatformSpec | None = None) -> SimulationResult:
    platform = platform or PlatformSpec()
    tasks = trace.task_map()
    for t in trace.tasks:
        if t.cores > platform.cores_per_node:
            raise UnschedulableTask(t.id, t.cores, platform.cores_per_node)
        for p in t.parents:
            if p not in tasks:
                raise SimulationError(f"task {t.id!r} has unknown parent {p!r}")
    order = topological_order(trace)
    rank = {tid: i for i, tid in enumerate(order)}

    children: dict[str, list[str]] = {tid: [] for tid in tasks}
    waiting = {}
    for t in trace.tasks:
        ps = set(t.parents)
        waiting[t.id] = len(ps)
        for p in ps:
            children[p].append(t.id)
    duration = {tid: task_duration(t, platform) for tid, t in tasks.items()}

    free = [platform.cores_per_node] * platform.node_count
    submit: dict[str, float] = {}
    start: dict[str, float] = {}
    finish: dict[str, float] = {}
    node_of: dict[str, int] = {}

    ready: list[tuple[float, int, str]] = []
    for tid in order:
        if waiting[tid] == 0:
            submit[tid] = 0.0
            ready.append((0.0, rank[tid], tid))
    ready.sort()

    running: list[tuple[float, int, str]] = []
    now = 0.0

    def dispatch():
        nonlocal ready
        if not ready:
            return
        max_free = max(free)
        kept = []
        for i, entry in enumerate(ready):
            if max_free == 0:
                kept.extend(ready[i:])
                break
            tid = entry[2]
            need = tasks[tid].cores
            if need > max_free:
                kept.append(entry)
                continue
            node = next(n for n, c in enumerate(free) if c >= need)
            free[node] -= need
            max_free = max(free)
            start[tid] = now
            node_of[tid] = node
            end = now + duration[tid]
            heapq.heappush(running, (end, rank[tid], tid))
        ready = kept

    dispatch()
    while running:
        now = running[0][0]
        while running and running[0][0] == now:
            _, _, tid = heapq.heappop(running)
            finish[tid] = now
            free[node_of[tid]] += tasks[tid].cores
            for c in children[tid]:
                waiting[c] -= 1
                if waiting[c] == 0:
                    submit[c] = now
                    bisect.insort(ready, (now, rank[c], c))
        dispatch()

    if len(finish) != len(tasks):
        raise SimulationError("simulation stalled before every task completed")
    rows = tuple(TaskTimeline(t.id, submit[t.id], start[t.id], finish[t.id], node_of[t.id])
                 for t in trace.tasks)
    return SimulationResult(rows, max((r.completion_sec for r in rows), default=0.0))


def makespan(result: SimulationResult) -> float:
    if not result.timelines:
        raise ValueError("makespan of an empty result")
    return max(t.completion_sec for t in result.timelines)


def load_result(path) -> SimulationResult:
    with open(path, encoding="utf-8") as fh:
        return SimulationResult.from_json(fh.read())
