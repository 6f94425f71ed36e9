"""Canonical workflow trace model: records, JSON I/O, validation and ordering.

Times are seconds and sizes are bytes throughout.  Records are frozen
dataclasses holding tuples, so a parsed trace can be shared freely.
"""

from __future__ import annotations

import heapq
import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable, Mapping

SCHEMA_VERSION = "1.0"

_SUFFIX_RE = re.compile(r"_\d+$")


class ViolationCode(str, Enum):
    SYNTAX = "SYNTAX"
    DUPLICATE_ID = "DUPLICATE_ID"
    UNKNOWN_PARENT = "UNKNOWN_PARENT"
    CYCLE = "CYCLE"
    FILE_INCONSISTENT = "FILE_INCONSISTENT"
    UNKNOWN_MACHINE = "UNKNOWN_MACHINE"
    NEGATIVE_VALUE = "NEGATIVE_VALUE"


@dataclass(frozen=True)
class Violation:
    code: ViolationCode
    message: str
    path: str = ""

    def format(self) -> str:
        return f"{self.code.value}\t{self.path}\t{self.message}"


class TraceError(ValueError):
    """Raised when a document cannot be turned into a trace."""

    def __init__(self, violations: Iterable[Violation]):
        self.violations = list(violations)
        super().__init__("; ".join(f"{v.path}: {v.message}" for v in self.violations))


class CycleError(TraceError):
    pass


class FileLink(str, Enum):
    INPUT = "input"
    OUTPUT = "output"


@dataclass(frozen=True)
class FileSpec:
    name: str
    size_bytes: int
    link: FileLink
    extras: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class MachineSpec:
    node_name: str
    cores: int
    cpu_speed_mhz: float | None = None
    memory_bytes: int | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class TaskSpec:
    id: str
    name: str
    category: str
    runtime_seconds: float
    cores: int = 1
    memory_bytes: int | None = None
    energy_joules: float | None = None
    machine: str | None = None
    parents: tuple[str, ...] = ()
    files: tuple[FileSpec, ...] = ()
    extras: Mapping[str, Any] = field(default_factory=dict)

    @property
    def input_files(self) -> tuple[FileSpec, ...]:
        return tuple(f for f in self.files if f.link is FileLink.INPUT)

    @property
    def output_files(self) -> tuple[FileSpec, ...]:
        return tuple(f for f in self.files if f.link is FileLink.OUTPUT)

    @property
    def input_bytes(self) -> int:
        return sum(f.size_bytes for f in self.input_files)

    @property
    def output_bytes(self) -> int:
        return sum(f.size_bytes for f in self.output_files)


@dataclass(frozen=True)
class WorkflowTrace:
    name: str
    tasks: tuple[TaskSpec, ...] = ()
    machines: tuple[MachineSpec, ...] = ()
    schema_version: str = SCHEMA_VERSION
    description: str | None = None
    wms: str | None = None
    executed_at: str | None = None
    makespan_seconds: float | None = None
    extras: Mapping[str, Any] = field(default_factory=dict)

    def task_map(self) -> dict[str, TaskSpec]:
        return {t.id: t for t in self.tasks}


def category_from_name(name: str) -> str:
    """Task type implied by a task name, e.g. ``individuals_000012`` -> ``individuals``."""
    return _SUFFIX_RE.sub("", name)


# --------------------------------------------------------------------------
# parsing

_TRACE_KEYS = {"name", "description", "schemaVersion", "wms", "executedAt",
               "makespanSeconds", "machines", "tasks"}
_TASK_KEYS = {"id", "name", "category", "runtimeSeconds", "cores", "memoryBytes",
              "energyJoules", "machine", "parents", "files"}
_FILE_KEYS = {"name", "sizeBytes", "link"}
_MACHINE_KEYS = {"nodeName", "cores", "cpuSpeedMHz", "memoryBytes"}

UNKNOWN_MODES = ("ignore", "keep", "reject")


class _Reader:
    def __init__(self, unknown: str):
        if unknown not in UNKNOWN_MODES:
            raise ValueError(f"unknown-field mode must be one of {UNKNOWN_MODES}")
        self.unknown = unknown
        self.errors: list[Violation] = []

    def fail(self, path: str, message: str) -> None:
        self.errors.append(Violation(ViolationCode.SYNTAX, message, path))

    def obj(self, value: Any, path: str) -> dict | None:
        if not isinstance(value, dict):
            self.fail(path, "expected an object")
            return None
        return value

    def extras(self, obj: dict, known: set[str], path: str) -> dict:
        unknown = sorted(set(obj) - known)
        if not unknown or self.unknown == "ignore":
            return {}
        if self.unknown == "reject":
            for key in unknown:
                self.fail(f"{path}/{key}", "unknown field")
            return {}
        return {k: obj[k] for k in unknown}

    def get(self, obj: dict, key: str, path: str, kind: str, default: Any = ...) -> Any:
        if key not in obj:
            if default is ...:
                self.fail(f"{path}/{key}", "missing required field")
            return None if default is ... else default
        value = obj[key]
        if value is None and default is not ...:
            return default
        if kind == "int" and isinstance(value, float) and value.is_integer():
            value = int(value)  # JSON has one number type; 3.0 is an integer
        ok = {
            "str": isinstance(value, str),
            "int": isinstance(value, int) and not isinstance(value, bool),
            "num": isinstance(value, (int, float)) and not isinstance(value, bool),
            "list": isinstance(value, list),
        }[kind]
        if not ok:
            self.fail(f"{path}/{key}", f"expected {kind}, got {type(value).__name__}")
            return None
        if kind == "num":
            return float(value)
        return value


def _read_file(r: _Reader, raw: Any, path: str) -> FileSpec | None:
    obj = r.obj(raw, path)
    if obj is None:
        return None
    name = r.get(obj, "name", path, "str")
    size = r.get(obj, "sizeBytes", path, "int")
    link = r.get(obj, "link", path, "str")
    if link is not None and link not in ("input", "output"):
        r.fail(f"{path}/link", f"link must be 'input' or 'output', got {link!r}")
        link = None
    extras = r.extras(obj, _FILE_KEYS, path)
    if name is None or size is None or link is None:
        return None
    return FileSpec(name, size, FileLink(link), extras)


def _read_machine(r: _Reader, raw: Any, path: str) -> MachineSpec | None:
    obj = r.obj(raw, path)
    if obj is None:
        return None
    node = r.get(obj, "nodeName", path, "str")
    cores = r.get(obj, "cores", path, "int")
    speed = r.get(obj, "cpuSpeedMHz", path, "num", None)
    memory = r.get(obj, "memoryBytes", path, "int", None)
    extras = r.extras(obj, _MACHINE_KEYS, path)
    if node is None or cores is None:
        return None
    return MachineSpec(node, cores, speed, memory, extras)


def _read_task(r: _Reader, raw: Any, path: str) -> TaskSpec | None:
    obj = r.obj(raw, path)
    if obj is None:
        return None
    before = len(r.errors)
    task_id = r.get(obj, "id", path, "str")
    name = r.get(obj, "name", path, "str", task_id)
    category = r.get(obj, "category", path, "str", None)
    runtime = r.get(obj, "runtimeSeconds", path, "num")
    cores = r.get(obj, "cores", path, "int", 1)
    memory = r.get(obj, "memoryBytes", path, "int", None)
    energy = r.get(obj, "energyJoules", path, "num", None)
    machine = r.get(obj, "machine", path, "str", None)
    parents = r.get(obj, "parents", path, "list", [])
    files_raw = r.get(obj, "files", path, "list", [])
    extras = r.extras(obj, _TASK_KEYS, path)

    parent_ids = []
    for i, p in enumerate(parents or []):
        if isinstance(p, str):
            parent_ids.append(p)
        else:
            r.fail(f"{path}/parents/{i}", "parent reference must be a string")
    files = [_read_file(r, f, f"{path}/files/{i}") for i, f in enumerate(files_raw or [])]

    if len(r.errors) > before:
        return None
    name = name if name is not None else task_id
    return TaskSpec(
        id=task_id,
        name=name,
        category=category if category is not None else category_from_name(name),
        runtime_seconds=runtime,
        cores=cores,
        memory_bytes=memory,
        energy_joules=energy,
        machine=machine,
        parents=tuple(parent_ids),
        files=tuple(files),
        extras=extras,
    )


def parse_trace(text: str | bytes, unknown: str = "ignore") -> WorkflowTrace:
    """Parse a trace document.

    ``unknown`` selects what happens to fields outside the schema: ``"ignore"``
    drops them, ``"keep"`` carries them in ``extras`` so they survive a
    round trip, ``"reject"`` reports each as a SYNTAX violation.

    Raises TraceError carrying SYNTAX violations on malformed JSON, missing
    required fields or wrong value types.  Semantic problems (negative values,
    dangling references, cycles) are left to :func:`validate`.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TraceError([Violation(ViolationCode.SYNTAX,
                                    f"malformed JSON: {exc.msg} at line {exc.lineno} column {exc.colno}",
                                    "")]) from None

    r = _Reader(unknown)
    top = r.obj(doc, "")
    if top is None:
        raise TraceError(r.errors)

    name = r.get(top, "name", "", "str")
    version = r.get(top, "schemaVersion", "", "str")
    if version is not None and version != SCHEMA_VERSION:
        r.fail("/schemaVersion", f"unsupported schema version {version!r}")
    description = r.get(top, "description", "", "str", None)
    wms = r.get(top, "wms", "", "str", None)
    executed_at = r.get(top, "executedAt", "", "str", None)
    makespan = r.get(top, "makespanSeconds", "", "num", None)
    machines_raw = r.get(top, "machines", "", "list", [])
    tasks_raw = r.get(top, "tasks", "", "list")
    extras = r.extras(top, _TRACE_KEYS, "")

    machines = [_read_machine(r, m, f"/machines/{i}") for i, m in enumerate(machines_raw or [])]
    tasks = [_read_task(r, t, f"/tasks/{i}") for i, t in enumerate(tasks_raw or [])]
    if r.errors:
        raise TraceError(r.errors)
    return WorkflowTrace(
        name=name,
        tasks=tuple(tasks),
        machines=tuple(machines),
        schema_version=version,
        description=description,
        wms=wms,
        executed_at=executed_at,
        makespan_seconds=makespan,
        extras=extras,
    )


# --------------------------------------------------------------------------
# serialization


def _drop_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def trace_to_dict(trace: WorkflowTrace) -> dict:
    tasks = []
    for t in trace.tasks:
        files = [{**f.extras, "name": f.name, "sizeBytes": f.size_bytes, "link": f.link.value}
                 for f in t.files]
        tasks.append({**t.extras, **_drop_none({
            "id": t.id,
            "name": t.name,
            "category": t.category,
            "runtimeSeconds": float(t.runtime_seconds),
            "cores": t.cores,
            "memoryBytes": t.memory_bytes,
            "energyJoules": None if t.energy_joules is None else float(t.energy_joules),
            "machine": t.machine,
            "parents": list(t.parents),
            "files": files,
        })})
    machines = [{**m.extras, **_drop_none({
        "nodeName": m.node_name,
        "cores": m.cores,
        "cpuSpeedMHz": None if m.cpu_speed_mhz is None else float(m.cpu_speed_mhz),
        "memoryBytes": m.memory_bytes,
    })} for m in trace.machines]
    return {**trace.extras, **_drop_none({
        "name": trace.name,
        "description": trace.description,
        "schemaVersion": trace.schema_version,
        "wms": trace.wms,
        "executedAt": trace.executed_at,
        "makespanSeconds": None if trace.makespan_seconds is None else float(trace.makespan_seconds),
        "machines": machines,
        "tasks": tasks,
    })}


def serialize_trace(trace: WorkflowTrace) -> str:
    """Canonical JSON text: sorted keys, two-space indent, trailing newline.

    Floats use Python's shortest round-trip ``repr``, so the output is
    byte-stable for equal traces on any IEEE-754 platform.
    """
    return json.dumps(trace_to_dict(trace), sort_keys=True, indent=2,
                      ensure_ascii=False, allow_nan=False) + "\n"


# --------------------------------------------------------------------------
# validation


def _negative(path: str, what: str, value: Any) -> Violation:
    return Violation(ViolationCode.NEGATIVE_VALUE, f"{what} is {value}", path)


def _find_cycles(nodes: list[str], parents: dict[str, list[str]]) -> list[list[str]]:
    """Strongly connected components that contain a cycle (iterative Tarjan)."""
    children: dict[str, list[str]] = {n: [] for n in nodes}
    for n in nodes:
        for p in parents[n]:
            children[p].append(n)

    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    found: list[list[str]] = []
    counter = 0

    for root in nodes:
        if root in index:
            continue
        work = [(root, 0)]
        while work:
            node, i = work.pop()
            if i == 0:
                index[node] = low[node] = counter
                counter += 1
                stack.append(node)
                on_stack.add(node)
            succ = children[node]
            if i < len(succ):
                work.append((node, i + 1))
                nxt = succ[i]
                if nxt not in index:
                    work.append((nxt, 0))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
                continue
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == node:
                        break
                if len(comp) > 1 or node in parents[node]:
                    found.append(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
    return found


def validate(trace: WorkflowTrace) -> list[Violation]:
    """Return every violation in ``trace``; an empty list means it is valid.

    Besides the structural invariants, a task that lists file F as input must
    have every task producing F as output among its direct parents.
    Graph checks use the first task carrying each id.
    """
    out: list[Violation] = []
    if trace.makespan_seconds is not None and trace.makespan_seconds < 0:
        out.append(_negative("/makespanSeconds", "makespan", trace.makespan_seconds))

    machine_names = set()
    for i, m in enumerate(trace.machines):
        if m.cores < 1:
            out.append(_negative(f"/machines/{i}/cores", "machine cores", m.cores))
        if m.cpu_speed_mhz is not None and m.cpu_speed_mhz <= 0:
            out.append(_negative(f"/machines/{i}/cpuSpeedMHz", "cpu speed", m.cpu_speed_mhz))
        if m.memory_bytes is not None and m.memory_bytes <= 0:
            out.append(_negative(f"/machines/{i}/memoryBytes", "machine memory", m.memory_bytes))
        machine_names.add(m.node_name)

    first: dict[str, int] = {}
    for i, t in enumerate(trace.tasks):
        if t.id in first:
            out.append(Violation(ViolationCode.DUPLICATE_ID,
                                 f"task id {t.id!r} already used at /tasks/{first[t.id]}",
                                 f"/tasks/{i}/id"))
        else:
            first[t.id] = i

    producers: dict[str, list[str]] = {}
    for t in trace.tasks:
        for f in t.output_files:
            producers.setdefault(f.name, []).append(t.id)

    for i, t in enumerate(trace.tasks):
        base = f"/tasks/{i}"
        if t.runtime_seconds < 0:
            out.append(_negative(f"{base}/runtimeSeconds", "runtime", t.runtime_seconds))
        if t.cores < 1:
            out.append(_negative(f"{base}/cores", "cores", t.cores))
        if t.memory_bytes is not None and t.memory_bytes < 0:
            out.append(_negative(f"{base}/memoryBytes", "memory", t.memory_bytes))
        if t.energy_joules is not None and t.energy_joules < 0:
            out.append(_negative(f"{base}/energyJoules", "energy", t.energy_joules))
        if t.machine is not None and t.machine not in machine_names:
            out.append(Violation(ViolationCode.UNKNOWN_MACHINE,
                                 f"machine {t.machine!r} is not listed", f"{base}/machine"))
        for j, p in enumerate(t.parents):
            if p not in first:
                out.append(Violation(ViolationCode.UNKNOWN_PARENT,
                                     f"parent {p!r} does not exist", f"{base}/parents/{j}"))

        seen: set[tuple[str, FileLink]] = set()
        parent_set = set(t.parents)
        for j, f in enumerate(t.files):
            fpath = f"{base}/files/{j}"
            if f.size_bytes < 0:
                out.append(_negative(f"{fpath}/sizeBytes", f"size of {f.name!r}", f.size_bytes))
            if not f.name:
                out.append(Violation(ViolationCode.FILE_INCONSISTENT, "empty file name", f"{fpath}/name"))
            key = (f.name, f.link)
            if key in seen:
                out.append(Violation(ViolationCode.FILE_INCONSISTENT,
                                     f"file {f.name!r} listed twice as {f.link.value}", fpath))
            seen.add(key)
            if f.link is FileLink.INPUT:
                for producer in producers.get(f.name, ()):
                    if producer != t.id and producer not in parent_set:
                        out.append(Violation(
                            ViolationCode.FILE_INCONSISTENT,
                            f"input {f.name!r} is produced by {producer!r}, which is not a parent",
                            fpath))

    nodes = list(first)
    parents = {n: [p for p in trace.tasks[first[n]].parents if p in first] for n in nodes}
    for comp in _find_cycles(nodes, parents):
        members = sorted(comp, key=lambda n: first[n])
        shown = ", ".join(members[:5]) + (", ..." if len(members) > 5 else "")
        out.append(Violation(ViolationCode.CYCLE,
                             f"dependency cycle through {len(members)} task(s): {shown}",
                             f"/tasks/{first[members[0]]}/parents"))
    return out


# --------------------------------------------------------------------------
# ordering


def topological_order(trace: WorkflowTrace) -> list[str]:
    """Kahn's algorithm; among ready tasks the lexicographically smallest id goes first."""
    ids = {t.id for t in trace.tasks}
    indegree = {t.id: 0 for t in trace.tasks}
    children: dict[str, list[str]] = {t.id: [] for t in trace.tasks}
    for t in trace.tasks:
        for p in set(t.parents):
            if p in ids:
                indegree[t.id] += 1
                children[p].append(t.id)

    ready = [n for n, d in indegree.items() if d == 0]
    heapq.heapify(ready)
    order = []
    while ready:
        n = heapq.heappop(ready)
        order.append(n)
        for c in children[n]:
            indegree[c] -= 1
            if indegree[c] == 0:
                heapq.heappush(ready, c)
    if len(order) != len(indegree):
        stuck = sorted(n for n, d in indegree.items() if d > 0)
        raise CycleError([Violation(ViolationCode.CYCLE,
                                    f"{len(stuck)} task(s) on or behind a cycle, e.g. {stuck[0]!r}",
                                    "/tasks")])
    return order


def load_trace(path, unknown: str = "ignore") -> WorkflowTrace:
    with open(path, "rb") as fh:
        return parse_trace(fh.read(), unknown=unknown)


def dump_trace(trace: WorkflowTrace, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_trace(trace))
