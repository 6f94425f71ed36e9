"""Synthetic trace generation: scale resolution, skeleton wiring, metric sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from wfsynth import __version__
from wfsynth.recipes.patterns import (
    BoundTooSmall,
    LevelPattern,
    PatternKind,
    RecipeTemplate,
    count_tasks,
)
from wfsynth.rng import make_rng
from wfsynth.stats.summary import MetricSummary, TaskTypeSummary, sample_clamped
from wfsynth.trace import SCHEMA_VERSION, FileLink, FileSpec, TaskSpec, WorkflowTrace

ID_DIGITS = 8
RUNTIME_DECIMALS = 3


class MissingSummary(KeyError):
    def __init__(self, task_type: str, metric: str):
        self.task_type, self.metric = task_type, metric
        super().__init__(f"no {metric} summary for task type {task_type!r}")

    def __str__(self):
        return self.args[0]


@dataclass(frozen=True)
class SkeletonTask:
    id: str
    task_type: str
    level: int


@dataclass(frozen=True)
class Skeleton:
    tasks: tuple[SkeletonTask, ...]
    edges: tuple[tuple[str, str], ...]

    def parents(self) -> dict[str, list[str]]:
        out: dict[str, list[str]] = {t.id: [] for t in self.tasks}
        for p, c in self.edges:
            out[c].append(p)
        return out


@dataclass(frozen=True)
class GenerationConfig:
    recipe: str
    max_tasks: int
    seed: int


def resolve_scale(recipe: RecipeTemplate, max_tasks: int) -> dict[str, int]:
    """Largest scale parameters whose task count stays within ``max_tasks``.

    Parameters start at their minimums and are raised one step at a time in
    round-robin over ``recipe.params``; a parameter whose next step would
    overshoot or pass its ceiling is skipped, and growth stops once no
    parameter can move.
    """
    if max_tasks < 1:
        raise ValueError("max_tasks must be >= 1")
    params = recipe.min_scale
    minimum = count_tasks(recipe, params)
    if max_tasks < minimum:
        raise BoundTooSmall(recipe.name, minimum, max_tasks)

    if len(recipe.params) == 1:
        # single parameter: counts are monotone, so gallop then bisect
        (key,) = recipe.params
        cap = recipe.ceiling(key)
        lo = params[key]
        hi = lo + 1
        if cap is not None:
            if count_tasks(recipe, {key: cap}) <= max_tasks:
                return {key: cap}
            hi = min(hi, cap)
        while count_tasks(recipe, {key: hi}) <= max_tasks:
            lo, hi = hi, hi * 2
            if cap is not None:
                hi = min(hi, cap)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if count_tasks(recipe, {key: mid}) <= max_tasks:
                lo = mid
            else:
                hi = mid
        return {key: lo}

    moved = True
    while moved:
        moved = False
        for key in recipe.params:
            cap = recipe.ceiling(key)
            if cap is not None and params[key] >= cap:
                continue
            trial = dict(params)
            trial[key] += 1
            if count_tasks(recipe, trial) <= max_tasks:
                params = trial
                moved = True
    return params


class _Builder:
    def __init__(self):
        self.tasks: list[SkeletonTask] = []
        self.edges: list[tuple[str, str]] = []
        self.counters: dict[str, int] = {}

    def new(self, task_type: str, level: int, parents) -> str:
        idx = self.counters.get(task_type, 0)
        self.counters[task_type] = idx + 1
        tid = f"{task_type}_{idx:0{ID_DIGITS}d}"
        self.tasks.append(SkeletonTask(tid, task_type, level))
        self.edges.extend((p, tid) for p in parents)
        return tid

    def level(self, pattern: LevelPattern, level: int, inputs: list[str],
              params: Mapping[str, int]) -> list[str]:
        kind = pattern.kind
        width = pattern.resolved_width(params)
        t0 = pattern.task_types[0]
        if kind is PatternKind.FAN:
            return [self.new(t0, level, inputs) for _ in range(width)]
        if kind is PatternKind.PIPELINE:
            heads = [inputs] * width if width is not None else [[x] for x in inputs]
            ends = []
            for head in heads:
                prev = head
                for step in range(pattern.depth):
                    prev = [self.new(pattern.type_at(step), level, prev)]
                ends.extend(prev)
            return ends
        if kind is PatternKind.MERGE_ALL:
            return [self.new(t0, level, inputs)]
        if kind is PatternKind.MERGE_GROUPS:
            g = pattern.group_size
            return [self.new(t0, level, inputs[i:i + g]) for i in range(0, len(inputs), g)]
        if kind is PatternKind.CROSS:
            n = len(inputs)
            d = min(pattern.degree, n)
            return [self.new(t0, level, [inputs[(i + k) % n] for k in range(d)]) for i in range(n)]
        raise AssertionError(kind)

    def scope(self, levels, params, entry: list[str], first_level: int) -> list[str]:
        terminals: list[list[str]] = []
        for i, pattern in enumerate(levels):
            if pattern.sources is None:
                inputs = terminals[i - 1] if i > 0 else entry
            else:
                inputs = [x for off in pattern.sources for x in terminals[i + off]]
            terminals.append(self.level(pattern, first_level + i, inputs, params))
        return terminals[-1] if terminals else entry


def build_skeleton(recipe: RecipeTemplate, params: Mapping[str, int], seed: int = 0) -> Skeleton:
    """Wire the recipe's levels at the given scale.

    The structure is a pure function of ``(recipe, params)``; ``seed`` is
    accepted so randomised patterns can be added without an interface change.
    Task ids are ``<taskType>_<index>`` with an 8-digit index counted per type
    in creation order.
    """
    b = _Builder()
    ends: list[str] = []
    for _ in range(recipe.branch_count(params)):
        ends.extend(b.scope(recipe.levels, params, [], 0))
    b.scope(recipe.final_levels, params, ends, len(recipe.levels))
    return Skeleton(tuple(b.tasks), tuple(b.edges))


def _summary(summaries: Mapping[str, TaskTypeSummary], task_type: str, metric: str) -> MetricSummary:
    s = summaries.get(task_type)
    m = s.metric(metric) if s is not None else None
    if m is None:
        raise MissingSummary(task_type, metric)
    return m


def _runtime(summary: MetricSummary, rng) -> float:
    x = round(sample_clamped(summary, rng), RUNTIME_DECIMALS)
    return min(max(x, summary.min), summary.max)


def _size(summary: MetricSummary, rng) -> int:
    x = int(round(sample_clamped(summary, rng)))
    lo, hi = math.ceil(summary.min), math.floor(summary.max)
    if lo <= hi:
        x = min(max(x, lo), hi)
    return max(x, 0)


def instantiate(skeleton: Skeleton, summaries: Mapping[str, TaskTypeSummary], seed: int,
                name: str = "synthetic", description: str | None = None) -> WorkflowTrace:
    """Sample metrics for every skeleton task and materialise the data edges.

    Each task draws from its own stream (``seed`` mixed with the task id):
    runtime, then output size, then (source tasks only) a fresh input size.
    Runtimes are rounded to the millisecond and sizes to whole bytes, both
    kept inside the summary's ``[min, max]``.  A task writes one output file
    ``<id>_out.dat``; its children read exactly that file.
    """
    parents = skeleton.parents()
    for t in skeleton.tasks:
        _summary(summaries, t.task_type, "runtime")
        _summary(summaries, t.task_type, "outputSize")
        if not parents[t.id]:
            _summary(summaries, t.task_type, "inputSize")

    outputs: dict[str, FileSpec] = {}
    specs = []
    for t in skeleton.tasks:
        rng = make_rng(seed, t.id)
        runtime = _runtime(_summary(summaries, t.task_type, "runtime"), rng)
        out = FileSpec(f"{t.id}_out.dat", _size(_summary(summaries, t.task_type, "outputSize"), rng),
                       FileLink.OUTPUT)
        outputs[t.id] = out
        inputs = [FileSpec(outputs[p].name, outputs[p].size_bytes, FileLink.INPUT) for p in parents[t.id]]
        if not parents[t.id]:
            inputs.append(FileSpec(f"{t.id}_in.dat",
                                   _size(_summary(summaries, t.task_type, "inputSize"), rng),
                                   FileLink.INPUT))
        specs.append(TaskSpec(
            id=t.id,
            name=t.id,
            category=t.task_type,
            runtime_seconds=runtime,
            parents=tuple(parents[t.id]),
            files=tuple(inputs) + (out,),
        ))
    return WorkflowTrace(
        name=name,
        description=description,
        schema_version=SCHEMA_VERSION,
        wms=f"wfsynth {__version__}",
        tasks=tuple(specs),
    )


def generate(config: GenerationConfig, summaries: Mapping[str, TaskTypeSummary] | None = None,
             recipe: RecipeTemplate | None = None) -> WorkflowTrace:
    """``resolve_scale`` -> ``build_skeleton`` -> ``instantiate``.

    ``recipe`` defaults to the built-in template named by ``config.recipe``;
    ``summaries`` default to that template's bundled summaries.
    """
    if recipe is None:
        from wfsynth.recipes.builtin import get_recipe
        recipe = get_recipe(config.recipe)
    if summaries is None:
        summaries = recipe.summary_source
    params = resolve_scale(recipe, config.max_tasks)
    skeleton = build_skeleton(recipe, params, config.seed)
    scale = ", ".join(f"{k}={v}" for k, v in params.items())
    return instantiate(
        skeleton, summaries, config.seed,
        name=f"{recipe.name}-synthetic-{len(skeleton.tasks)}",
        description=f"synthetic {recipe.name} trace ({scale}; maxTasks={config.max_tasks}, seed={config.seed})",
    )
