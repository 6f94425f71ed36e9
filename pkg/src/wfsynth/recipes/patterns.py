"""A small structural language for workflow recipes.

A recipe is a list of levels, each a :class:`LevelPattern`, optionally
replicated over a number of branches (lanes) and followed by final levels
that operate on the union of all branches.  Each level consumes the
*terminals* of one or more earlier levels (by default the level right before
it) and produces new tasks:

FAN          ``width`` parallel tasks, each a child of every consumed terminal
PIPELINE     chains of ``depth`` tasks; ``width`` fresh chains hanging off
             every consumed terminal, or one chain per terminal when no width
             is given.  Only the chain ends are terminals.
MERGE_ALL    one task that is a child of every consumed terminal
MERGE_GROUPS one task per consecutive group of ``group_size`` terminals
CROSS        one task per terminal ``i``, child of terminals ``i .. i+d-1``
             taken cyclically (``d = degree``)

Widths may be integers or the name of a recipe scale parameter.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from wfsynth.stats.summary import TaskTypeSummary


class PatternKind(str, Enum):
    FAN = "FAN"
    PIPELINE = "PIPELINE"
    MERGE_ALL = "MERGE_ALL"
    MERGE_GROUPS = "MERGE_GROUPS"
    CROSS = "CROSS"


@dataclass(frozen=True)
class LevelPattern:
    kind: PatternKind
    task_types: tuple[str, ...]
    width: int | str | None = None
    depth: int = 1
    group_size: int = 1
    degree: int = 1
    # relative offsets of the levels consumed; None = previous level, () = none
    sources: tuple[int, ...] | None = None

    def __post_init__(self):
        if not self.task_types:
            raise ValueError("a level needs at least one task type")
        if isinstance(self.width, int) and self.width < 1:
            raise ValueError("width must be >= 1")
        if self.depth < 1:
            raise ValueError("depth must be >= 1")
        if self.group_size < 1:
            raise ValueError("group size must be >= 1")
        if self.degree < 1:
            raise ValueError("degree must be >= 1")
        if self.kind is PatternKind.FAN and self.width is None:
            raise ValueError("FAN needs a width")

    def resolved_width(self, params: Mapping[str, int]) -> int | None:
        if self.width is None or isinstance(self.width, int):
            return self.width
        return params[self.width]

    def type_at(self, step: int) -> str:
        return self.task_types[step % len(self.task_types)]


def fan(task_type: str, width: int | str, sources=None) -> LevelPattern:
    return LevelPattern(PatternKind.FAN, (task_type,), width=width, sources=sources)


def pipeline(task_types: Sequence[str], width: int | str | None = None,
             depth: int | None = None, sources=None) -> LevelPattern:
    types = tuple(task_types)
    return LevelPattern(PatternKind.PIPELINE, types, width=width,
                        depth=len(types) if depth is None else depth, sources=sources)


def merge_all(task_type: str, sources=None) -> LevelPattern:
    return LevelPattern(PatternKind.MERGE_ALL, (task_type,), sources=sources)


def merge_groups(task_type: str, group_size: int, sources=None) -> LevelPattern:
    return LevelPattern(PatternKind.MERGE_GROUPS, (task_type,), group_size=group_size, sources=sources)


def cross(task_type: str, degree: int, sources=None) -> LevelPattern:
    return LevelPattern(PatternKind.CROSS, (task_type,), degree=degree, sources=sources)


class BoundTooSmall(ValueError):
    def __init__(self, recipe: str, minimum: int, requested: int):
        self.recipe, self.minimum, self.requested = recipe, minimum, requested
        super().__init__(f"recipe {recipe!r} needs at least {minimum} tasks, got an upper bound of {requested}")


@dataclass(frozen=True)
class RecipeTemplate:
    """Structure of one application family.

    ``params`` lists the integer scale parameters in growth order,
    ``min_params`` their smallest legal values and ``max_params`` optional
    ceilings (``None`` for unbounded).  ``branches`` may name a
    parameter (or give a constant) by which ``levels`` are replicated;
    ``final_levels`` then run once over all branch outputs.
    """

    name: str
    params: tuple[str, ...]
    min_params: tuple[int, ...]
    levels: tuple[LevelPattern, ...]
    final_levels: tuple[LevelPattern, ...] = ()
    max_params: tuple[int | None, ...] | None = None
    branches: int | str = 1
    summary_source: Mapping[str, TaskTypeSummary] = field(default_factory=dict, compare=False)
    description: str = ""

    def __post_init__(self):
        if len(self.params) != len(self.min_params):
            raise ValueError("params and min_params differ in length")
        if any(m < 1 for m in self.min_params):
            raise ValueError("scale parameters start at >= 1")
        if self.max_params is not None:
            if len(self.max_params) != len(self.params):
                raise ValueError("params and max_params differ in length")
            if any(hi is not None and hi < lo for lo, hi in zip(self.min_params, self.max_params)):
                raise ValueError("max_params below min_params")

    @property
    def min_scale(self) -> dict[str, int]:
        return dict(zip(self.params, self.min_params))

    def ceiling(self, key: str) -> int | None:
        if self.max_params is None:
            return None
        return self.max_params[self.params.index(key)]

    @property
    def min_tasks(self) -> int:
        return count_tasks(self, self.min_scale)

    @property
    def task_types(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for level in self.levels + self.final_levels:
            for t in level.task_types:
                seen.setdefault(t, None)
        return tuple(seen)

    def branch_count(self, params: Mapping[str, int]) -> int:
        return self.branches if isinstance(self.branches, int) else params[self.branches]

    def with_summaries(self, summaries: Mapping[str, TaskTypeSummary]) -> "RecipeTemplate":
        from dataclasses import replace
        return replace(self, summary_source=dict(summaries))


def _consumed(level_index: int, level: LevelPattern, terminals: list[int], entry: int) -> int:
    """Number of terminals a level consumes; ``entry`` feeds a scope's first level."""
    if level.sources is None:
        return terminals[level_index - 1] if level_index > 0 else entry
    return sum(terminals[level_index + off] for off in level.sources)


def _level_counts(level: LevelPattern, consumed: int, params: Mapping[str, int]) -> tuple[int, int]:
    """(tasks created, terminals exposed) for one level."""
    kind = level.kind
    width = level.resolved_width(params)
    if kind is PatternKind.FAN:
        return width, width
    if kind is PatternKind.PIPELINE:
        chains = width if width is not None else consumed
        return chains * level.depth, chains
    if kind is PatternKind.MERGE_ALL:
        return 1, 1
    if kind is PatternKind.MERGE_GROUPS:
        n = math.ceil(consumed / level.group_size)
        return n, n
    if kind is PatternKind.CROSS:
        return consumed, consumed
    raise AssertionError(kind)


def _scope_counts(levels: Sequence[LevelPattern], params: Mapping[str, int], entry: int) -> tuple[int, int]:
    total = 0
    terminals: list[int] = []
    for i, level in enumerate(levels):
        n, term = _level_counts(level, _consumed(i, level, terminals, entry), params)
        total += n
        terminals.append(term)
    return total, (terminals[-1] if terminals else entry)


def count_tasks(recipe: RecipeTemplate, params: Mapping[str, int]) -> int:
    per_branch, branch_terminals = _scope_counts(recipe.levels, params, 0)
    b = recipe.branch_count(params)
    final, _ = _scope_counts(recipe.final_levels, params, b * branch_terminals)
    return b * per_branch + final
