import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import chain, task, trace
from wfsynth.metrics import (
    ComparisonReport,
    TimelineField,
    average_reports,
    compare,
    quantile_rmse,
    timeline_ecdf,
)
from wfsynth.recipes.generator import GenerationConfig, generate
from wfsynth.sim import SimulationResult, TaskTimeline, simulate


def result(completions, submits=None):
    submits = submits or [0.0] * len(completions)
    rows = tuple(TaskTimeline(f"t{i}", s, s, c) for i, (s, c) in enumerate(zip(submits, completions)))
    return SimulationResult(rows, max(completions))


def ecdf_of(values, field="completion", normalized=False):
    return timeline_ecdf(result(values, list(values) if field == "submit" else None), field, normalized)


def test_normalized_values():
    e = timeline_ecdf(result([2.0, 4.0]), "completion", True)
    assert e.ecdf.sorted_values == (0.5, 1.0) and e.makespan_sec == 4.0


def test_chain_submits_staircase():
    e = timeline_ecdf(simulate(chain(4)), TimelineField.SUBMIT)
    v = e.ecdf.sorted_values
    assert all(b > a for a, b in zip(v, v[1:]))


def test_single_task_submit_is_zero():
    e = timeline_ecdf(simulate(trace(task("a", 3))), "submit")
    assert e.ecdf.sorted_values == (0.0,)


def test_zero_makespan_normalizes_to_zero():
    e = timeline_ecdf(simulate(trace(task("a", 0), task("b", 0))), "completion", True)
    assert e.ecdf.sorted_values == (0.0, 0.0)


def test_identity():
    a = ecdf_of([1.0, 5.0, 2.0])
    assert quantile_rmse(a, a) == 0.0


def test_two_point_hand_case():
    a, b = ecdf_of([0.0, 1.0]), ecdf_of([0.0, 2.0])
    assert quantile_rmse(a, b, K=2) == pytest.approx(math.sqrt(0.5), abs=1e-4)
    assert quantile_rmse(a, b, K=2) == pytest.approx(0.7071, abs=1e-4)


@given(st.lists(st.floats(0, 1e4), min_size=1, max_size=60), st.floats(0, 1e3))
@settings(max_examples=100, deadline=None)
def test_constant_shift(values, c):
    a = ecdf_of(values)
    b = ecdf_of([v + c for v in values])
    assert quantile_rmse(a, b) == pytest.approx(c, abs=1e-9 * max(1.0, c, max(values)))


@given(st.lists(st.floats(0, 100), min_size=1, max_size=40),
       st.lists(st.floats(0, 100), min_size=1, max_size=40), st.randoms())
@settings(max_examples=100, deadline=None)
def test_symmetric_nonnegative_relabel_invariant(x, y, rnd):
    a, b = ecdf_of(x), ecdf_of(y)
    r = quantile_rmse(a, b)
    assert r >= 0 and r == quantile_rmse(b, a)
    shuffled = list(x)
    rnd.shuffle(shuffled)
    assert quantile_rmse(ecdf_of(shuffled), b) == r


@given(st.lists(st.floats(0.1, 100), min_size=1, max_size=40),
       st.lists(st.floats(0.1, 100), min_size=1, max_size=40))
@settings(max_examples=60, deadline=None)
def test_normalized_rmse_in_unit_interval(x, y):
    assert 0 <= quantile_rmse(ecdf_of(x, normalized=True), ecdf_of(y, normalized=True)) <= 1


def test_grid_quantile_is_step_function():
    a = ecdf_of([1.0, 2.0, 3.0, 4.0])
    b = ecdf_of([0.0, 0.0, 0.0, 0.0])
    # K = 4: p = 1/8, 3/8, 5/8, 7/8 -> quantiles 1, 2, 3, 4
    assert quantile_rmse(a, b, K=4) == pytest.approx(math.sqrt((1 + 4 + 9 + 16) / 4))


def test_mismatch_rejected():
    with pytest.raises(ValueError):
        quantile_rmse(ecdf_of([1.0]), ecdf_of([1.0], normalized=True))
    with pytest.raises(ValueError):
        quantile_rmse(ecdf_of([1.0]), ecdf_of([1.0], field="submit"))
    with pytest.raises(ValueError):
        quantile_rmse(ecdf_of([1.0]), ecdf_of([1.0]), K=0)


def test_refining_grid_agrees():
    runs = [simulate(generate(GenerationConfig(n, b, 3))) for n, b in
            (("seismology", 101), ("seismology", 1000), ("genome1000", 1000))]
    for x in runs:
        for y in runs:
            for field in TimelineField:
                for norm in (False, True):
                    ex, ey = timeline_ecdf(x, field, norm), timeline_ecdf(y, field, norm)
                    scale = 1.0 if norm else max(x.makespan_sec, y.makespan_sec)
                    assert abs(quantile_rmse(ex, ey, 1000) - quantile_rmse(ex, ey, 10000)) <= 0.01 * scale


def test_compare_and_report():
    a = simulate(generate(GenerationConfig("montage", 50, 1)))
    b = simulate(generate(GenerationConfig("cycles", 50, 1)))
    same = compare(a, a)
    assert (same.submit_rmse, same.completion_rmse, same.normalized_submit_rmse,
            same.normalized_completion_rmse) == (0, 0, 0, 0)
    diff = compare(a, b)
    assert diff.normalized_submit_rmse > 0 and diff.normalized_completion_rmse > 0
    assert diff.task_counts == (len(a.timelines), len(b.timelines))
    d = diff.to_dict()
    assert set(d) == {"submitRmse", "completionRmse", "normalizedSubmitRmse",
                      "normalizedCompletionRmse", "taskCounts"}


def test_average_reports():
    r1 = ComparisonReport(1.0, 2.0, 0.1, 0.2, (3, 4))
    r2 = ComparisonReport(3.0, 4.0, 0.3, 0.4, (3, 4))
    avg = average_reports([r1, r2])
    assert (avg.submit_rmse, avg.completion_rmse) == (2.0, 3.0)
    assert avg.normalized_submit_rmse == pytest.approx(0.2)
    with pytest.raises(ValueError):
        average_reports([])


def test_ecdf_csv():
    text = timeline_ecdf(result([2.0, 4.0, 4.0]), "completion").to_csv()
    rows = text.strip().splitlines()
    assert rows[0] == "value,probability"
    assert [tuple(map(float, r.split(","))) for r in rows[1:]] == [(2.0, 1 / 3), (4.0, 1.0)]
    assert np.isclose(float(rows[-1].split(",")[1]), 1.0)
