import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tritrophic import Frame, SolverOptions, StateVector, SweepResult, SweepSpec, detect_first_doubling, run_sweep
from tritrophic.presets import STABLE_FOCUS, STABLE_NODE
from tritrophic.sweep import (
    SweepPoint,
    analyse_window,
    cluster_tolerance,
    count_clusters,
    local_maxima,
    run_point,
)


def point(value, clusters, failed=False):
    return SweepPoint(value, np.zeros(clusters), clusters, error="boom" if failed else None)


def test_local_maxima_strict():
    series = np.array([0, 1, 0, 2, 2, 0, 3, 1])
    # the plateau at 2 is not a strict maximum
    np.testing.assert_array_equal(local_maxima(series), [1, 3])
    assert local_maxima(np.arange(10.0)).size == 0


def test_maxima_of_period_two_signal():
    t = np.linspace(0, 40 * np.pi, 20001)
    x = np.sin(t) + 0.3 * np.sin(t / 2)
    maxima, clusters = analyse_window(x, 1e-2)
    assert clusters == 2
    maxima, clusters = analyse_window(np.sin(t), 1e-2)
    assert clusters == 1 and maxima.size == 20


def test_monotone_series_has_no_clusters():
    assert analyse_window(np.exp(-np.linspace(0, 5, 100)), 1e-2)[1] == 0


def test_count_clusters():
    assert count_clusters(np.array([]), 0.1) == 0
    assert count_clusters(np.array([1.0, 1.05, 2.0, 2.02, 3.0]), 0.1) == 3
    assert count_clusters(np.array([1.0, 1.05, 1.1, 1.15]), 0.1) == 1


def test_cluster_tolerance_floor():
    # tiny oscillations around a large level are judged against the level
    x = 10.0 + 1e-6 * np.sin(np.linspace(0, 20, 1000))
    assert cluster_tolerance(x, 1e-2) == pytest.approx(1e-2 * 1e-2 * 10.0, rel=1e-6)
    y = np.sin(np.linspace(0, 20, 1000))
    assert cluster_tolerance(y, 1e-2) == pytest.approx(1e-2 * np.ptp(y))


def test_detect_first_doubling_interpolates():
    result = SweepResult("a0", [point(1.0, 1), point(1.1, 1), point(1.2, 2), point(1.3, 4)])
    assert detect_first_doubling(result) == pytest.approx(1.15)
    result = SweepResult("a0", [point(1.0, 0), point(1.1, 3)])
    assert detect_first_doubling(result) == pytest.approx(1.05)


def test_detect_first_doubling_absent():
    assert detect_first_doubling(SweepResult("a0", [point(1.0, 1), point(1.1, 0), point(1.2, 1)])) is None
    assert detect_first_doubling(SweepResult("a0", [point(1.0, 2), point(1.1, 4)])) is None


def test_detect_first_doubling_skips_failed_points():
    result = SweepResult("a0", [point(1.0, 1), point(1.1, 0, failed=True), point(1.2, 2)])
    assert detect_first_doubling(result) == pytest.approx(1.1)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=30))
def test_detected_onset_is_first_transition(counts):
    values = np.linspace(0.0, 1.0, len(counts))
    result = SweepResult("a0", [point(v, c) for v, c in zip(values, counts)])
    onset = detect_first_doubling(result)
    transitions = [i for i in range(1, len(counts)) if counts[i - 1] <= 1 and counts[i] >= 2]
    if not transitions:
        assert onset is None
    else:
        i = transitions[0]
        assert values[i - 1] < onset <= values[i]


def test_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(parameter_name="zz")
    with pytest.raises(ValueError):
        SweepSpec(lo=2.0, hi=1.0)
    with pytest.raises(ValueError):
        SweepSpec(count=1)
    with pytest.raises(ValueError):
        SweepSpec(transient=600.0)
    with pytest.raises(ValueError):
        SweepSpec(m=1.2)
    with pytest.raises(ValueError):
        SweepSpec(initial=StateVector(1, 1, 1, Frame.RESCALED))
    assert SweepSpec().values().size == 101


SHORT = dict(sim=SolverOptions(step=0.1, t_end=60.0), transient=30.0)


def test_sweep_points_in_grid_order_and_parallel_equal_serial():
    spec = SweepSpec(lo=1.6, hi=2.0, count=4, m=0.9, **SHORT)
    serial = run_sweep(spec, STABLE_FOCUS)
    parallel = run_sweep(spec, STABLE_FOCUS, workers=2)
    np.testing.assert_allclose(serial.values, spec.values())
    assert serial.cluster_counts == parallel.cluster_counts
    for a, b in zip(serial.points, parallel.points):
        np.testing.assert_array_equal(a.maxima, b.maxima)


def test_failed_point_is_recorded_and_warned():
    spec = SweepSpec(parameter_name="a0", lo=1.0, hi=1.1, count=2, m=1.0, **SHORT)
    base = STABLE_NODE.replace(v3=1e6)  # explosive top predator
    with pytest.warns(RuntimeWarning, match="2 of 2"):
        result = run_sweep(spec, base)
    assert len(result.failed) == 2 and all(p.cluster_count == 0 for p in result.failed)
    assert detect_first_doubling(result) is None


def test_run_point_changes_only_swept_parameter():
    spec = SweepSpec(parameter_name="v2", lo=0.3, hi=0.5, count=2, m=0.9, **SHORT)
    p = run_point(spec, STABLE_NODE, 0.4)
    assert p.value == 0.4 and not p.failed
