import math

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from rnl_lab.errors import DomainError, SuperluminalError, UnsupportedConfigurationError
from rnl_lab.timing import (
    AA,
    AB,
    BB,
    C,
    ExperimentLabel,
    ImpactClass,
    ImpactEvent,
    MarkingMode,
    SetupGeometry,
    classify_experiment,
    classify_impact,
    feasibility_sweep,
    max_delay,
    section5_setup,
    simultaneity_gap,
)

U, D = MarkingMode.U, MarkingMode.D
V, L = 100.0, 1e5
BOUND = V * L / C**2


def test_gap_coincident_events_is_zero():
    e = ImpactEvent(1e-6, 3.0, 0.0)
    for v in (0.0, 1e3, -2.9e8):
        assert simultaneity_gap(e, e, v) == 0.0


def test_gap_rest_frame_is_lab_ordering():
    assert simultaneity_gap(ImpactEvent(1e-10, 0.0), ImpactEvent(0.0, 0.0), 0.0) == 1e-10


def test_gap_vanishes_on_feasibility_boundary():
    # exact rational boundary: pick L, V so that V L / c^2 is a double
    dt = max_delay(V, L)
    # BS2's impact (t=0, x=L) against photon 1's (t=dt, x=0), seen from BS2 moving at -V
    own = ImpactEvent(0.0, L)
    other = ImpactEvent(dt, 0.0)
    gap = simultaneity_gap(own, other, -V)
    assert abs(gap) <= math.ulp(dt)


def test_gap_rejects_superluminal_frame():
    e = ImpactEvent(0.0, 0.0)
    with pytest.raises(SuperluminalError):
        simultaneity_gap(e, e, C)


def test_event_rejects_superluminal_velocity():
    with pytest.raises(SuperluminalError):
        ImpactEvent(0.0, 0.0, 3e8)
    with pytest.raises(DomainError):
        ImpactEvent(math.nan, 0.0)


def test_resting_splitter_with_later_impact_is_non_before():
    setup = section5_setup(V, L, 0.5 * BOUND)
    assert classify_impact(setup.event1, setup.event2, U, U) is ImpactClass.NON_BEFORE


def test_dd_marking_gives_before_for_both():
    setup = SetupGeometry(ImpactEvent(1e-9, 0.0), ImpactEvent(0.0, 5.0), D, D)
    assert classify_experiment(setup).label == BB


def test_moving_splitter_within_bound_is_non_before():
    setup = section5_setup(V, L, 0.5 * BOUND)
    assert classify_impact(setup.event2, setup.event1, U, U) is ImpactClass.NON_BEFORE


def test_mixed_markings_rejected():
    setup = SetupGeometry(ImpactEvent(0.0, 0.0), ImpactEvent(0.0, 1.0), U, D)
    with pytest.raises(UnsupportedConfigurationError):
        classify_experiment(setup)


def test_experiment_labels():
    assert classify_experiment(section5_setup(V, L, 0.5 * BOUND)).label == AA
    away = SetupGeometry(ImpactEvent(0.5 * BOUND, 0.0), ImpactEvent(0.0, L, +V))
    assert classify_experiment(away).label == AB
    at_rest = SetupGeometry(ImpactEvent(1e-9, 0.0), ImpactEvent(0.0, L))
    assert classify_experiment(at_rest).label == AB
    two_before = SetupGeometry(ImpactEvent(-0.5 * BOUND, 0.0), ImpactEvent(0.0, L, +V))
    assert classify_experiment(two_before).label == BB


def test_label_text():
    assert str(AB) == "(a,b)"
    assert ExperimentLabel.parse("(b, a)") == (ImpactClass.BEFORE, ImpactClass.NON_BEFORE)


def test_boundary_inclusive_for_classification():
    # V = c/4 and L = c 2^-30 make V L / c^2 = 2^-32 exactly
    speed, dist = C / 4, C * 2.0**-30
    dt = max_delay(speed, dist)
    assert dt == 2.0**-32
    setup = SetupGeometry(ImpactEvent(dt, 0.0), ImpactEvent(0.0, dist, -speed))
    assert simultaneity_gap(setup.event2, setup.event1, setup.event2.v) == 0.0
    assert classify_experiment(setup).label.class2 is ImpactClass.NON_BEFORE
    nudged = SetupGeometry(ImpactEvent(math.nextafter(dt, 1.0), 0.0), setup.event2)
    assert classify_experiment(nudged).label.class2 is ImpactClass.BEFORE


def test_max_delay_examples():
    assert max_delay(100, 1e5) == pytest.approx(1.1126500560536184e-10, rel=1e-15)
    assert max_delay(0, 1e5) == 0.0
    assert max_delay(100, 1e4) == pytest.approx(1.1126500560536184e-11, rel=1e-15)
    with pytest.raises(DomainError):
        max_delay(-1, 1)
    with pytest.raises(SuperluminalError):
        max_delay(C, 1)


def test_feasibility_sweep_examples():
    (row,) = feasibility_sweep((100, 100), (1e5, 1e5))
    assert row.dt_max == pytest.approx(1.11265e-10, rel=1e-5)
    assert row.dt_safe == pytest.approx(0.9 * row.dt_max)
    a, b = feasibility_sweep((100, 100), (1e4, 3e4), 1, 2)
    assert b.dt_max == pytest.approx(3 * a.dt_max, rel=1e-15)
    assert all(r.dt_max == 0 for r in feasibility_sweep((0, 0), (1, 10), 1, 5))
    with pytest.raises(DomainError):
        feasibility_sweep((10, 1), (1, 2), 2, 2)
    with pytest.raises(DomainError):
        feasibility_sweep((1, 2), (1, 2), 0, 2)


def test_feasibility_sweep_monotone_row_major():
    rows = feasibility_sweep((0, 300), (0, 2e5), 4, 5)
    grid = [[rows[i * 5 + k].dt_max for k in range(5)] for i in range(4)]
    assert [r.V for r in rows[:5]] == [0.0] * 5
    for i in range(4):
        assert grid[i] == sorted(grid[i])
    for k in range(5):
        assert [grid[i][k] for i in range(4)] == sorted(grid[i][k] for i in range(4))


finite = st.floats(-1e3, 1e3, allow_nan=False)
speeds = st.floats(-0.99 * C, 0.99 * C, allow_nan=False)


@st.composite
def events(draw):
    return ImpactEvent(draw(finite) * 1e-6, draw(finite), draw(speeds))


@given(events(), events(), speeds)
def test_gap_antisymmetric(a, b, v):
    assert simultaneity_gap(a, b, v) == -simultaneity_gap(b, a, v)


@given(events(), events())
def test_rest_frame_reduction(a, b):
    a0, b0 = ImpactEvent(a.t, a.x, 0.0), ImpactEvent(b.t, b.x, 0.0)
    expected = ImpactClass.BEFORE if a0.t < b0.t else ImpactClass.NON_BEFORE
    assert classify_impact(a0, b0, U, U) is expected


@given(events(), events())
def test_dd_overrides_timing(a, b):
    label = classify_experiment(SetupGeometry(a, b, D, D)).label
    assert label == BB


dyadic = st.integers(-2**20, 2**20).map(lambda n: n * 2.0**-10)


@given(dyadic, dyadic, dyadic, dyadic, dyadic, dyadic, st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_translation_invariance(t1, x1, t2, x2, dt, dx, v1, v2):
    # dyadic inputs keep every translated coordinate exact
    e1, e2 = ImpactEvent(t1, x1, v1 * 1e5), ImpactEvent(t2, x2, v2 * 1e5)
    f1, f2 = ImpactEvent(t1 + dt, x1 + dx, e1.v), ImpactEvent(t2 + dt, x2 + dx, e2.v)
    assume(f1.t - dt == t1 and f2.x - dx == x2)
    assert classify_experiment(SetupGeometry(e1, e2)).label == classify_experiment(SetupGeometry(f1, f2)).label


@given(st.floats(1e-3, 0.999).filter(lambda r: abs(r - 1) > 1e-9))
def test_section5_boundary_sign(ratio):
    label = classify_experiment(section5_setup(V, L, ratio * BOUND)).label
    assert label == AA
    above = classify_experiment(section5_setup(V, L, BOUND / ratio)).label
    assert above == AB
