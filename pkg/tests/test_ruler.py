import numpy as np
import pytest

from multiwalk import (EvalCounter, RulerState, candidate_coords,
                       candidate_table_text, eligible_neighbors, get_objective,
                       init_rulers, neighborhood_eval)

DEMO_MARKS = np.array([1.0, 2.0, 4.0, 10.0, 12.0, 17.0])[:, None]


def test_init_anchors_exactly_at_bounds():
    spec = get_objective("ehrenfest4")
    counter = EvalCounter()
    state = init_rulers(spec, 6, np.random.default_rng(11), counter)
    assert state.marks[0, 0] == 1.0
    assert state.marks[5, 0] == 17.0
    assert counter.probes == 6


def test_init_marks_within_bounds():
    spec = get_objective("trefethen2")
    counter = EvalCounter()
    state = init_rulers(spec, 16, np.random.default_rng(5), counter)
    assert np.all(state.marks >= spec.lower) and np.all(state.marks <= spec.upper)
    assert np.array_equal(state.values,
                          np.array([spec.fn(row[None])[0] for row in state.marks]))


def test_init_deterministic():
    spec = get_objective("wild2")
    a = init_rulers(spec, 8, np.random.default_rng(7), EvalCounter())
    b = init_rulers(spec, 8, np.random.default_rng(7), EvalCounter())
    assert np.array_equal(a.marks, b.marks)
    assert np.array_equal(a.values, b.values)


def test_init_rejects_small_populations():
    with pytest.raises(ValueError):
        init_rulers(get_objective("wild1"), 3, np.random.default_rng(0), EvalCounter())


def test_eligible_neighbors():
    assert eligible_neighbors(0, 6).tolist() == [1, 2, 3, 4]
    assert eligible_neighbors(3, 6).tolist() == [1, 2, 4, 5]
    assert eligible_neighbors(5, 6).tolist() == [1, 2, 3, 4]
    assert eligible_neighbors(1, 4).tolist() == [2, 3]
    for i in range(6):
        assert len(eligible_neighbors(i, 6)) == 4
        assert i not in eligible_neighbors(i, 6)


def test_eligible_neighbors_errors():
    with pytest.raises(ValueError):
        eligible_neighbors(6, 6)
    with pytest.raises(ValueError):
        eligible_neighbors(0, 3)


def test_candidate_from_pairwise_difference():
    lower, upper = np.array([1.0]), np.array([17.0])
    # mark at 10 with neighbor at 12: one plus their distance
    assert candidate_coords(DEMO_MARKS, 3, 4, lower, upper)[0] == 3.0
    # the lower-anchor mark reproduces its neighbor's own position
    for j in range(1, 6):
        assert candidate_coords(DEMO_MARKS, 0, j, lower, upper)[0] == DEMO_MARKS[j, 0]
    # the upper-anchor mark mirrors the neighbor through the box
    assert candidate_coords(DEMO_MARKS, 5, 1, lower, upper)[0] == 16.0


def test_candidate_rejects_self_pairing():
    with pytest.raises(ValueError):
        candidate_coords(DEMO_MARKS, 2, 2, np.array([1.0]), np.array([17.0]))


def test_candidate_dither_stays_in_bounds():
    spec = get_objective("wild2")
    rng = np.random.default_rng(3)
    marks = spec.lower + rng.uniform(size=(12, 2)) * (spec.upper - spec.lower)
    for dither in (0.0, 0.01, 0.5, 1.0):
        for i in range(12):
            for j in range(12):
                if i == j:
                    continue
                c = candidate_coords(marks, i, j, spec.lower, spec.upper,
                                     dither=dither, rng=rng)
                assert np.all(c >= spec.lower) and np.all(c <= spec.upper)


def test_anchored_noop_columns_on_integer_ruler():
    # at the anchored initial state, the excluded fixed column would only
    # reproduce the mark itself (or the upper bound, for mark 0)
    lower, upper = np.array([1.0]), np.array([17.0])
    for i in range(1, 6):
        assert candidate_coords(DEMO_MARKS, i, 0, lower, upper)[0] == DEMO_MARKS[i, 0]
    assert candidate_coords(DEMO_MARKS, 0, 5, lower, upper)[0] == 17.0


def test_anchored_noop_columns_on_random_init():
    spec = get_objective("wild3")
    state = init_rulers(spec, 10, np.random.default_rng(21), EvalCounter())
    for i in range(1, 10):
        c = candidate_coords(state.marks, i, 0, spec.lower, spec.upper)
        assert c == pytest.approx(state.marks[i], rel=1e-12, abs=1e-12)
    c = candidate_coords(state.marks, 0, 9, spec.lower, spec.upper)
    assert c == pytest.approx(spec.upper, rel=1e-12)


def _demo_state(spec):
    values = np.array([spec.fn(row[None])[0] for row in DEMO_MARKS])
    return RulerState(marks=DEMO_MARKS.copy(), values=values)


def test_full_radius_proposal_finds_center_state(ehrenfest4_spec):
    spec = ehrenfest4_spec
    state = _demo_state(spec)
    counter = EvalCounter()
    prop = neighborhood_eval(state, spec, radius=4, dither=0.0,
                             rng=np.random.default_rng(0), counter=counter)
    # mark at coordinate 4 reaches nine via its distance to the mark at 12
    assert prop.coords[2, 0] == 9.0
    assert prop.chosen[2] == 4
    assert prop.values[2] == spec.fn(np.array([[9.0]]))[0]
    assert counter.probes == 6 * 4


def test_probe_count_per_step_both_modes(ehrenfest4_spec):
    spec = ehrenfest4_spec
    state = _demo_state(spec)
    for radius in (1, 2, 4):
        counter = EvalCounter()
        neighborhood_eval(state, spec, radius=radius, dither=0.01,
                          rng=np.random.default_rng(9), counter=counter)
        assert counter.probes == 6 * radius


def test_full_radius_dither_zero_ignores_rng(ehrenfest4_spec):
    spec = ehrenfest4_spec
    state = _demo_state(spec)
    rng = np.random.default_rng(123)
    before = rng.bit_generator.state
    a = neighborhood_eval(state, spec, radius=4, dither=0.0, rng=rng,
                          counter=EvalCounter())
    assert rng.bit_generator.state == before
    b = neighborhood_eval(state, spec, radius=4, dither=0.0,
                          rng=np.random.default_rng(999), counter=EvalCounter())
    assert np.array_equal(a.coords, b.coords)
    assert np.array_equal(a.values, b.values)


def test_random_radius_samples_eligible_sorted(ehrenfest4_spec):
    spec = ehrenfest4_spec
    state = _demo_state(spec)
    prop = neighborhood_eval(state, spec, radius=2, dither=0.0,
                             rng=np.random.default_rng(17), counter=EvalCounter())
    assert prop.neighbor_sets.shape == (6, 2)
    for i in range(6):
        row = prop.neighbor_sets[i]
        assert sorted(row) == list(row)
        eligible = set(eligible_neighbors(i, 6).tolist())
        assert set(row.tolist()) <= eligible


def test_radius_out_of_range(ehrenfest4_spec):
    state = _demo_state(ehrenfest4_spec)
    for radius in (0, 5):
        with pytest.raises(ValueError):
            neighborhood_eval(state, ehrenfest4_spec, radius=radius, dither=0.0,
                              rng=np.random.default_rng(0), counter=EvalCounter())


def test_proposals_in_bounds_any_dither():
    spec = get_objective("trefethen3")
    state = init_rulers(spec, 8, np.random.default_rng(2), EvalCounter())
    for dither in (0.0, 0.3, 1.0):
        prop = neighborhood_eval(state, spec, radius=6, dither=dither,
                                 rng=np.random.default_rng(4), counter=EvalCounter())
        assert np.all(prop.coords >= spec.lower) and np.all(prop.coords <= spec.upper)


def test_candidate_table_text():
    text = candidate_table_text(DEMO_MARKS, [1.0], [17.0])
    rows = [line.split("|")[1].split() for line in text.strip().splitlines()[1:]]
    table = [[float(c) for c in row] for row in rows]
    assert table == [
        [2, 4, 10, 12],
        [3, 9, 11, 16],
        [3, 7, 9, 14],
        [9, 7, 3, 8],
        [11, 9, 3, 6],
        [16, 14, 8, 6],
    ]
    assert text.endswith("\n")
