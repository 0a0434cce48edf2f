import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rotorlab.engine import (
    RecurrenceNotFound,
    _find_cycle_brent,
    _Stepper,
    arc_load_at,
    default_max_steps,
    init_state,
    run_until_recurrent,
    stabilization_bound,
    step,
)
from rotorlab.graph import Graph, generate


@pytest.fixture
def triangle():
    return generate("cycle", {"n": 3})


def test_init_state_examples(triangle):
    s = init_state(triangle, [1, 0, 0])
    assert s.k == 1 and s.pointers == (0, 0, 0)
    assert init_state(triangle, [2, 1, 0]).k == 3
    assert init_state(triangle, {2: 4}).loads == (0, 0, 4)
    a = init_state(triangle, 5, "random", seed=3)
    assert a == init_state(triangle, 5, "random", seed=3) and a.k == 5


@pytest.mark.parametrize(
    "placement, pointers",
    [([0, 0, 0], None), ([1, 0], None), ({7: 1}, None), ([-1, 2, 0], None), ([1, 0, 0], [0, 2, 0]), (0, None)],
)
def test_init_state_rejects(triangle, placement, pointers):
    with pytest.raises(ValueError):
        init_state(triangle, placement, pointers)


def test_step_on_single_edge():
    g = generate("path", {"n": 2})
    s, loads = step(g, init_state(g, [1, 0]))
    assert s.loads == (0, 1)
    assert loads == (1, 0)


def test_step_splits_round_robin():
    # node 1 has out-degree 2: three tokens send 2 on port 0 and 1 on port 1
    g = Graph.from_edges(3, [(1, 0), (1, 2)])
    s, loads = step(g, init_state(g, [0, 3, 0]))
    assert [loads[e] for e in g.ports[1]] == [2, 1]
    assert s.pointers[1] == 1


def test_step_with_no_tokens_moves_nothing(triangle):
    s0 = init_state(triangle, [1, 0, 0])
    zero = type(s0)(s0.pointers, (0, 0, 0))
    s1, loads = step(triangle, zero)
    assert s1 == zero and loads == (0,) * 6


def test_triangle_single_token_walks_eulerian_circuit(triangle):
    tr = run_until_recurrent(triangle, init_state(triangle, [1, 0, 0]))
    assert (tr.preperiod, tr.period) == (0, 6)
    assert (tr.loads.sum(axis=1) == 1).all()
    assert (tr.loads.sum(axis=0) == 1).all()


def test_path_with_loops_matches_enumeration():
    g = Graph.from_edges(2, [(0, 1), (0, 0), (1, 1)])
    tr = run_until_recurrent(g, init_state(g, [1, 0]))
    # frozen from the state-list oracle
    assert (tr.preperiod, tr.period) == (1, 4)
    assert tr.loads.tolist() == [[0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0], [0, 0, 0, 1]]


def test_k4_frozen_values():
    g = generate("complete", {"n": 4})
    s = init_state(g, 3, "random", seed=0)
    assert s.pointers == (1, 2, 1, 1) and s.loads == (1, 0, 0, 2)
    tr = run_until_recurrent(g, s)
    assert (tr.preperiod, tr.period) == (5, 4)


def test_arc_load_at_is_periodic(triangle):
    tr = run_until_recurrent(triangle, init_state(triangle, [2, 1, 0]))
    for t in range(-3, 10):
        for e in range(6):
            assert arc_load_at(tr, t, e) == arc_load_at(tr, t + tr.period, e)
        assert sum(arc_load_at(tr, t, e) for e in range(6)) == 3
    tri1 = run_until_recurrent(triangle, init_state(triangle, [1, 0, 0]))
    assert all(sum(tri1.arc_load_at(t, e) for e in range(6)) == 1 for t in range(6))


def test_budget_exhaustion_reports_steps():
    g = generate("cycle", {"n": 7})
    with pytest.raises(RecurrenceNotFound) as info:
        run_until_recurrent(g, init_state(g, [1] + [0] * 6), max_steps=3)
    assert info.value.steps == 3


def test_brent_fallback_agrees_with_dictionary():
    g = generate("grid", {"rows": 3, "cols": 3})
    s = init_state(g, 5, "random", seed=2)
    a = run_until_recurrent(g, s)
    b = run_until_recurrent(g, s, state_cap=3)
    assert (a.preperiod, a.period) == (b.preperiod, b.period)
    assert np.array_equal(a.loads, b.loads)


def test_brent_directly():
    g = generate("cycle", {"n": 5, "loops": 1})
    s = init_state(g, 3, "random", seed=9)
    mu, lam, _ = oracles.recurrence(g, s.pointers, s.loads)
    found = _find_cycle_brent(_Stepper(g), np.asarray(s.pointers), np.asarray(s.loads), 10**6)
    assert found == (mu, lam)


def test_stabilization_bound_formula(triangle):
    assert stabilization_bound(triangle, 1, diam=1) == 6**4 + 6
    assert default_max_steps(triangle, 1) == 10 * (6**4 + 6)


instances = st.tuples(
    st.sampled_from(
        [
            ("cycle", {"n": 4}),
            ("cycle", {"n": 5, "loops": 1}),
            ("tree", {"n": 6}),
            ("complete", {"n": 4}),
            ("grid", {"rows": 2, "cols": 3}),
        ]
    ),
    st.integers(1, 12),
    st.integers(0, 1000),
)


@settings(max_examples=40, deadline=None)
@given(instances)
def test_matches_token_by_token_oracle(inst):
    (kind, params), k, seed = inst
    g = generate(kind, params, seed=seed)
    s = init_state(g, k, "random", seed=seed)
    ptr, ld = list(s.pointers), list(s.loads)
    for _ in range(5):
        nxt, loads = step(g, s)
        ptr, ld, arc = oracles.step_tokens(g, ptr, ld)
        assert nxt.pointers == tuple(ptr) and nxt.loads == tuple(ld) and loads == tuple(arc)
        assert sum(nxt.loads) == k
        s = nxt
    s = init_state(g, k, "random", seed=seed)
    tr = run_until_recurrent(g, s)
    mu, lam, rows = oracles.recurrence(g, s.pointers, s.loads)
    assert (tr.preperiod, tr.period) == (mu, lam)
    assert tr.loads.tolist() == rows
    assert tr.preperiod <= 10 * stabilization_bound(g, k)


@settings(max_examples=20, deadline=None)
@given(instances)
def test_deterministic(inst):
    (kind, params), k, seed = inst
    g = generate(kind, params, seed=seed)
    s = init_state(g, k, "random", seed=seed)
    a, b = run_until_recurrent(g, s), run_until_recurrent(g, s)
    assert a.state == b.state and np.array_equal(a.loads, b.loads)
