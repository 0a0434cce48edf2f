import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from rotorlab.addcomb import ResidueSet, cover_kappa
from rotorlab.circulation import (
    BipartiteGraphError,
    CirculationError,
    ShiftModulusError,
    check_delta_axioms,
    circulation_from_phi,
    cycle_graphs,
    delta_table,
    extract_circulation,
    gphi_diameter,
    intersection_set,
    is_labeling,
    make_labeling,
    reconstruct_walk,
    replay_walk,
    shift_labeling,
)
from rotorlab.engine import LoadTrace, init_state, run_until_recurrent
from rotorlab.graph import Graph, generate


def recurrent(kind, params, k, seed=0):
    g = generate(kind, params, seed=seed)
    tr = run_until_recurrent(g, init_state(g, k, "random", seed=seed))
    return g, tr


def phi_from_walks(g, walks):
    """Circulation from closed node walks; each step uses the first unused matching arc."""
    used, phi = set(), [-1] * g.m
    for walk in walks:
        arcs = []
        for u, v in zip(walk, walk[1:] + walk[:1]):
            e = next(e for e in g.ports[u] if g.succ[e] == v and e not in used)
            used.add(e)
            arcs.append(e)
        for a, b in zip(arcs, arcs[1:] + arcs[:1]):
            phi[a] = b
    return phi


@pytest.fixture
def triangle_circ():
    g = generate("cycle", {"n": 3})
    tr = run_until_recurrent(g, init_state(g, [1, 0, 0]))
    return g, tr, extract_circulation(g, tr)


def test_triangle_single_token_is_eulerian(triangle_circ):
    g, tr, c = triangle_circ
    assert c.g == 1 and c.cycle_lengths == (6,)
    assert c.per_cycle_tokens == (1,)
    assert c.cycles == ((0, 1, 5, 3, 2, 4),)


def test_rejects_inconsistent_trace():
    g = generate("cycle", {"n": 3})
    loads = np.zeros((2, 6), dtype=np.int64)
    loads[0, 0] = 1
    loads[1, 4] = 1  # token teleports
    bogus = LoadTrace(2, 0, loads, 1, init_state(g, [1, 0, 0]))
    with pytest.raises(CirculationError):
        extract_circulation(g, bogus)


@pytest.mark.parametrize(
    "kind, params", [("cycle", {"n": 3, "loops": 1}), ("cycle", {"n": 5, "loops": 1}), ("cycle", {"n": 6, "loops": 1})]
)
@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_prime_arc_count_forces_single_cycle(kind, params, k):
    g, tr = recurrent(kind, params, k, seed=k)
    assert g.m in (7, 11, 13)
    assert extract_circulation(g, tr).g == 1


def test_k4_with_three_tokens_has_only_a_two_cycle_circulation():
    g, tr = recurrent("complete", {"n": 4}, 3, seed=1)
    rows = tr.loads.tolist()
    every = oracles.valid_circulations(g, rows)
    assert len(every) == 1
    c = extract_circulation(g, tr)
    assert list(c.phi) == every[0]
    assert c.g == 2 and math.gcd(3, g.m) == 3  # g <= gcd holds, g | gcd cannot


small_instances = st.tuples(
    st.sampled_from(
        [
            ("cycle", {"n": 4}),
            ("cycle", {"n": 6}),
            ("cycle", {"n": 5, "loops": 1}),
            ("tree", {"n": 6}),
            ("complete", {"n": 4}),
            ("grid", {"rows": 2, "cols": 3}),
            ("complete", {"n": 4, "loops": 1}),
        ]
    ),
    st.integers(1, 9),
    st.integers(0, 500),
)


@settings(max_examples=40, deadline=None)
@given(small_instances)
def test_extracted_circulation_properties(inst):
    (kind, params), k, seed = inst
    g, tr = recurrent(kind, params, k, seed)
    c = extract_circulation(g, tr)
    for e in range(g.m):
        assert g.pred[c.phi[e]] == g.succ[e]
        assert (tr.loads[:, e] == np.roll(tr.loads[:, c.phi[e]], -1)).all()
    assert sorted(x for cyc in c.cycles for x in cyc) == list(range(g.m))
    assert all(cyc[0] == min(cyc) for cyc in c.cycles)
    assert sum(c.per_cycle_tokens) == k
    assert all(ki * g.m == k * n for ki, n in zip(c.per_cycle_tokens, c.cycle_lengths))
    gcd = math.gcd(k, g.m)
    assert c.g <= gcd
    every = oracles.valid_circulations(g, tr.loads.tolist())
    counts = {len(oracles.cycles_of(phi)) for phi in every}
    assert all(n <= gcd for n in counts)
    fewest = extract_circulation(g, tr, cycles="fewest")
    assert fewest.g == min(counts)
    divisors = [n for n in counts if gcd % n == 0]
    assert c.g == (min(divisors) if divisors else min(counts))
    assert list(c.phi) in every and list(fewest.phi) in every
    assert extract_circulation(g, tr, cycles="local").g >= fewest.g


def test_cycle_count_prefers_a_divisor_of_gcd():
    g, tr = recurrent("cycle", {"n": 12}, 3, seed=0)
    # the only valid circulations have 2 or 3 cycles; gcd(3, 24) = 3
    assert extract_circulation(g, tr, cycles="fewest").g == 2
    c = extract_circulation(g, tr)
    assert c.g == 3 and c.ratios_consistent()
    with pytest.raises(ValueError):
        extract_circulation(g, tr, cycles="most")


def two_cycle_graph():
    # triangle 0-1-2 with a pendant path 0-3-4
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4)])
    phi = phi_from_walks(g, [[0, 3, 4, 3], [0, 1, 2, 0, 2, 1]])
    return g, circulation_from_phi(g, phi)


def test_labeling_examples(triangle_circ):
    g, _, c = triangle_circ
    lab = make_labeling(c, 6)
    assert [lab.labels[e] for e in c.cycles[0]] == list(range(6))
    assert set(make_labeling(c, 1).labels) == {0}
    with pytest.raises(ValueError):
        make_labeling(c, 4)


def test_two_cycles_lengths_four_and_six():
    g, c = two_cycle_graph()
    assert sorted(c.cycle_lengths) == [4, 6] and c.eta == 2
    lab = make_labeling(c, 2)
    assert is_labeling(c, lab)
    with pytest.raises(ValueError):
        make_labeling(c, 4)


def test_shift_labeling_makes_adjacent_cycles_lambda_adjacent():
    g, c = two_cycle_graph()
    for shifts in ([0, 0], [0, 1], [1, 0]):
        lab = shift_labeling(c, make_labeling(c, 2, shifts))
        cg = cycle_graphs(g, c, lab)
        assert 1 in cg.lambda_adjacency[0]
        assert is_labeling(c, lab)


def test_shift_labeling_is_identity_for_one_cycle(triangle_circ):
    _, _, c = triangle_circ
    lab = make_labeling(c)
    assert shift_labeling(c, lab) is lab


def test_cycle_graphs_single_cycle(triangle_circ):
    g, _, c = triangle_circ
    cg = cycle_graphs(g, c, make_labeling(c))
    assert cg.dist.tolist() == [[0]] and cg.diameter == 0


@settings(max_examples=30, deadline=None)
@given(small_instances)
def test_labeling_and_intersection_set_properties(inst):
    (kind, params), k, seed = inst
    g, tr = recurrent(kind, params, k, seed)
    c = extract_circulation(g, tr)
    lab = shift_labeling(c, make_labeling(c))
    assert is_labeling(c, lab)
    assert all(n % lab.eta == 0 for n in c.cycle_lengths)
    cg = cycle_graphs(g, c, lab)
    for i in range(c.g):
        assert cg.lambda_adjacency[i] <= cg.adjacency[i]
    assert cg.lambda_connected
    assert cg.lambda_dist.max() <= 2 * cg.diameter
    a = intersection_set(g, lab)
    brute = {
        (lab.labels[e1] - lab.labels[e2]) % lab.eta
        for v in range(g.n)
        for e1 in g.ports[v]
        for e2 in g.ports[v]
    }
    assert set(a) == brute
    assert 0 in a and -a == a
    moved = make_labeling(c, lab.eta, [lab.labels[cyc[0]] + 3 for cyc in c.cycles])
    assert intersection_set(g, moved) == a
    if not g.is_bipartite and lab.eta % 2 == 0:
        assert any(x % 2 for x in a)


def test_triangle_delta_profile_matches_literal_bfs(triangle_circ):
    g, _, c = triangle_circ
    table = delta_table(g, c)
    assert table.diagonal_profile(0).tolist() == [0, 2, 1, 1, 1, 2]
    assert all(check_delta_axioms(table).values())


def test_eulerian_delta_at_most_one_on_intersection_set(triangle_circ):
    g, _, c = triangle_circ
    table = delta_table(g, c)
    a = intersection_set(g, make_labeling(c, g.m))
    for x in a:
        for e in range(g.m):
            assert table.diagonal(e, x) <= 1


def test_shift_cap_reports_modulus():
    g, c = two_cycle_graph()
    with pytest.raises(ShiftModulusError) as info:
        delta_table(g, c, shift_modulus_cap=5)
    assert info.value.modulus == 12


@settings(max_examples=25, deadline=None)
@given(small_instances)
def test_delta_table_equals_literal_zero_one_bfs(inst):
    (kind, params), k, seed = inst
    g, tr = recurrent(kind, params, k, seed)
    c = extract_circulation(g, tr)
    table = delta_table(g, c)
    for e1 in range(g.m):
        L, dist = oracles.zero_one_bfs(g, c.phi, e1)
        assert L == table.modulus
        row = table.row(e1)
        for e2 in range(g.m):
            for x in range(L):
                expect = dist.get((e2, x))
                got = table.delta(e1, e2, x)
                assert (expect is None and got == math.inf) or got == expect
                assert row[e2, x] == (-1 if expect is None else expect)
    assert all(check_delta_axioms(table).values())


def test_gphi_triangle():
    g = generate("cycle", {"n": 3})
    c = extract_circulation(g, run_until_recurrent(g, init_state(g, [1, 0, 0])))
    assert gphi_diameter(g, c) == 2


def test_gphi_refuses_bipartite_non_tree():
    g, tr = recurrent("cycle", {"n": 4}, 1)
    with pytest.raises(BipartiteGraphError):
        gphi_diameter(g, extract_circulation(g, tr))


@settings(max_examples=25, deadline=None)
@given(small_instances)
def test_gphi_matches_definition(inst):
    (kind, params), k, seed = inst
    g, tr = recurrent(kind, params, k, seed)
    if g.is_bipartite and not g.is_tree:
        return
    c = extract_circulation(g, tr)
    assert gphi_diameter(g, c) == oracles.gphi_diameter(g, list(c.phi))


def test_walk_for_zero_shift_is_whole_circuit(triangle_circ):
    g, _, c = triangle_circ
    w = reconstruct_walk(g, c, 0, 12)
    assert w.fragments == ((g.ports[0][0], 6),)
    assert replay_walk(g, c, w)


def test_walk_needs_eulerian_circulation():
    g, c = two_cycle_graph()
    with pytest.raises(ValueError):
        reconstruct_walk(g, c, 0, 1)


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from([("cycle", {"n": 3}), ("cycle", {"n": 5, "loops": 1}), ("complete", {"n": 4, "loops": 1})]),
    st.integers(1, 4),
    st.integers(-50, 50),
    st.booleans(),
)
def test_walk_replays_with_requested_length(spec, k, l, nonneg):
    (kind, params) = spec
    g, tr = recurrent(kind, params, k, seed=k)
    c = extract_circulation(g, tr)
    if c.g != 1:
        return
    table = delta_table(g, c)
    for v in range(g.n):
        w = reconstruct_walk(g, c, v, l, nonnegative=nonneg)
        assert replay_walk(g, c, w)
        assert (w.length - l) % g.m == 0
        assert len(w.fragments) <= table.diagonal(g.ports[v][0], l) + 1
        if nonneg:
            arcs = w.arcs(c)
            assert g.pred[arcs[0]] == v and g.succ[arcs[-1]] == v


def test_residue_set_used_for_intersection(triangle_circ):
    g, _, c = triangle_circ
    a = intersection_set(g, make_labeling(c))
    assert isinstance(a, ResidueSet) and a.eta == 6


@pytest.mark.parametrize("n", [4, 6, 8])
def test_bipartite_intersection_set_never_covers(n):
    # every closed walk in a bipartite graph is even, so A stays in 2Z_eta
    g, tr = recurrent("cycle", {"n": n}, 1)
    c = extract_circulation(g, tr)
    a = intersection_set(g, make_labeling(c))
    assert c.g == 1 and a.eta % 2 == 0
    assert all(x % 2 == 0 for x in a)
    assert cover_kappa(a, 10 * a.eta) is None
