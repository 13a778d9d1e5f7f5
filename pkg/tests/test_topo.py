import dataclasses
import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamext.edit import restrict, stellate
from hamext.embedding import CombEmbedding, stats, twin
from hamext.generators import (
    cycle_on_sphere,
    fully_stellated_host,
    grid_on_torus,
    petersen_torus,
    theta_graph,
)
from hamext.ham import decide_ham_extendable
from hamext.topo import (
    build_extension,
    min_crossings_search,
    plan_route,
    all_shortest_routes,
    verify_result,
)

from conftest import embeddings


def no_instance():
    """Four vertices, not Hamiltonian-extendable by chords alone."""
    return CombEmbedding(
        {0: (0, 1), 1: (0, 3), 2: (2, 3), 3: (3, 3), 4: (2, 3)},
        {0: (0, 2), 1: (1,), 2: (4, 8), 3: (3, 6, 5, 9, 7)},
    )


def dual_distance(emb, u, v):
    g = nx.MultiGraph()
    g.add_nodes_from(range(emb.r))
    for d in emb.darts:
        g.add_edge(emb.corner_face(d), emb.corner_face(twin(d)))
    src = {emb.corner_face(d) for d in emb.rotation[u]}
    dst = {emb.corner_face(d) for d in emb.rotation[v]}
    dist = nx.multi_source_dijkstra_path_length(g, src)
    return min(dist[f] for f in dst)


def test_triangle_route_needs_no_crossing():
    emb = cycle_on_sphere(3)
    route = plan_route(emb, 0, 1, set(emb.edges))
    assert route.crossings == ()
    assert emb.vertex_of(route.start) == 0 and emb.vertex_of(route.end) == 1


@pytest.mark.parametrize("m, n", [(3, 3), (4, 4), (4, 5)])
def test_grid_routes_match_dual_distance(m, n):
    emb = grid_on_torus(m, n)
    for v in emb.vertices:
        route = plan_route(emb, 0, v, set(emb.edges)) if v else None
        if route is not None:
            assert len(route) == dual_distance(emb, 0, v)


def test_blocked_edges_lengthen_route():
    emb = grid_on_torus(4, 4)
    free = plan_route(emb, 0, 10, set(emb.edges))
    assert len(free) == dual_distance(emb, 0, 10) == 2
    allowed = set(emb.edges) - {d >> 1 for d in free.crossings}
    alt = plan_route(emb, 0, 10, allowed)
    assert len(alt) >= len(free)
    assert all(d >> 1 in allowed for d in alt.crossings)


def test_shortest_routes_are_enumerated_in_order():
    emb = grid_on_torus(4, 4)
    routes = list(all_shortest_routes(emb, 0, 10, set(emb.edges)))
    assert routes[0] == plan_route(emb, 0, 10, set(emb.edges))
    assert len(routes) > 1 and len({r.crossings for r in routes}) == len(routes)
    assert all(len(r) == len(routes[0]) for r in routes)
    assert len(list(all_shortest_routes(emb, 0, 10, set(emb.edges), limit=2))) == 2


def test_triangle_extension():
    emb = cycle_on_sphere(3)
    res = build_extension(emb)
    assert res.crossing_count == 0
    g = res.extended
    assert (g.p, g.q) == (3, 6)
    pairs = sorted(tuple(sorted(ab)) for ab in g.edges.values())
    assert pairs == [(0, 1), (0, 1), (0, 2), (0, 2), (1, 2), (1, 2)]
    assert verify_result(emb, res).ok


def test_stellated_host_still_has_topological_extension():
    emb = fully_stellated_host()
    assert decide_ham_extendable(emb).status == "NO"
    res = build_extension(emb)
    assert res.crossing_count > 0
    assert verify_result(emb, res).ok


def test_single_vertex_cases():
    loop = cycle_on_sphere(1)
    res = build_extension(loop)
    assert verify_result(loop, res).ok and res.hamiltonian_cycle.vertices == (0,)
    bare = CombEmbedding({}, {0: ()})
    res = build_extension(bare)
    assert verify_result(bare, res).ok and res.extended.edges == {0: (0, 0)}


def test_two_vertices():
    emb = CombEmbedding.from_neighbor_orders({0: [1], 1: [0]})
    res = build_extension(emb)
    assert verify_result(emb, res).ok and len(res.hamiltonian_cycle.edges) == 2


def test_order_validation():
    with pytest.raises(ValueError):
        build_extension(cycle_on_sphere(3), [0, 1])
    with pytest.raises(ValueError):
        build_extension(cycle_on_sphere(3), [0, 1, 1])


def test_tamper_deleted_curve_edge():
    emb = theta_graph()
    res = build_extension(emb)
    g = res.extended
    dropped = res.hamiltonian_cycle.edges[0]
    broken = restrict(g, [e for e in g.edges if e != dropped], g.vertices)
    assert not verify_result(emb, dataclasses.replace(res, extended=broken)).ok


def test_tamper_non_alternating_crossing():
    emb = fully_stellated_host()
    res = build_extension(emb)
    x = res.crossings[0]
    rot = list(res.extended.rotation[x])
    rot[1], rot[2] = rot[2], rot[1]
    g = CombEmbedding(res.extended.edges, {**res.extended.rotation, x: tuple(rot)})
    rep = verify_result(emb, dataclasses.replace(res, extended=g))
    assert not rep.ok
    assert any("crossing" in p for p in rep.problems)


def test_tamper_wrong_count():
    emb = grid_on_torus(3, 3)
    res = build_extension(emb, seed=4)
    assert not verify_result(emb, dataclasses.replace(res, crossing_count=res.crossing_count + 1)).ok


def test_deterministic():
    emb = petersen_torus()
    a = build_extension(emb, seed=11)
    b = build_extension(emb, seed=11)
    assert a.extended == b.extended and a.hamiltonian_cycle == b.hamiltonian_cycle and a.plan == b.plan


@given(embeddings(max_p=8, max_q=14), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_extension_invariants(emb, seed):
    order = list(emb.vertices)
    random.Random(seed).shuffle(order)
    res = build_extension(emb, order)
    rep = verify_result(emb, res)
    assert rep.ok, rep.problems
    g = res.extended
    assert g.p == emb.p + res.crossing_count == len(res.hamiltonian_cycle.vertices)
    assert stats(g).genus == stats(emb).genus
    assert stats(res.gamma_prime).genus == stats(emb).genus
    assert res.gamma_prime.p == g.p and res.gamma_prime.q == emb.q + res.crossing_count
    # a bare vertex gets its loop without routing
    assert len(res.plan.routes) == (emb.p if emb.q else 0)
    assert sum(len(r) for r in res.plan.routes) == res.crossing_count
    if res.crossing_count == 0:
        assert decide_ham_extendable(emb).status == "YES"


@pytest.mark.parametrize("n", [3, 5])
def test_min_crossings_cycle(n):
    s = min_crossings_search(cycle_on_sphere(n), "exact")
    assert s.crossing_count == 0 and s.proven_minimal


def test_min_crossings_stellated_triangle():
    emb = stellate(cycle_on_sphere(3), 0)
    s = min_crossings_search(emb, "exact")
    assert emb.p == 4 and s.orders_tried <= 24
    assert s.crossing_count <= 2 and verify_result(emb, s.best).ok


def test_min_crossings_one_stellation():
    emb = fully_stellated_host(0)
    s = min_crossings_search(emb, "exact")
    assert s.crossing_count <= 2 and s.searched_all
    assert verify_result(emb, s.best).ok


def test_min_crossings_positive_minimum():
    emb = no_instance()
    assert decide_ham_extendable(emb).status == "NO"
    s = min_crossings_search(emb, "exact")
    # zero crossings would give a chord-only extension, so one is optimal
    assert s.crossing_count == 1 and s.searched_all
    assert verify_result(emb, s.best).ok


def test_min_crossings_heuristic_petersen():
    emb = petersen_torus()
    s = min_crossings_search(emb, "heuristic", samples=100, seed=1)
    assert s.mode == "heuristic" and not s.searched_all
    assert s.orders_tried == 100
    assert s.proven_minimal == (s.crossing_count == 0)
    assert verify_result(emb, s.best).ok


def test_min_crossings_budget_and_limits():
    s = min_crossings_search(no_instance(), "exact", budget=3)
    assert not s.searched_all
    with pytest.raises(ValueError):
        min_crossings_search(petersen_torus(), "exact")
    with pytest.raises(ValueError):
        min_crossings_search(cycle_on_sphere(3), "fast")
