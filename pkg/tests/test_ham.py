import itertools
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hamext.edit import Chord, ExtensionMap, is_extension, realize_chords
from hamext.embedding import CombEmbedding, Multigraph
from hamext.generators import (
    cycle_on_sphere,
    fully_stellated_host,
    hypercube_graph,
    k4_planar,
    petersen_graph,
    petersen_torus,
    theta_graph,
)
from hamext.ham import (
    ExtensionCertificate,
    crossing,
    decide_ham_extendable,
    hamiltonian_cycle,
    min_added_edges,
    oracle_decide_with_added_vertices,
    verify_certificate,
)

from conftest import embeddings

# minimum chord count for the genus-1 Petersen fixture, from exhaustive search
PETERSEN_TORUS_MIN_EDGES = 1


def star():
    return CombEmbedding.from_neighbor_orders({0: [1, 2, 3], 1: [0], 2: [0], 3: [0]})


def is_ham_cycle(graph, cyc):
    n = len(graph.vertices)
    if sorted(cyc.vertices) != sorted(graph.vertices) or len(cyc.edges) != n or len(set(cyc.edges)) != n:
        return False
    for k, e in enumerate(cyc.edges):
        if sorted(graph.edges[e]) != sorted((cyc.vertices[k], cyc.vertices[(k + 1) % n])):
            return False
    return True


def brute_force_hamiltonian(graph):
    verts = list(graph.vertices)
    n = len(verts)
    pairs = {}
    for e, (a, b) in graph.edges.items():
        pairs.setdefault(frozenset((a, b)), []).append(e)
    if n == 1:
        return bool(pairs.get(frozenset((verts[0],))))
    if n == 2:
        return len(pairs.get(frozenset(verts), [])) >= 2
    for perm in itertools.permutations(verts[1:]):
        cyc = [verts[0], *perm]
        if all(frozenset((cyc[k], cyc[(k + 1) % n])) in pairs for k in range(n)):
            return True
    return False


def test_crossing_examples():
    assert crossing(Chord(0, 0, 2), Chord(0, 1, 3))
    assert not crossing(Chord(0, 0, 1), Chord(0, 2, 3))
    assert not crossing(Chord(0, 0, 2), Chord(0, 0, 3))


def test_hamiltonian_cycle_examples():
    assert hamiltonian_cycle(petersen_graph()) is None
    k4 = k4_planar().graph()
    cyc = hamiltonian_cycle(k4)
    assert cyc is not None and len(cyc.vertices) == 4 and is_ham_cycle(k4, cyc)
    assert hamiltonian_cycle(fully_stellated_host().graph()) is None
    q3 = hypercube_graph(3)
    assert is_ham_cycle(q3, hamiltonian_cycle(q3))


def test_hamiltonian_cycle_small_cases():
    assert hamiltonian_cycle(Multigraph((0,), {})) is None
    assert hamiltonian_cycle(Multigraph.from_edge_list([(0, 0)])).edges == (0,)
    assert hamiltonian_cycle(Multigraph.from_edge_list([(0, 1)])) is None
    assert hamiltonian_cycle(Multigraph.from_edge_list([(0, 1), (0, 1)])).edges == (0, 1)


@given(embeddings(max_p=7, max_q=12))
@settings(max_examples=200, deadline=None)
def test_hamiltonian_cycle_matches_brute_force(emb):
    graph = emb.graph()
    cyc = hamiltonian_cycle(graph)
    assert (cyc is not None) == brute_force_hamiltonian(graph)
    if cyc is not None:
        assert is_ham_cycle(graph, cyc)


@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_cycles_need_no_chords(n):
    emb = cycle_on_sphere(n)
    out = decide_ham_extendable(emb)
    assert out.status == "YES" and out.certificate.chords == ()
    assert verify_certificate(emb, out.certificate).ok
    assert min_added_edges(emb).min_chords == 0


def test_stellated_host_is_not_extendable():
    out = decide_ham_extendable(fully_stellated_host(), budget=10**7)
    assert out.status == "NO" and out.exhaustive and out.nodes <= 10**7


def test_petersen_torus():
    emb = petersen_torus()
    out = decide_ham_extendable(emb)
    assert out.status == "YES" and verify_certificate(emb, out.certificate).ok
    m = min_added_edges(emb)
    assert m.status == "YES" and m.min_chords == PETERSEN_TORUS_MIN_EDGES <= 3
    assert len(m.certificate.chords) == m.min_chords
    assert verify_certificate(emb, m.certificate).ok


def test_star_needs_two_chords():
    m = min_added_edges(star())
    assert m.min_chords == 2 and verify_certificate(star(), m.certificate).ok


def test_budget_gives_unknown():
    out = decide_ham_extendable(fully_stellated_host(), budget=50)
    assert out.status == "UNKNOWN" and not out.exhaustive
    assert min_added_edges(fully_stellated_host(), budget=50).status == "UNKNOWN"


def test_two_vertices_one_edge():
    emb = CombEmbedding.from_neighbor_orders({0: [1], 1: [0]})
    out = decide_ham_extendable(emb)
    assert out.status == "YES" and len(out.certificate.chords) == 1
    assert verify_certificate(emb, out.certificate).ok


def test_lone_vertex_without_loop():
    emb = CombEmbedding({}, {0: ()})
    out = decide_ham_extendable(emb)
    assert out.status == "YES" and out.certificate is None
    assert min_added_edges(emb).min_chords == 1
    wit = oracle_decide_with_added_vertices(emb)
    assert wit.status == "YES" and is_extension(emb, wit.certificate.extension).ok


def test_verify_rejects_crossing_chords():
    sq = cycle_on_sphere(4)
    cert = ExtensionCertificate((Chord(0, 0, 2), Chord(0, 1, 3)), (0, 1, 2, 3), tuple(("edge", e) for e in range(4)))
    rep = verify_certificate(sq, cert)
    assert not rep.ok and "cross" in rep.problems[0]


def test_verify_rejects_skipped_vertex():
    sq = cycle_on_sphere(4)
    cert = ExtensionCertificate((Chord(0, 0, 2),), (0, 1, 2), (("edge", 0), ("edge", 1), ("chord", 0)))
    assert not verify_certificate(sq, cert).ok


def test_verify_rejects_wrong_link():
    emb = theta_graph()
    cert = decide_ham_extendable(emb).certificate
    links = list(cert.links)
    kind, ident = links[0]
    links[0] = (kind, ident + 1) if kind == "edge" else ("edge", 0)
    bad = ExtensionCertificate(cert.chords, cert.cycle, tuple(links))
    assert not verify_certificate(emb, bad).ok


def test_verify_rejects_reused_edge():
    emb = CombEmbedding.from_neighbor_orders({0: [1], 1: [0]})
    cert = ExtensionCertificate((), (0, 1), (("edge", 0), ("edge", 0)))
    assert not verify_certificate(emb, cert).ok


@given(embeddings(max_p=7, max_q=10))
@settings(max_examples=200, deadline=None)
def test_yes_certificates_verify(emb):
    out = decide_ham_extendable(emb)
    assert out.status in ("YES", "NO")
    if out.status == "YES" and emb.q:
        assert verify_certificate(emb, out.certificate).ok


@given(embeddings(max_p=7, max_q=10))
@settings(max_examples=150, deadline=None)
def test_zero_chords_iff_hamiltonian(emb):
    m = min_added_edges(emb)
    assert (m.min_chords == 0) == (hamiltonian_cycle(emb.graph()) is not None)
    if m.status == "YES" and emb.q:
        assert len(m.certificate.chords) == m.min_chords


@given(embeddings(max_p=7, max_q=10), st.integers(0, 2**32 - 1))
@settings(max_examples=150, deadline=None)
def test_chord_compatible_with_certificate_keeps_yes(emb, seed):
    out = decide_ham_extendable(emb)
    assume(out.status == "YES")
    rng = random.Random(seed)
    options = [
        Chord(f.face_id, i, j)
        for f in emb.faces
        for i, j in itertools.combinations(range(len(f)), 2)
        if f.vertices[i] != f.vertices[j]
    ]
    options = [c for c in options if not any(crossing(c, k) for k in out.certificate.chords)]
    assume(options)
    bigger = realize_chords(emb, [rng.choice(options)])
    assert decide_ham_extendable(bigger).status == "YES"


def test_blocking_chord_can_destroy_extendability():
    # leaf 5 and vertex 3 each reach only {1, 2} once the chord is drawn
    emb = CombEmbedding(
        {0: (0, 6), 1: (2, 6), 2: (2, 5), 3: (4, 6), 4: (0, 1), 5: (1, 3), 6: (3, 3), 7: (1, 2), 8: (1, 2)},
        {0: (0, 8), 1: (9, 16, 10, 14), 2: (2, 15, 4, 17), 3: (11, 12, 13), 4: (6,), 5: (5,), 6: (1, 7, 3)},
    )
    assert decide_ham_extendable(emb).status == "YES"
    assert decide_ham_extendable(realize_chords(emb, [Chord(2, 0, 3)])).status == "NO"


def test_oracle_examples():
    assert oracle_decide_with_added_vertices(cycle_on_sphere(4), 1).status == "YES"
    assert oracle_decide_with_added_vertices(fully_stellated_host()).status == "NO"
    assert oracle_decide_with_added_vertices(petersen_torus()).status == "YES"
    assert oracle_decide_with_added_vertices(star()).status == "YES"


def test_oracle_reports_unknown_when_cap_is_low():
    # the star needs two interior segments in its only region
    assert oracle_decide_with_added_vertices(star(), 1).status == "UNKNOWN"
    with pytest.raises(ValueError):
        oracle_decide_with_added_vertices(star(), 3)


@given(embeddings(max_p=6, max_q=9))
@settings(max_examples=100, deadline=None)
def test_oracle_witnesses_are_extensions(emb):
    out = oracle_decide_with_added_vertices(emb)
    if out.status == "YES":
        w = out.certificate
        assert is_extension(emb, w.extension).ok
        assert is_ham_cycle(w.extension.extended.graph(), w.cycle)


@given(embeddings(max_p=6, max_q=9))
@settings(max_examples=100, deadline=None)
def test_decider_agrees_with_oracle(emb):
    d = decide_ham_extendable(emb)
    o = oracle_decide_with_added_vertices(emb)
    if o.status == "YES":
        assert d.status == "YES"
    if o.exhaustive and d.exhaustive:
        assert d.status == o.status


def test_extension_identity_of_certificate():
    emb = petersen_torus()
    cert = min_added_edges(emb).certificate
    big = realize_chords(emb, cert.chords)
    assert is_extension(emb, ExtensionMap.identity(emb, big)).ok
