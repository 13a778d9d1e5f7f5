import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamext.edit import (
    Chord,
    ChordCrossingError,
    ExtensionMap,
    ExtensionMapError,
    FacePosition,
    add_corner_edge,
    add_face_vertex,
    chords_cross,
    is_extension,
    is_topological_extension,
    realize_chords,
    restore_base,
    split_dart,
    stellate,
    subdivide_edge,
)
from hamext.embedding import CombEmbedding, stats, validate
from hamext.generators import cycle_on_sphere, grid_on_torus, k4_planar, theta_graph

from conftest import embeddings


def counts(emb):
    s = stats(emb)
    return s.p, s.q, s.r, s.genus


def test_chord_normalizes_order():
    assert Chord(0, 3, 1) == Chord(0, 1, 3)
    assert Chord.between(FacePosition(2, 4), FacePosition(2, 0)) == Chord(2, 0, 4)
    with pytest.raises(ValueError):
        Chord.between(FacePosition(0, 1), FacePosition(1, 2))


@pytest.mark.parametrize(
    "a, b, expected",
    [((0, 2), (1, 3), True), ((0, 1), (2, 3), False), ((0, 2), (0, 3), False), ((0, 3), (1, 2), False)],
)
def test_chords_cross_square(a, b, expected):
    assert chords_cross(Chord(0, *a), Chord(0, *b)) is expected
    assert chords_cross(Chord(0, *b), Chord(0, *a)) is expected


def test_chords_in_different_faces_never_cross():
    assert not chords_cross(Chord(0, 0, 2), Chord(1, 1, 3))


def test_split_dart_shape():
    emb = cycle_on_sphere(3)
    out, x, cont = split_dart(emb, 0)
    assert x == 3 and counts(out) == (4, 4, 2, 0)
    assert out.rotation[x] == (1, cont)
    assert out.head_of(0) == x and out.head_of(cont) == 1


@pytest.mark.parametrize("d", [0, 1, 4, 5])
def test_split_dart_keeps_faces(d):
    emb = theta_graph()
    out, x, cont = split_dart(emb, d)
    assert counts(out)[2] == emb.r
    f, _ = out.face_of[cont]
    assert f == out.corner_face(d)
    assert out.corner_face(d ^ 1) == out.corner_face(cont ^ 1)


def test_subdivide_edge_counts():
    emb = subdivide_edge(k4_planar(), 2, count=3)
    assert counts(emb) == (7, 9, 4, 0)
    with pytest.raises(KeyError):
        subdivide_edge(k4_planar(), 99)


def test_add_face_vertex_counts():
    emb = grid_on_torus(3, 3)
    out = add_face_vertex(emb, 0, [0, 2])
    assert counts(out) == (10, 20, 10, 1)
    assert is_extension(emb, ExtensionMap.identity(emb, out)).ok


def test_add_face_vertex_rejects_bad_positions():
    emb = k4_planar()
    with pytest.raises(ValueError):
        add_face_vertex(emb, 0, [])
    with pytest.raises(ValueError):
        add_face_vertex(emb, 0, [0, 0])
    with pytest.raises(ValueError):
        add_face_vertex(emb, 0, [5])


def test_stellate_needs_triangle():
    assert counts(stellate(k4_planar(), 0)) == (5, 9, 6, 0)
    with pytest.raises(ValueError):
        stellate(cycle_on_sphere(4), 0)


def test_realize_chords_square():
    sq = cycle_on_sphere(4)
    out = realize_chords(sq, [Chord(0, 0, 2)])
    assert counts(out) == (4, 5, 3, 0)
    with pytest.raises(ChordCrossingError):
        realize_chords(sq, [Chord(0, 0, 2), Chord(0, 1, 3)])
    with pytest.raises(ValueError):
        realize_chords(sq, [Chord(7, 0, 1)])


def test_parallel_chords_nest():
    sq = cycle_on_sphere(4)
    out = realize_chords(sq, [Chord(0, 0, 2), Chord(0, 0, 2)])
    assert counts(out) == (4, 6, 4, 0)
    assert sorted(len(f) for f in out.faces) == [2, 3, 3, 4]


def test_chords_at_repeated_vertex():
    # a path 0-1-2 has one region visiting 1 twice
    path = CombEmbedding.from_neighbor_orders({0: [1], 1: [0, 2], 2: [1]})
    walk = path.faces[0]
    assert walk.vertices.count(1) == 2
    i0, i2 = walk.vertices.index(0), walk.vertices.index(2)
    out = realize_chords(path, [Chord(0, i0, i2)])
    assert counts(out) == (3, 3, 2, 0)
    ones = [k for k, v in enumerate(walk.vertices) if v == 1]
    with pytest.raises(ValueError):
        realize_chords(path, [Chord(0, *ones)])


def test_add_corner_edge_loop():
    emb = cycle_on_sphere(3)
    out, e = add_corner_edge(emb, 0, 0)
    assert out.edges[e] == (0, 0) and counts(out) == (3, 4, 3, 0)
    with pytest.raises(ValueError):
        add_corner_edge(grid_on_torus(3, 3), 0, 6 * 2 + 1)


def test_topological_extension_requires_flag():
    emb = k4_planar()
    out, x, cont = split_dart(emb, 0)
    paths = {e: (2 * e,) for e in emb.edges}
    paths[0] = (0, cont)
    ext = ExtensionMap(emb, out, {v: v for v in emb.vertices}, paths)
    assert is_topological_extension(emb, ext).ok
    with pytest.raises(ExtensionMapError):
        is_extension(emb, ext)


def test_rotation_change_is_not_extension():
    emb = k4_planar()
    flipped = {v: tuple(reversed(r)) for v, r in emb.rotation.items()}
    other = CombEmbedding(dict(emb.edges), flipped)
    rep = is_extension(emb, ExtensionMap.identity(emb, other))
    assert not rep.ok


def test_added_piece_spanning_regions_is_rejected():
    # joining vertices of K4 through a handle is no longer inside one region
    emb = k4_planar()
    edges = dict(emb.edges)
    edges[6] = (0, 3)
    rotation = dict(emb.rotation)
    rotation[0] = rotation[0] + (12,)
    rotation[3] = (13,) + rotation[3]
    big = CombEmbedding(edges, rotation)
    assert validate(big).ok
    rep = is_extension(emb, ExtensionMap.identity(emb, big))
    assert not rep.ok


def test_restore_base_round_trip():
    emb = theta_graph()
    big = add_face_vertex(emb, 1, [0, 1, 2])
    big = realize_chords(big, [Chord(0, 0, 2)])
    ext = ExtensionMap.identity(emb, big)
    assert is_extension(emb, ext).ok
    assert restore_base(ext) == emb


def _random_edit(rng, emb):
    """One random edit, with the change it should make to (p, q, r) and genus."""
    kind = rng.choice(["split", "vertex", "chord", "corner"])
    if kind == "split" and emb.q:
        return split_dart(emb, rng.choice(emb.darts))[0], (1, 1, 0)
    face = rng.randrange(emb.r)
    walk = emb.faces[face]
    if kind == "vertex" and len(walk):
        j = rng.randint(1, len(walk))
        return add_face_vertex(emb, face, rng.sample(range(len(walk)), j)), (1, j, j - 1)
    if kind == "chord":
        pairs = [(i, j) for i in range(len(walk)) for j in range(i + 1, len(walk)) if walk.vertices[i] != walk.vertices[j]]
        if pairs:
            return realize_chords(emb, [Chord(face, *rng.choice(pairs))]), (0, 1, 1)
    if len(walk):
        a, b = rng.choice(walk.darts), rng.choice(walk.darts)
        return add_corner_edge(emb, a, b)[0], (0, 1, 1)
    return emb, (0, 0, 0)


@given(embeddings(), st.integers(0, 2**32 - 1))
@settings(max_examples=100, deadline=None)
def test_edit_bookkeeping(emb, seed):
    rng = random.Random(seed)
    base = emb
    for _ in range(10):
        before = counts(emb)
        emb, (dp, dq, dr) = _random_edit(rng, emb)
        after = counts(emb)
        assert after == (before[0] + dp, before[1] + dq, before[2] + dr, before[3])
        assert sum(len(f) for f in emb.faces) == 2 * emb.q
        assert sorted(d for f in emb.faces for d in f.darts) == sorted(emb.darts)
    assert stats(emb).genus == stats(base).genus


@given(embeddings(min_p=2))
@settings(max_examples=100, deadline=None)
def test_face_vertex_is_extension(emb):
    rng = random.Random(emb.q)
    face = rng.randrange(emb.r)
    n = len(emb.faces[face])
    big = add_face_vertex(emb, face, rng.sample(range(n), rng.randint(1, n)))
    rep = is_extension(emb, ExtensionMap.identity(emb, big))
    assert rep.ok
    assert rep.region_of_vertex == {emb.next_vertex_id(): face}
    assert restore_base(ExtensionMap.identity(emb, big)) == emb
