"""Structure-preserving edits of rotation systems and the extension checkers.

Boundary positions are addressed by *occurrence* in a face walk
(:class:`FacePosition`), never by vertex: a vertex may appear several times on
the boundary of one region and each appearance is a different corner.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from networkx.utils import UnionFind

from .embedding import CombEmbedding, require_valid, stats

__all__ = [
    "Chord",
    "ChordCrossingError",
    "ExtensionMap",
    "ExtensionMapError",
    "ExtensionReport",
    "FacePosition",
    "add_face_vertex",
    "chords_cross",
    "is_extension",
    "is_topological_extension",
    "realize_chords",
    "restore_base",
    "restrict",
    "split_dart",
    "stellate",
    "stellate_faces",
    "subdivide_edge",
]


@dataclass(frozen=True, order=True)
class FacePosition:
    face_id: int
    index: int


@dataclass(frozen=True, order=True)
class Chord:
    """A new edge drawn inside one region between two boundary occurrences ``i < j``."""

    face_id: int
    i: int
    j: int

    def __post_init__(self) -> None:
        if self.i > self.j:
            a, b = self.j, self.i
            object.__setattr__(self, "i", a)
            object.__setattr__(self, "j", b)

    @classmethod
    def between(cls, x: FacePosition, y: FacePosition) -> "Chord":
        if x.face_id != y.face_id:
            raise ValueError(f"chord endpoints lie in different faces ({x.face_id}, {y.face_id})")
        return cls(x.face_id, x.index, y.index)


class ChordCrossingError(ValueError):
    def __init__(self, first: Chord, second: Chord):
        super().__init__(f"chords {first} and {second} cross")
        self.pair = (first, second)


def chords_cross(c1: Chord, c2: Chord) -> bool:
    """True iff both chords lie in one face and their four endpoints strictly interleave."""
    if c1.face_id != c2.face_id:
        return False
    if len({c1.i, c1.j, c2.i, c2.j}) < 4:
        return False
    return (c1.i < c2.i < c1.j) != (c1.i < c2.j < c1.j)


# low-level rotation surgery


def _insert_before(rotation: dict[int, list[int]], v: int, anchor: int, new: Sequence[int]) -> None:
    rot = rotation[v]
    k = rot.index(anchor)
    rot[k:k] = list(new)


def _mutable(emb: CombEmbedding) -> tuple[dict[int, tuple[int, int]], dict[int, list[int]]]:
    return dict(emb.edges), {v: list(r) for v, r in emb.rotation.items()}


def split_dart(emb: CombEmbedding, d: int) -> tuple[CombEmbedding, int, int]:
    """Put a fresh degree-2 vertex ``x`` on the edge of dart ``d``.

    ``d`` keeps its tail and now ends at ``x``; the returned continuation dart
    leaves ``x`` towards ``d``'s old head.  The rotation at ``x`` is
    ``(twin(d), continuation)``.  Returns ``(embedding, x, continuation)``.
    """
    edges, rotation = _mutable(emb)
    e = d >> 1
    a, b = edges[e]
    x = emb.next_vertex_id()
    n = emb.next_edge_id()
    if d & 1 == 0:
        edges[e] = (a, x)
        edges[n] = (x, b)
        rot_b = rotation[b]
        rot_b[rot_b.index(2 * e + 1)] = 2 * n + 1
        rotation[x] = [2 * e + 1, 2 * n]
        cont = 2 * n
    else:
        edges[e] = (x, b)
        edges[n] = (a, x)
        rot_a = rotation[a]
        rot_a[rot_a.index(2 * e)] = 2 * n
        rotation[x] = [2 * e, 2 * n + 1]
        cont = 2 * n + 1
    return CombEmbedding(edges, rotation), x, cont


def subdivide_edge(emb: CombEmbedding, edge: int, count: int = 1) -> CombEmbedding:
    """Replace ``edge`` by a path through ``count`` fresh degree-2 vertices.

    The edge id survives as the first segment, so the dart at its first
    endpoint is untouched; the last segment takes over the other end's
    position in that endpoint's rotation.
    """
    if edge not in emb.edges:
        raise KeyError(f"unknown edge {edge}")
    if count < 1:
        raise ValueError("count must be >= 1")
    d = 2 * edge
    for _ in range(count):
        emb, _, d = split_dart(emb, d)
    return emb


def _positions(emb: CombEmbedding, face: int, attachments: Iterable[FacePosition | int]) -> list[int]:
    out = []
    for pos in attachments:
        if isinstance(pos, FacePosition):
            if pos.face_id != face:
                raise ValueError(f"position {pos} is not in face {face}")
            pos = pos.index
        out.append(int(pos))
    if len(set(out)) != len(out):
        raise ValueError(f"duplicate attachment positions {out}")
    return out


def add_face_vertex(emb: CombEmbedding, face: int, attachments: Sequence[FacePosition | int]) -> CombEmbedding:
    """Place a new vertex inside ``face`` joined to the given boundary occurrences.

    With ``j`` attachments the region splits into ``j`` regions.  The new
    vertex gets id ``emb.next_vertex_id()`` and its edges take the next ids in
    walk order of the attachment positions.
    """
    require_valid(emb)
    walk = emb.faces[face]
    positions = sorted(_positions(emb, face, attachments))
    if not positions:
        raise ValueError("need at least one attachment")
    if positions[0] < 0 or positions[-1] >= len(walk):
        raise ValueError(f"positions {positions} out of range for face {face} of length {len(walk)}")
    edges, rotation = _mutable(emb)
    w = emb.next_vertex_id()
    e0 = emb.next_edge_id()
    w_darts = []
    for k, pos in enumerate(positions):
        e = e0 + k
        u = walk.vertices[pos]
        edges[e] = (u, w)
        _insert_before(rotation, u, walk.darts[pos], [2 * e])
        w_darts.append(2 * e + 1)
    # successor of the dart towards a later corner is the one towards the previous corner
    rotation[w] = w_darts[::-1]
    return CombEmbedding(edges, rotation)


def stellate(emb: CombEmbedding, face: int) -> CombEmbedding:
    """Put a vertex inside a triangular region and join it to the three corners."""
    require_valid(emb)
    if len(emb.faces[face]) != 3:
        raise ValueError(f"face {face} has walk length {len(emb.faces[face])}, not 3")
    return add_face_vertex(emb, face, [0, 1, 2])


def stellate_faces(emb: CombEmbedding, darts: Iterable[int]) -> CombEmbedding:
    """Stellate, in order, the regions containing each of the given darts."""
    for d in darts:
        emb = stellate(emb, emb.corner_face(d))
    return emb


def realize_chords(emb: CombEmbedding, chords: Sequence[Chord | tuple[FacePosition, FacePosition]]) -> CombEmbedding:
    """Draw every chord as a new edge inside its region.

    New edge ids follow the chord order; the ``a`` end of each new edge is at
    the chord's smaller occurrence.  Chords leaving one corner are stacked by
    how far forward along the walk their other end lies, and parallel chords
    nest with the later-listed one innermost.
    """
    require_valid(emb)
    chords = [c if isinstance(c, Chord) else Chord.between(*c) for c in chords]
    for c in chords:
        if not 0 <= c.face_id < emb.r:
            raise ValueError(f"{c}: no face {c.face_id}")
        walk = emb.faces[c.face_id]
        if not (0 <= c.i < len(walk) and 0 <= c.j < len(walk)):
            raise ValueError(f"{c}: position out of range for walk length {len(walk)}")
        if walk.vertices[c.i] == walk.vertices[c.j]:
            raise ValueError(f"{c}: endpoints are the same vertex {walk.vertices[c.i]}")
    for k, c1 in enumerate(chords):
        for c2 in chords[k + 1:]:
            if chords_cross(c1, c2):
                raise ChordCrossingError(c1, c2)
    edges, rotation = _mutable(emb)
    e0 = emb.next_edge_id()
    corners: dict[tuple[int, int], list[tuple[int, int, int]]] = {}
    for k, c in enumerate(chords):
        walk = emb.faces[c.face_id]
        n = len(walk)
        e = e0 + k
        edges[e] = (walk.vertices[c.i], walk.vertices[c.j])
        for here, other, dart in ((c.i, c.j, 2 * e), (c.j, c.i, 2 * e + 1)):
            forward = (other - here) % n
            tie = k if here < other else -k
            corners.setdefault((c.face_id, here), []).append((-forward, tie, dart))
    for (f, pos), entries in sorted(corners.items()):
        walk = emb.faces[f]
        entries.sort()
        _insert_before(rotation, walk.vertices[pos], walk.darts[pos], [d for _, _, d in entries])
    return CombEmbedding(edges, rotation)


def add_corner_edge(emb: CombEmbedding, u_anchor: int, v_anchor: int) -> tuple[CombEmbedding, int]:
    """Add an edge from the corner before dart ``u_anchor`` to the corner before ``v_anchor``.

    Both corners must lie on one face walk.  Equal anchors give a loop drawn
    inside that corner.  Returns the embedding and the new edge id.
    """
    if not emb.same_face(u_anchor, v_anchor):
        raise ValueError("corners lie in different faces")
    edges, rotation = _mutable(emb)
    e = emb.next_edge_id()
    u, v = emb.vertex_of(u_anchor), emb.vertex_of(v_anchor)
    edges[e] = (u, v)
    if u_anchor == v_anchor:
        _insert_before(rotation, u, u_anchor, [2 * e, 2 * e + 1])
    else:
        _insert_before(rotation, u, u_anchor, [2 * e])
        _insert_before(rotation, v, v_anchor, [2 * e + 1])
    return CombEmbedding(edges, rotation), e


def restrict(emb: CombEmbedding, keep_edges: Iterable[int], keep_vertices: Iterable[int] = ()) -> CombEmbedding:
    """The sub-rotation-system on ``keep_edges``, their endpoints and ``keep_vertices``."""
    keep = set(keep_edges)
    verts = set(keep_vertices)
    for e in keep:
        verts.update(emb.edges[e])
    rotation = {v: tuple(d for d in emb.rotation[v] if (d >> 1) in keep) for v in verts}
    return CombEmbedding({e: emb.edges[e] for e in keep}, rotation)


# extension relation


class ExtensionMapError(ValueError):
    """The vertex/edge correspondence itself is malformed."""


@dataclass(frozen=True)
class ExtensionMap:
    """Correspondence from a base embedding into an extended one.

    ``edge_map[e]`` is the dart path in ``extended`` that realizes base edge
    ``e``, running from the image of ``e``'s first endpoint to the image of its
    second; a plain extension uses one-dart paths.
    """

    base: CombEmbedding
    extended: CombEmbedding
    vertex_map: Mapping[int, int]
    edge_map: Mapping[int, tuple[int, ...]]

    @classmethod
    def identity(cls, base: CombEmbedding, extended: CombEmbedding) -> "ExtensionMap":
        return cls(base, extended, {v: v for v in base.vertices}, {e: (2 * e,) for e in base.edges})

    def base_dart_image(self, d: int) -> int:
        path = self.edge_map[d >> 1]
        return path[0] if d & 1 == 0 else path[-1] ^ 1


@dataclass
class ExtensionReport:
    ok: bool
    problems: list[str] = field(default_factory=list)
    subdivision: CombEmbedding | None = None
    added_vertices: tuple[int, ...] = ()
    added_edges: tuple[int, ...] = ()
    region_of_vertex: dict[int, int] = field(default_factory=dict)
    region_of_edge: dict[int, int] = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.ok


def _check_map_shape(ext: ExtensionMap, allow_subdivision: bool) -> tuple[set[int], set[int]]:
    base, big = ext.base, ext.extended
    vmap = dict(ext.vertex_map)
    if set(vmap) != set(base.vertices):
        raise ExtensionMapError("vertex map must cover exactly the base vertices")
    images = list(vmap.values())
    if len(set(images)) != len(images):
        raise ExtensionMapError("vertex map is not injective")
    if not set(images) <= set(big.rotation):
        raise ExtensionMapError("vertex map leaves the extended vertex set")
    if set(ext.edge_map) != set(base.edges):
        raise ExtensionMapError("edge map must cover exactly the base edges")
    used_edges: set[int] = set()
    interior: set[int] = set()
    for e, path in ext.edge_map.items():
        path = tuple(path)
        if not path:
            raise ExtensionMapError(f"edge {e}: empty path")
        if not allow_subdivision and len(path) != 1:
            raise ExtensionMapError(f"edge {e}: subdivided in a plain extension")
        for d in path:
            if (d >> 1) not in big.edges:
                raise ExtensionMapError(f"edge {e}: dart {d} not in extended embedding")
            if (d >> 1) in used_edges:
                raise ExtensionMapError(f"edge {e}: extended edge {d >> 1} used twice")
            used_edges.add(d >> 1)
        a, b = base.edges[e]
        if big.vertex_of(path[0]) != vmap[a] or big.head_of(path[-1]) != vmap[b]:
            raise ExtensionMapError(f"edge {e}: path endpoints do not match the vertex map")
        for d1, d2 in zip(path, path[1:]):
            x = big.head_of(d1)
            if x != big.vertex_of(d2):
                raise ExtensionMapError(f"edge {e}: path is not contiguous")
            if x in interior or x in images:
                raise ExtensionMapError(f"edge {e}: subdivision vertex {x} is not fresh")
            interior.add(x)
    return used_edges, set(images) | interior


def _extension_report(base_emb: CombEmbedding, ext: ExtensionMap, allow_subdivision: bool) -> ExtensionReport:
    require_valid(base_emb)
    if ext.base != base_emb:
        return ExtensionReport(False, ["extension map was built for a different base embedding"])
    big = ext.extended
    problems: list[str] = []
    if not big.validation.ok:
        return ExtensionReport(False, ["extended embedding invalid: " + "; ".join(big.validation.problems)])
    sub_edges, sub_vertices = _check_map_shape(ext, allow_subdivision)
    sub = restrict(big, sub_edges, sub_vertices)

    # (a) the extended rotations restricted to the image of the base reproduce it
    for v in base_emb.vertices:
        want = tuple(ext.base_dart_image(d) for d in base_emb.rotation[v])
        got = sub.rotation[ext.vertex_map[v]]
        if want and (len(got) != len(want) or sub.rotation_from(ext.vertex_map[v], want[0]) != want):
            problems.append(f"rotation at base vertex {v} is not preserved")
    if problems:
        return ExtensionReport(False, problems, sub)
    face_to_base = {0: 0} if not base_emb.edges else {
        sub.corner_face(ext.base_dart_image(d)): base_emb.corner_face(d) for d in base_emb.darts
    }

    # (b) each connected piece of added material sits inside a single region
    added_vertices = tuple(v for v in big.vertices if v not in sub_vertices)
    added_edges = tuple(e for e in big.edges if e not in sub_edges)
    uf = UnionFind()
    regions: dict[object, set[int]] = {}
    for e in added_edges:
        uf[("e", e)]
        for d in (2 * e, 2 * e + 1):
            v = big.vertex_of(d)
            if v in sub_vertices:
                regions.setdefault(("e", e), set()).add(_sub_corner_face(big, sub, d))
            else:
                uf.union(("e", e), ("v", v))
    for v in added_vertices:
        uf[("v", v)]
    piece_regions: dict[object, set[int]] = {}
    for key, faces in regions.items():
        piece_regions.setdefault(uf[key], set()).update(faces)
    region_of_vertex, region_of_edge = {}, {}
    for v in added_vertices:
        faces = piece_regions.get(uf[("v", v)], set())
        if len(faces) != 1:
            problems.append(f"added vertex {v} touches {len(faces)} regions of the base")
        else:
            region_of_vertex[v] = face_to_base[next(iter(faces))]
    for e in added_edges:
        faces = piece_regions.get(uf[("e", e)], set())
        if len(faces) != 1:
            problems.append(f"added edge {e} touches {len(faces)} regions of the base")
        else:
            region_of_edge[e] = face_to_base[next(iter(faces))]
    g_big, g_sub = stats(big).genus, stats(sub).genus
    if g_big != g_sub:
        problems.append(f"genus changes from {g_sub} to {g_big}")
    return ExtensionReport(not problems, problems, sub, added_vertices, added_edges, region_of_vertex, region_of_edge)


def _sub_corner_face(big: CombEmbedding, sub: CombEmbedding, d: int) -> int:
    """Face of ``sub`` containing the corner where added dart ``d`` leaves its tail."""
    v = big.vertex_of(d)
    if not sub.rotation[v]:
        return 0
    sub_edges = sub.edges
    nxt = big.sigma[d]
    while (nxt >> 1) not in sub_edges:
        nxt = big.sigma[nxt]
    return sub.corner_face(nxt)


def is_extension(base_emb: CombEmbedding, ext: ExtensionMap) -> ExtensionReport:
    """Does ``ext.extended`` extend ``base_emb`` with all new material inside regions?"""
    return _extension_report(base_emb, ext, allow_subdivision=False)


def is_topological_extension(base_emb: CombEmbedding, ext: ExtensionMap) -> ExtensionReport:
    """Like :func:`is_extension`, but base edges may map to subdivided paths."""
    return _extension_report(base_emb, ext, allow_subdivision=True)


def restore_base(ext: ExtensionMap) -> CombEmbedding:
    """Delete the added material of a plain extension and relabel back to base ids."""
    big = ext.extended
    image_edges = {ext.edge_map[e][0] >> 1 for e in ext.base.edges}
    sub = restrict(big, image_edges, ext.vertex_map.values())
    back_v = {w: v for v, w in ext.vertex_map.items()}
    back_d = {}
    for e in ext.base.edges:
        d = ext.edge_map[e][0]
        back_d[d] = 2 * e
        back_d[d ^ 1] = 2 * e + 1
    rotation = {back_v[w]: tuple(back_d[d] for d in sub.rotation[w]) for w in back_v}
    edges = {e: ext.base.edges[e] for e in ext.base.edges}
    return CombEmbedding(edges, rotation)
